import pytest
from hypothesis import given

from primal_deduct.syntax import (
    BOT,
    TOP,
    And,
    Imp,
    Or,
    ParseError,
    Sequent,
    Var,
    parse_formula,
    parse_sequent,
    proper_subformulas,
    sequent_subformulas,
    subformulas,
    substitute,
)

from .conftest import formula_strategy

x, y, z = Var("x"), Var("y"), Var("z")


def test_parse_basic_shapes():
    assert parse_formula("x1 -> x2") is Imp(Var("x1"), Var("x2"))
    assert parse_formula("(x & x) -> x") is Imp(And(x, x), x)
    assert parse_formula("a -> b -> c") is Imp(Var("a"), Imp(Var("b"), Var("c")))
    assert parse_formula("top") is TOP
    assert parse_formula("bot") is BOT


def test_precedence_and_associativity():
    assert parse_formula("x & y | z") is Or(And(x, y), z)
    assert parse_formula("x | y -> z") is Imp(Or(x, y), z)
    assert parse_formula("x & y & z") is And(And(x, y), z)
    assert parse_formula("x | y | z") is Or(Or(x, y), z)
    assert parse_formula("x & (y & z)") is And(x, And(y, z))


def test_interning_identity_across_construction_orders():
    a = And(Imp(x, y), Imp(x, y))
    b = And(parse_formula("x -> y"), Imp(x, y))
    assert a is b
    assert a.fid == b.fid


def test_parse_sequent_shapes():
    assert parse_sequent("|- top") == Sequent((), TOP)
    s = parse_sequent("x -> x |- (x & x) -> x")
    assert len(s.antecedents) == 1
    assert parse_sequent("p, p |- p") == Sequent({Var("p")}, Var("p"))


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse_formula("x ->")
    assert e.value.position == 4
    with pytest.raises(ParseError):
        parse_sequent("x, y")  # missing turnstile
    with pytest.raises(ParseError):
        parse_formula("x @ y")
    with pytest.raises(ParseError):
        parse_formula("(x -> y")


def test_printer_minimal_parentheses():
    cases = [
        "x & x -> x",
        "(x -> y) -> z",
        "x -> y -> z",
        "(x | y) & z",
        "x | y & z",
        "x & (y & z)",
        "(x -> bot) -> (y -> bot) -> bot",
    ]
    for text in cases:
        f = parse_formula(text)
        assert str(f) == text
        assert parse_formula(str(f)) is f


@given(formula_strategy(connectives=(And, Imp, Or), max_leaves=10))
def test_print_parse_round_trip(f):
    assert parse_formula(str(f)) is f


@given(formula_strategy(connectives=(And, Imp, Or), max_leaves=10))
def test_subformula_count_bounded_by_length(f):
    assert 1 <= len(subformulas(f)) <= f.length


def test_subformulas_examples():
    assert subformulas(x) == {x}
    f = Imp(And(x, y), x)
    assert subformulas(f) == {x, y, And(x, y), f}
    s = parse_sequent("x -> x |- (x & x) -> x")
    subs = sequent_subformulas(s)
    assert subs == {x, And(x, x), Imp(x, x), Imp(And(x, x), x)}
    assert len(subs) == 4


def test_proper_subformulas_positional():
    s = Sequent({x}, x)
    assert proper_subformulas(s, frozenset()) == {x}
    helper = Imp(x, x)
    s2 = Sequent({helper}, y)
    assert proper_subformulas(s2, {helper}) == {y}
    s3 = Sequent({x, helper}, y)
    assert proper_subformulas(s3, {helper}) == {x, y}


def test_proper_subformulas_empty_helpers_is_subformulas():
    s = parse_sequent("x & y, y -> z |- z & (x -> y)")
    assert proper_subformulas(s, frozenset()) == sequent_subformulas(s)


def test_substitute():
    f = Imp(Var("x0"), And(Var("x0"), y))
    g = substitute(f, "x0", And(x, x))
    assert g is Imp(And(x, x), And(And(x, x), y))
    assert substitute(f, "q", z) is f


def test_variable_names_rejected():
    with pytest.raises(ValueError):
        Var("top")
    with pytest.raises(ValueError):
        Var("1bad")


def test_sequent_antecedents_are_sets():
    a = parse_sequent("x, y |- z")
    b = parse_sequent("y, x, x |- z")
    assert a == b
    assert hash(a) == hash(b)
    assert str(b) == "x, y |- z"
