import pytest

from primal_deduct.calculi import (
    PL,
    PL_ED,
    Proof,
    ProofStep,
    RuleTag,
    check_proof,
    parse_proof,
)
from primal_deduct.pl_decider import decide_pl, extract_pl_proof
from primal_deduct.semantics import (
    KripkeModel,
    ModelInvariantError,
    SearchBoundError,
    UndeclaredImplicationError,
    Valuation,
    VariableCapError,
    countermodel_search,
    decide_cl_truthtable,
    evaluate_valuation,
    format_countermodel,
    model_check,
    soundness_check,
)
from primal_deduct.syntax import (
    BOT,
    TOP,
    And,
    DisjunctionError,
    Imp,
    Or,
    Sequent,
    Var,
    parse_sequent,
)

from .conftest import FIXTURES, random_formula

x, y = Var("x"), Var("y")
x1, x2 = Var("x1"), Var("x2")


class TestValuation:
    def test_clauses(self):
        v = Valuation({"x": True, "y": False})
        assert v.formula(TOP) is True
        assert v.formula(BOT) is False
        assert v.formula(And(x, y)) is False
        assert v.formula(Imp(x, y)) is False  # collapses to the consequent
        assert v.formula(Imp(y, x)) is True

    def test_all_false_refutes_variable(self):
        assert evaluate_valuation(Valuation(), parse_sequent("|- x1")) is False

    def test_degenerate_theorem_true_everywhere(self):
        s = parse_sequent("x1 -> x2 |- x2")
        for a in (False, True):
            for b in (False, True):
                assert evaluate_valuation(Valuation({"x1": a, "x2": b}), s) is True

    def test_sequent_clause(self):
        assert evaluate_valuation(Valuation(), parse_sequent("|- top")) is True
        assert evaluate_valuation(Valuation(), parse_sequent("x |- y")) is True  # false antecedent
        assert evaluate_valuation(Valuation({"x": True}), parse_sequent("x |- y")) is False

    def test_disjunction_rejected(self):
        with pytest.raises(DisjunctionError):
            evaluate_valuation(Valuation(), Sequent((), Or(x, y)))


class TestSoundness:
    def test_fixture_proofs_sound(self):
        proof = parse_proof((FIXTURES / "degenerate_implication.proof").read_text())
        assert soundness_check(proof) is None

    def test_reflexivity_proof_sound(self):
        proof = Proof([ProofStep(Sequent({x}, x), RuleTag.X2X)])
        assert soundness_check(proof) is None

    def test_rejects_invalid_proofs(self):
        bogus = Proof([ProofStep(Sequent((), x), RuleTag.TOP)])
        with pytest.raises(ValueError):
            soundness_check(bogus)

    def test_extracted_proofs_sound(self, rng):
        for _ in range(30):
            hyps = frozenset(random_formula(rng, rng.randint(1, 5)) for _ in range(rng.randint(0, 2)))
            goal = random_formula(rng, rng.randint(1, 5))
            proof = extract_pl_proof(Sequent(hyps, goal))
            if proof is not None:
                assert soundness_check(proof) is None


def two_world_model():
    imp_xx = Imp(x1, x1)
    both = And(x1, x1)
    imp_up = Imp(x1, both)
    imp_down = Imp(both, x1)
    universe = frozenset({imp_xx, imp_up, imp_down})
    return KripkeModel(
        worlds=("low", "high"),
        order={("low", "high")},
        true_atoms={"low": set(), "high": {x1}},
        true_imps={"low": {imp_xx}, "high": {imp_xx, imp_up, imp_down}},
        universe=universe,
    )


class TestKripke:
    def test_two_world_model_refutes_both_separating_sequents(self):
        model = two_world_model()
        weakened = Sequent({Imp(x1, x1)}, Imp(And(x1, x1), x1))
        widened = Sequent({Imp(x1, x1)}, Imp(x1, And(x1, x1)))
        assert model_check(model, "low", weakened) is False
        assert model_check(model, "low", widened) is False
        assert model_check(model, "high", weakened) is True

    def test_variable_true_only_upstairs(self):
        model = two_world_model()
        goal = Sequent((), x1)
        assert model_check(model, "low", goal) is False
        assert model_check(model, "high", goal) is True

    def test_reflexive_sequents_always_true(self):
        model = two_world_model()
        for f in (x1, And(x1, x1), Imp(x1, x1)):
            assert model_check(model, "low", Sequent({f}, f)) is True

    def test_condition_one_enforced(self):
        # x true but x -> x false: a true consequent forces the implication
        with pytest.raises(ModelInvariantError):
            KripkeModel(
                worlds=("w",),
                order=(),
                true_atoms={"w": {x}},
                true_imps={"w": set()},
                universe=frozenset({Imp(x, x)}),
            )

    def test_condition_two_enforced(self):
        with pytest.raises(ModelInvariantError):
            KripkeModel(
                worlds=("w",),
                order=(),
                true_atoms={"w": {x}},
                true_imps={"w": {Imp(x, y)}},
                universe=frozenset({Imp(x, y)}),
            )

    def test_persistence_enforced(self):
        with pytest.raises(ModelInvariantError):
            KripkeModel(
                worlds=("a", "b"),
                order={("a", "b")},
                true_atoms={"a": {x}, "b": set()},
                true_imps={"a": set(), "b": set()},
                universe=frozenset(),
            )
        with pytest.raises(ModelInvariantError):
            KripkeModel(
                worlds=("a", "b"),
                order={("a", "b")},
                true_atoms={"a": set(), "b": set()},
                true_imps={"a": {Imp(x, y)}, "b": set()},
                universe=frozenset({Imp(x, y)}),
            )

    def test_order_must_be_antisymmetric(self):
        with pytest.raises(ModelInvariantError):
            KripkeModel(
                worlds=("a", "b"),
                order={("a", "b"), ("b", "a")},
                true_atoms={},
                true_imps={},
                universe=frozenset(),
            )

    def test_undeclared_implication(self):
        model = two_world_model()
        with pytest.raises(UndeclaredImplicationError):
            model_check(model, "low", Sequent((), Imp(x1, Imp(x1, x1))))

    def test_standard_models_validate(self):
        universe = frozenset({Imp(x, y)})
        model = KripkeModel.standard(
            ("a", "b"), {("a", "b")}, {"a": set(), "b": {x, y}}, universe
        )
        assert model.formula_true("b", Imp(x, y)) is True


class TestCountermodelSearch:
    def test_finds_refutation_for_weakened_conjunction(self):
        s = parse_sequent("x -> x |- (x & x) -> x")
        found = countermodel_search(s, max_worlds=2)
        assert found is not None
        model, world = found
        assert model_check(model, world, s) is False
        text = format_countermodel(model, world, s)
        assert "worlds =" in text and "sequent =" in text

    def test_none_for_axiom(self):
        assert countermodel_search(parse_sequent("|- top"), max_worlds=2) is None

    def test_none_for_primal_theorem_at_any_bound(self):
        s = parse_sequent("x |- x & x")
        assert decide_pl(s) is True
        for bound in (1, 2):
            assert countermodel_search(s, max_worlds=bound) is None

    def test_world_cap(self):
        with pytest.raises(SearchBoundError):
            countermodel_search(parse_sequent("|- x"), max_worlds=9)

    def test_standard_semantics_refutes_nontheorems_of_minimal_logic(self):
        assert countermodel_search(parse_sequent("bot |- x"), 1, semantics="standard") is not None
        assert countermodel_search(parse_sequent("|- x -> x"), 2, semantics="standard") is None

    def test_disjunction_rejected(self):
        with pytest.raises(DisjunctionError):
            countermodel_search(Sequent((), Or(x, y)))


class TestTruthTable:
    def test_fixture_values(self):
        assert decide_cl_truthtable(parse_sequent("x1 -> x2 |- x2")) is False
        assert decide_cl_truthtable(parse_sequent("bot |- y")) is True
        assert decide_cl_truthtable(parse_sequent("|- x | (x -> bot)")) is True
        assert decide_cl_truthtable(parse_sequent("|- ((x -> bot) -> bot) -> x")) is True
        assert decide_cl_truthtable(parse_sequent("|- x | y")) is False

    def test_variable_cap(self):
        wide = Sequent((), And(*[Var(f"v{i}") for i in range(2)]))
        assert decide_cl_truthtable(wide, variable_cap=2) is False
        with pytest.raises(VariableCapError):
            decide_cl_truthtable(wide, variable_cap=1)

    def test_agrees_with_proof_fixtures(self):
        or_proof = parse_proof((FIXTURES / "or_elimination.proof").read_text())
        assert decide_cl_truthtable(or_proof.conclusion) is True
        back = parse_proof((FIXTURES / "excluded_middle_disjunction.proof").read_text())
        assert decide_cl_truthtable(back.conclusion) is True
