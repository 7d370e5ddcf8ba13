import itertools

import pytest

from primal_deduct.calculi import BL, CL, IL, ML, PEL0, PL, check_proof
from primal_deduct.oracle import (
    CapExceededError,
    SaturationConfig,
    bounded_theorem,
    enumerate_small_sequents,
    extract_proof,
    padded_universe,
    saturate,
    subformula_universe,
)
from primal_deduct.syntax import BOT, TOP, And, Imp, Sequent, Var, parse_sequent

x, y = Var("x"), Var("y")


class TestSaturate:
    def test_primal_contains_conjunction_splitting(self):
        s = parse_sequent("x |- x & x")
        result = saturate(
            SaturationConfig(PL, universe=subformula_universe(s.formulas())), s.antecedents
        )
        assert result.derives(s)
        assert not result.partial

    def test_weak_rewriting_reaches_the_goal(self):
        s = parse_sequent("x -> x |- (x & x) -> x")
        result = saturate(
            SaturationConfig(PEL0, universe=subformula_universe(s.formulas())), s.antecedents
        )
        assert result.derives(s)

    def test_basic_logic_without_conjunction_is_inert(self):
        universe = frozenset({x, y, TOP})
        result = saturate(SaturationConfig(BL, universe=universe), {x})
        derived = result.derived[frozenset({x})]
        assert derived == {x, TOP}

    def test_step_bound_marks_partial(self):
        s = parse_sequent("x -> x |- (x & x) -> x")
        config = SaturationConfig(
            PEL0, universe=subformula_universe(s.formulas()), step_bound=1
        )
        result = saturate(config, s.antecedents)
        assert result.partial

    def test_full_powerset_agrees_on_tiny_instances(self):
        universe = subformula_universe([And(x, y), Imp(x, y)])
        plain = saturate(SaturationConfig(PL, universe=universe), {And(x, y)})
        power = saturate(
            SaturationConfig(PL, universe=universe, full_powerset=True), {And(x, y)}
        )
        ctx = frozenset({And(x, y)})
        assert plain.derived[ctx] == power.derived[ctx]

    def test_sequents_listing_contains_goal(self):
        s = parse_sequent("x |- x & x")
        result = saturate(
            SaturationConfig(PL, universe=subformula_universe(s.formulas())), s.antecedents
        )
        assert s in set(result.sequents())

    def test_query_outside_universe_is_an_error(self):
        result = saturate(SaturationConfig(PL, universe=frozenset({x})), {x})
        with pytest.raises(ValueError):
            result.derives(Sequent({x}, y))


class TestBoundedTheorem:
    def test_tri_state(self):
        s = parse_sequent("x -> x |- (x & x) -> x")
        u = subformula_universe(s.formulas())
        assert bounded_theorem(s, PEL0, u) is True
        assert bounded_theorem(s, PL, u) is False
        assert bounded_theorem(s, PEL0, u, step_bound=1) is None

    def test_minimal_logic_introduction(self):
        assert bounded_theorem(parse_sequent("|- x -> x"), ML) is True
        assert bounded_theorem(parse_sequent("|- x -> (y -> x)"), ML) is True
        assert bounded_theorem(parse_sequent("|- x"), ML) is False
        assert bounded_theorem(parse_sequent("bot |- x"), ML) is False

    def test_intuitionistic_explosion(self):
        assert bounded_theorem(parse_sequent("bot |- x"), IL) is True
        assert bounded_theorem(parse_sequent("|- bot -> x"), IL) is True

    def test_classical_case_split(self):
        s = parse_sequent("|- ((x -> bot) -> bot) -> x")
        u = padded_universe(subformula_universe(s.formulas()), 2 * s.total_length)
        assert bounded_theorem(s, CL, u) is True

    def test_pel0_universe_padding_stable(self):
        for text in (
            "x -> x |- (x & x) -> x",
            "x & x |- x",
            "|- x -> y",
            "x -> y |- y -> x",
        ):
            s = parse_sequent(text)
            u = subformula_universe(s.formulas())
            padded = padded_universe(u, 2 * s.total_length)
            assert bounded_theorem(s, PEL0, u) == bounded_theorem(s, PEL0, padded)


class TestExtraction:
    def test_extracted_proofs_validate(self):
        cases = [
            (parse_sequent("x |- x & x"), PL),
            (parse_sequent("x -> x |- (x & x) -> x"), PEL0),
            (parse_sequent("|- x -> (y -> x)"), ML),
            (parse_sequent("bot |- x & x"), IL),
            (parse_sequent("|- ((x -> bot) -> bot) -> x"), CL),
        ]
        for s, logic in cases:
            u = padded_universe(subformula_universe(s.formulas()), 2 * s.total_length)
            config = SaturationConfig(logic, universe=u, track_provenance=True)
            result = saturate(config, s.antecedents)
            assert result.derives(s), (s, logic)
            proof = extract_proof(result, s)
            assert proof.conclusion == s
            assert check_proof(proof, logic) is None, (s, logic)

    def test_extraction_requires_provenance(self):
        s = parse_sequent("x |- x & x")
        result = saturate(
            SaturationConfig(PL, universe=subformula_universe(s.formulas())), s.antecedents
        )
        with pytest.raises(ValueError):
            extract_proof(result, s)

    def test_underivable_extracts_none(self):
        s = parse_sequent("|- x")
        config = SaturationConfig(
            PL, universe=subformula_universe(s.formulas()), track_provenance=True
        )
        result = saturate(config, s.antecedents)
        assert extract_proof(result, s) is None


class TestEnumerator:
    def test_depth_zero_atoms(self):
        family = list(enumerate_small_sequents(1, 0, 1, ("and",)))
        rendered = {str(s) for s in family}
        assert "|- x1" in rendered
        assert "x1 |- x1" in rendered
        assert "|- top" in rendered
        assert "top |- x1" in rendered
        assert len(family) == 6  # atoms {x1, top}: 2 consequents x 3 antecedent choices

    def test_frozen_count_regression(self):
        # vars=1, depth=1, one antecedent slot, conjunction+implication
        family = list(enumerate_small_sequents(1, 1, 1, ("and", "imp")))
        assert len(family) == 110  # 10 formulas, 10 x (1 + 10) sequents

    def test_deterministic_byte_identical(self):
        a = "\n".join(str(s) for s in enumerate_small_sequents(2, 1, 2, ("and", "imp", "bot")))
        b = "\n".join(str(s) for s in enumerate_small_sequents(2, 1, 2, ("and", "imp", "bot")))
        assert a == b

    def test_ascending_total_length_and_unique(self):
        family = list(
            enumerate_small_sequents(2, 2, 2, ("and", "imp", "bot"), max_total_length=5)
        )
        lengths = [s.total_length for s in family]
        assert lengths == sorted(lengths)
        assert len(set(family)) == len(family)

    def test_duplicate_antecedents_collapse(self):
        family = list(enumerate_small_sequents(1, 0, 2, ("and",)))
        for s in family:
            assert len(s.antecedents) <= 2

    def test_cap_enforced(self):
        with pytest.raises(CapExceededError):
            list(enumerate_small_sequents(2, 2, 2, ("and", "imp", "bot"), cap=100))
        with pytest.raises(CapExceededError):
            list(
                enumerate_small_sequents(
                    2, 2, 2, ("and", "imp", "bot"), max_total_length=8, cap=100
                )
            )

    def test_length_frontier_is_a_prefix(self):
        frontier = list(
            enumerate_small_sequents(1, 1, 1, ("and", "imp"), max_total_length=4)
        )
        full = list(enumerate_small_sequents(1, 1, 1, ("and", "imp")))
        assert full[: len(frontier)] == frontier
