import itertools

import pytest

from primal_deduct.calculi import ML, PEL1, PEL2, check_proof
from primal_deduct.oracle import (
    SaturationConfig,
    bounded_theorem,
    enumerate_small_sequents,
    extract_proof,
    saturate,
    subformula_universe,
)
from primal_deduct.reductions import (
    ReductionId,
    apply_reduction,
    pel1_helpers,
    pel2_helpers,
    reduce_clor_to_cl,
    reduce_il_to_ml,
    reduce_ml_to_pel1,
    reduce_ml_to_pel2,
    translate_ml_proof_to_pel1,
    translate_ml_proof_to_pel2,
)
from primal_deduct.semantics import countermodel_search, decide_cl_truthtable
from primal_deduct.syntax import (
    BOT,
    TOP,
    And,
    DisjunctionError,
    Imp,
    Or,
    Sequent,
    Var,
    contains_or,
    parse_formula,
    parse_sequent,
)

from .curated import IL_NON_THEOREMS, IL_THEOREMS, ML_NON_THEOREMS, ML_THEOREMS

x, y = Var("x"), Var("y")


class TestDisjunctionElimination:
    def test_mapping_clause(self):
        image = reduce_clor_to_cl(Sequent((), Or(x, y)))
        assert image.consequent is parse_formula("(x -> bot) -> (y -> bot) -> bot")

    def test_fixed_point_on_or_free(self):
        s = parse_sequent("x -> y, x & y |- top")
        assert reduce_clor_to_cl(s) == s

    def test_idempotent(self):
        for text in ("|- x | y", "x | (y & x) |- x -> y | x", "|- (x | y) | x"):
            once = reduce_clor_to_cl(parse_sequent(text))
            assert reduce_clor_to_cl(once) == once

    def test_or_free_output(self):
        s = parse_sequent("x | (y | x) |- (x -> y | x) & y")
        image = reduce_clor_to_cl(s)
        assert not any(contains_or(f) for f in image.formulas())

    def test_validity_preserved_on_paper_example(self):
        s = parse_sequent("|- x | (x -> bot)")
        assert decide_cl_truthtable(s) is True
        assert decide_cl_truthtable(reduce_clor_to_cl(s)) is True

    def test_truthtable_equivalence_small_family(self):
        family = enumerate_small_sequents(
            2, 2, 1, ("and", "imp", "or", "bot"), max_total_length=6, cap=painless := 2_000_000
        )
        checked = 0
        for s in family:
            or_count = sum(1 for f in s.formulas() if contains_or(f))
            if or_count != 1:
                continue
            image = reduce_clor_to_cl(s)
            assert decide_cl_truthtable(s) == decide_cl_truthtable(image)
            assert not any(contains_or(f) for f in image.formulas())
            checked += 1
        assert checked > 300


class TestExplosionHelpers:
    def test_paper_image(self):
        image = reduce_il_to_ml(parse_sequent("bot |- x"))
        assert image == parse_sequent("bot, bot -> x |- x")
        assert str(image) == "bot, bot -> x |- x"

    def test_no_variables_no_helpers(self):
        assert reduce_il_to_ml(parse_sequent("|- top")) == parse_sequent("|- top")
        assert reduce_il_to_ml(parse_sequent("bot |- bot")) == parse_sequent("bot |- bot")

    def test_helpers_cover_every_variable(self):
        image = reduce_il_to_ml(parse_sequent("x |- y"))
        assert image == parse_sequent("x, bot -> x, bot -> y |- y")

    def test_linear_blowup(self):
        s = parse_sequent("x1 & x2 & x3 |- x4")
        image = reduce_il_to_ml(s)
        assert image.total_length <= 4 * s.total_length

    def test_theorems_map_to_theorems(self):
        for s in IL_THEOREMS:
            assert bounded_theorem(reduce_il_to_ml(s), ML) is True

    def test_non_theorems_stay_refutable(self):
        for s in IL_NON_THEOREMS:
            image = reduce_il_to_ml(s)
            found = countermodel_search(image, 2, semantics="standard") or countermodel_search(
                image, 3, semantics="standard"
            )
            assert found is not None, image


class TestSubstitutionHelpers:
    def test_helper_shapes_for_reflexive_implication(self):
        s = parse_sequent("|- x -> x")
        helpers = pel1_helpers(s)
        both = And(x, x)
        assert Imp(both, both) in helpers
        assert Imp(Imp(x, both), Imp(x, x)) in helpers
        helpers2 = pel2_helpers(s)
        assert Imp(x, x) in helpers2
        assert Imp(Imp(x, both), Imp(x, x)) in helpers2

    def test_helper_counts_single_subformula(self):
        s = parse_sequent("|- top")
        assert len(pel1_helpers(s)) == 2
        assert len(pel2_helpers(s)) == 2

    def test_helper_counts_ordered_pairs(self):
        s = parse_sequent("|- x -> y")  # subformulas: x, y, x -> y
        assert len(pel1_helpers(s)) == 18  # 2 shapes x 3^2 ordered pairs
        assert len(pel2_helpers(s)) == 12  # 3 + 3^2

    def test_polynomial_blowup(self):
        for text in ("|- x -> y", "x & y |- x -> (y -> x)", "x1 -> x2, x2 -> x3 |- x1 -> x3"):
            s = parse_sequent(text)
            n = s.total_length
            assert reduce_ml_to_pel1(s).total_length <= 60 * n**3
            assert reduce_ml_to_pel2(s).total_length <= 60 * n**3

    def test_disjunction_rejected(self):
        with pytest.raises(DisjunctionError):
            reduce_ml_to_pel1(parse_sequent("|- x | y"))
        with pytest.raises(DisjunctionError):
            reduce_ml_to_pel2(parse_sequent("|- x | y"))

    def test_apply_reduction_dispatch(self):
        s = parse_sequent("bot |- x")
        assert apply_reduction(ReductionId.IL_TO_ML, s) == reduce_il_to_ml(s)


def ml_proof(sequent):
    config = SaturationConfig(
        ML, universe=subformula_universe(sequent.formulas()), track_provenance=True
    )
    result = saturate(config, sequent.antecedents)
    assert result.derives(sequent)
    return extract_proof(result, sequent)


class TestTheoremPreservation:
    def test_translation_certificates_for_all_curated_theorems(self):
        for s in ML_THEOREMS:
            proof = ml_proof(s)
            image1 = reduce_ml_to_pel1(s)
            cert1 = translate_ml_proof_to_pel1(proof, image1)
            assert check_proof(cert1, PEL1) is None
            assert cert1.conclusion == image1
            image2 = reduce_ml_to_pel2(s)
            cert2 = translate_ml_proof_to_pel2(proof, image2)
            assert check_proof(cert2, PEL2) is None
            assert cert2.conclusion == image2

    def test_bounded_oracle_confirms_simple_images(self):
        s = parse_sequent("|- x -> x")
        image = reduce_ml_to_pel1(s)
        assert bounded_theorem(image, PEL1, step_bound=400_000, max_context_extension=1) is True
        image2 = reduce_ml_to_pel2(s)
        assert bounded_theorem(image2, PEL2, step_bound=400_000, max_context_extension=1) is True

    def test_non_theorem_images_have_countermodels(self):
        # The substitution targets sit below minimal logic, so a standard
        # countermodel of the image refutes them as well.
        for s in ML_NON_THEOREMS[:8]:
            for image in (reduce_ml_to_pel1(s), reduce_ml_to_pel2(s)):
                found = countermodel_search(image, 1, semantics="standard") or countermodel_search(
                    image, 2, semantics="standard"
                )
                assert found is not None, image
