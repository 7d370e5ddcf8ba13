"""Theoremhood-preserving sequent mappings between the catalogued logics.

Each reduction is a pure transformation: the disjunction elimination map
rewrites every disjunction into nested implications against bot, and the
remaining three extend the antecedents with helper formulas that let the
weaker target logic simulate the stronger source rule.
"""

from __future__ import annotations

import enum

from .calculi import Proof, ProofBuilder, ProofStep, RuleTag
from .syntax import (
    AND,
    BOT,
    IMP,
    OR,
    And,
    DisjunctionError,
    Formula,
    Imp,
    Sequent,
    Var,
    contains_or,
    formula_key,
    sequent_subformulas,
    variables_of,
)

__all__ = [
    "ReductionId",
    "reduce_clor_to_cl",
    "reduce_il_to_ml",
    "reduce_ml_to_pel1",
    "reduce_ml_to_pel2",
    "apply_reduction",
    "pel1_helpers",
    "pel2_helpers",
    "translate_ml_proof_to_pel1",
    "translate_ml_proof_to_pel2",
]


class ReductionId(enum.Enum):
    CLOR_TO_CL = "clor-to-cl"
    IL_TO_ML = "il-to-ml"
    ML_TO_PEL1 = "ml-to-pel1"
    ML_TO_PEL2 = "ml-to-pel2"

    def __str__(self) -> str:
        return self.value


def _eliminate_or(f: Formula, cache: dict[Formula, Formula]) -> Formula:
    cached = cache.get(f)
    if cached is not None:
        return cached
    if f.is_atom:
        result = f
    elif f.kind == AND:
        result = And(_eliminate_or(f.left, cache), _eliminate_or(f.right, cache))
    elif f.kind == IMP:
        result = Imp(_eliminate_or(f.left, cache), _eliminate_or(f.right, cache))
    else:  # a | b  becomes  (a -> bot) -> ((b -> bot) -> bot)
        left = _eliminate_or(f.left, cache)
        right = _eliminate_or(f.right, cache)
        result = Imp(Imp(left, BOT), Imp(Imp(right, BOT), BOT))
    cache[f] = result
    return result


def reduce_clor_to_cl(sequent: Sequent) -> Sequent:
    """Disjunction-free classical image; idempotent, validity-preserving."""
    cache: dict[Formula, Formula] = {}
    return Sequent(
        (_eliminate_or(a, cache) for a in sequent.antecedents),
        _eliminate_or(sequent.consequent, cache),
    )


def reduce_il_to_ml(sequent: Sequent) -> Sequent:
    """Make bot explosive by hypothesis: add ``bot -> x`` for every variable.

    On the target side bot is just another atom; the helpers supply every
    instance of explosion the source derivation could have used.
    """
    names: set[str] = set()
    for f in sequent.formulas():
        names |= variables_of(f)
    helpers = {Imp(BOT, Var(name)) for name in names}
    return Sequent(sequent.antecedents | helpers, sequent.consequent)


def pel1_helpers(sequent: Sequent) -> frozenset[Formula]:
    """Helper antecedents over every ordered pair of subformulas."""
    subs = sorted(sequent_subformulas(sequent), key=formula_key)
    helpers: set[Formula] = set()
    for psi in subs:
        for omega in subs:
            both = And(psi, omega)
            helpers.add(Imp(both, both))
            helpers.add(Imp(Imp(psi, both), Imp(psi, omega)))
    return frozenset(helpers)


def pel2_helpers(sequent: Sequent) -> frozenset[Formula]:
    subs = sorted(sequent_subformulas(sequent), key=formula_key)
    helpers: set[Formula] = set()
    for psi in subs:
        helpers.add(Imp(psi, psi))
        for omega in subs:
            helpers.add(Imp(Imp(psi, And(psi, omega)), Imp(psi, omega)))
    return frozenset(helpers)


def _require_or_free(sequent: Sequent) -> None:
    for f in sequent.formulas():
        if contains_or(f):
            raise DisjunctionError(f"this reduction is defined for disjunction-free sequents: {f}")


def reduce_ml_to_pel1(sequent: Sequent) -> Sequent:
    _require_or_free(sequent)
    return Sequent(sequent.antecedents | pel1_helpers(sequent), sequent.consequent)


def reduce_ml_to_pel2(sequent: Sequent) -> Sequent:
    _require_or_free(sequent)
    return Sequent(sequent.antecedents | pel2_helpers(sequent), sequent.consequent)


_REDUCTIONS = {
    ReductionId.CLOR_TO_CL: reduce_clor_to_cl,
    ReductionId.IL_TO_ML: reduce_il_to_ml,
    ReductionId.ML_TO_PEL1: reduce_ml_to_pel1,
    ReductionId.ML_TO_PEL2: reduce_ml_to_pel2,
}


def apply_reduction(reduction: ReductionId, sequent: Sequent) -> Sequent:
    return _REDUCTIONS[reduction](sequent)


# ---------------------------------------------------------------------------
# Constructive theorem preservation
#
# A minimal-logic derivation of the source sequent translates into the
# target logic: every step gets the helper set added to its antecedents,
# and each implication-introduction step is replaced by a short gadget that
# rewrites one side of a helper implication and then applies modus ponens.


def _translate(proof: Proof, image: Sequent, helpers: frozenset[Formula], use_e1: bool) -> Proof:
    builder = ProofBuilder()
    mapping: dict[int, int] = {}

    def restate(conclusion: Sequent, rule: RuleTag, premises: tuple[int, ...]) -> int:
        return builder.add(conclusion, rule, premises)

    def member(context: frozenset[Formula], f: Formula) -> int:
        i = builder.add(Sequent({f}, f), RuleTag.X2X)
        if context != frozenset((f,)):
            i = builder.add(Sequent(context, f), RuleTag.PREMISE_INFLATION, (i,))
        return i

    for i, step in enumerate(proof.steps):
        gamma = step.conclusion.antecedents | helpers
        conclusion = Sequent(gamma, step.conclusion.consequent)
        prems = tuple(mapping[p] for p in step.premises)
        if step.rule is RuleTag.X2X:
            mapping[i] = member(gamma, step.conclusion.consequent)
            continue
        if step.rule is RuleTag.TOP:
            top_i = builder.add(step.conclusion, RuleTag.TOP)
            mapping[i] = builder.add(conclusion, RuleTag.PREMISE_INFLATION, (top_i,))
            continue
        if step.rule is not RuleTag.IMP_I:
            mapping[i] = restate(conclusion, step.rule, prems)
            continue

        # Implication introduction: premise is gamma, psi |- omega.
        imp = step.conclusion.consequent
        psi, omega = imp.left, imp.right
        both = And(psi, omega)
        ctx_psi = gamma | {psi}
        ctx_both = gamma | {both}
        premise = builder.steps[prems[0]].conclusion
        assert premise == Sequent(ctx_psi, omega)
        # gamma, psi |- psi & omega
        psi_i = member(ctx_psi, psi)
        and_i = builder.add(Sequent(ctx_psi, both), RuleTag.AND_I, (psi_i, prems[0]))
        # gamma, psi & omega |- psi
        both_i = member(ctx_both, both)
        back_i = builder.add(Sequent(ctx_both, psi), RuleTag.AND_EL, (both_i,))
        if use_e1:
            # Rewriting the antecedent of the helper (both -> both) turns it
            # into (psi -> both); the helper is already among the antecedents.
            bridge = Imp(psi, both)
            rewrite = builder.add(Sequent(gamma, bridge), RuleTag.E1, (back_i, and_i))
        else:
            # Rewriting the consequent of the helper (psi -> psi) likewise.
            bridge = Imp(psi, both)
            rewrite = builder.add(Sequent(gamma, bridge), RuleTag.E2, (and_i, back_i))
        helper2 = Imp(bridge, imp)
        helper2_i = member(gamma, helper2)
        mapping[i] = builder.add(conclusion, RuleTag.IMP_E, (rewrite, helper2_i))

    return builder.build(image)


def translate_ml_proof_to_pel1(proof: Proof, image: Sequent) -> Proof:
    """Turn a minimal-logic proof of the source into a proof of the image
    that only uses rules admitted by the E1 extension of primal logic.

    The input proof must enjoy the subformula property (bounded saturation
    proofs do), so that every introduced implication has its helpers in the
    image antecedents.
    """
    return _translate(proof, image, pel1_helpers(proof.conclusion), use_e1=True)


def translate_ml_proof_to_pel2(proof: Proof, image: Sequent) -> Proof:
    return _translate(proof, image, pel2_helpers(proof.conclusion), use_e1=False)
