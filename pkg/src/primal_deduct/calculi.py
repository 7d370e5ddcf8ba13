"""Inference rule schemas, the logic catalogue, and proof objects.

A proof is a topologically ordered sequence of steps; each step carries a
fully concrete sequent, a rule tag, and references to earlier steps.  The
checker matches each step syntactically against its rule schema under
antecedent-set semantics (exchange and contraction are implicit, premise
inflation may add any finite set of antecedents at once).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Sequence

from .syntax import (
    AND,
    BOT,
    IMP,
    OR,
    TOP,
    VAR,
    And,
    DisjunctionError,
    Formula,
    Imp,
    ParseError,
    Sequent,
    implication_subformulas,
    parse_sequent,
    substitute,
    variables_of,
)

__all__ = [
    "RuleTag",
    "LogicId",
    "BL",
    "PL",
    "PL_ED",
    "ML",
    "IL",
    "CL",
    "PEL1",
    "PEL2",
    "PEL",
    "PEL1_0",
    "PEL2_0",
    "PEL0",
    "LOGICS",
    "ProofStep",
    "Proof",
    "ProofBuilder",
    "Violation",
    "ProofStructureError",
    "check_step",
    "check_proof",
    "parse_proof",
    "format_proof",
    "synthesize_ef_proof",
    "eliminate_insignificant",
    "significant_implications",
]


class RuleTag(enum.Enum):
    TOP = "Top"
    X2X = "X2X"
    PREMISE_INFLATION = "PremiseInflation"
    CUT = "Cut"
    AND_EL = "AndEl"
    AND_ER = "AndEr"
    AND_I = "AndI"
    IMP_E = "ImpE"
    IMP_IW = "ImpIW"
    IMP_I = "ImpI"
    IMP_ED = "ImpED"
    BOT_AX = "BotAx"
    DF_EXCLUDED_MIDDLE = "DFExcludedMiddle"
    OR_E = "OrE"
    OR_IL = "OrIl"
    OR_IR = "OrIr"
    E1 = "E1"
    E2 = "E2"
    E1_0 = "E1_0"
    E2_0 = "E2_0"
    E0 = "E0"

    def __str__(self) -> str:
        return self.value


_ARITY = {
    RuleTag.TOP: 0,
    RuleTag.X2X: 0,
    RuleTag.BOT_AX: 0,
    RuleTag.PREMISE_INFLATION: 1,
    RuleTag.AND_EL: 1,
    RuleTag.AND_ER: 1,
    RuleTag.IMP_IW: 1,
    RuleTag.IMP_I: 1,
    RuleTag.IMP_ED: 1,
    RuleTag.OR_IL: 1,
    RuleTag.OR_IR: 1,
    RuleTag.CUT: 2,
    RuleTag.AND_I: 2,
    RuleTag.IMP_E: 2,
    RuleTag.DF_EXCLUDED_MIDDLE: 2,
    RuleTag.E1: 2,
    RuleTag.E2: 2,
    RuleTag.E1_0: 2,
    RuleTag.E2_0: 2,
    RuleTag.OR_E: 3,
    RuleTag.E0: 4,
}

_OR_RULES = frozenset({RuleTag.OR_E, RuleTag.OR_IL, RuleTag.OR_IR})

_BL_RULES = frozenset(
    {
        RuleTag.TOP,
        RuleTag.X2X,
        RuleTag.PREMISE_INFLATION,
        RuleTag.CUT,
        RuleTag.AND_EL,
        RuleTag.AND_ER,
        RuleTag.AND_I,
    }
)
_PL_RULES = _BL_RULES | {RuleTag.IMP_E, RuleTag.IMP_IW}

_BASE_RULES: dict[str, frozenset[RuleTag]] = {
    "BL": _BL_RULES,
    "PL": _PL_RULES,
    "PL_ED": _PL_RULES | {RuleTag.IMP_ED},
    "ML": _PL_RULES | {RuleTag.IMP_I},
    "IL": _PL_RULES | {RuleTag.IMP_I, RuleTag.BOT_AX},
    "CL": _PL_RULES | {RuleTag.IMP_I, RuleTag.BOT_AX, RuleTag.DF_EXCLUDED_MIDDLE},
    "PEL1": _PL_RULES | {RuleTag.E1},
    "PEL2": _PL_RULES | {RuleTag.E2},
    "PEL": _PL_RULES | {RuleTag.E1, RuleTag.E2},
    "PEL1_0": _PL_RULES | {RuleTag.E1_0},
    "PEL2_0": _PL_RULES | {RuleTag.E2_0},
    # E0 is interderivable with E1_0 + E2_0, so all three tags are admitted.
    "PEL0": _PL_RULES | {RuleTag.E1_0, RuleTag.E2_0, RuleTag.E0},
}


@dataclass(frozen=True)
class LogicId:
    """A named rule set, optionally extended with the disjunction rules."""

    name: str
    with_disjunction: bool = False

    def __post_init__(self) -> None:
        if self.name not in _BASE_RULES:
            raise ValueError(f"unknown logic: {self.name!r}")

    @property
    def admitted(self) -> frozenset[RuleTag]:
        rules = _BASE_RULES[self.name]
        return rules | _OR_RULES if self.with_disjunction else rules

    def with_or(self) -> "LogicId":
        return LogicId(self.name, True)

    def __str__(self) -> str:
        return self.name + ("+or" if self.with_disjunction else "")

    @staticmethod
    def parse(text: str) -> "LogicId":
        s = text.strip().lower().replace("-", "_")
        with_or = False
        for suffix in ("+or", "_or", "v"):
            if s.endswith(suffix) and s[: -len(suffix)] in _CANON:
                with_or = True
                s = s[: -len(suffix)]
                break
        if s not in _CANON:
            raise ValueError(f"unknown logic: {text!r}")
        return LogicId(_CANON[s], with_or)


_CANON = {name.lower(): name for name in _BASE_RULES}

BL = LogicId("BL")
PL = LogicId("PL")
PL_ED = LogicId("PL_ED")
ML = LogicId("ML")
IL = LogicId("IL")
CL = LogicId("CL")
PEL1 = LogicId("PEL1")
PEL2 = LogicId("PEL2")
PEL = LogicId("PEL")
PEL1_0 = LogicId("PEL1_0")
PEL2_0 = LogicId("PEL2_0")
PEL0 = LogicId("PEL0")

LOGICS = (BL, PL, PL_ED, ML, IL, CL, PEL1, PEL2, PEL, PEL1_0, PEL2_0, PEL0)


# ---------------------------------------------------------------------------
# Proof objects


class ProofStructureError(ValueError):
    """Ill-formed proof object: bad premise references or empty step list."""


@dataclass(frozen=True)
class ProofStep:
    conclusion: Sequent
    rule: RuleTag
    premises: tuple[int, ...] = ()


class Proof:
    """A sequence of steps whose premises reference strictly earlier steps."""

    __slots__ = ("steps",)

    def __init__(self, steps: Sequence[ProofStep]):
        if not steps:
            raise ProofStructureError("a proof needs at least one step")
        for i, step in enumerate(steps):
            for p in step.premises:
                if not 0 <= p < i:
                    raise ProofStructureError(
                        f"step {i + 1} references premise {p + 1}, which is not an earlier step"
                    )
        self.steps: tuple[ProofStep, ...] = tuple(steps)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    @property
    def conclusion(self) -> Sequent:
        return self.steps[-1].conclusion

    def __repr__(self) -> str:
        return f"<Proof of {self.conclusion} in {len(self.steps)} steps>"


@dataclass(frozen=True)
class Violation:
    """A failed rule check: which step, which rule, and why."""

    step_index: int  # 0-based
    rule: RuleTag
    reason: str

    def __str__(self) -> str:
        return f"step {self.step_index + 1} ({self.rule}): {self.reason}"


# ---------------------------------------------------------------------------
# Schema matching


def _single(diff: frozenset[Formula]) -> Formula | None:
    if len(diff) == 1:
        (f,) = diff
        return f
    return None


def check_step(step: ProofStep, premises: Sequence[Sequent]) -> str | None:
    """Match one step against its rule schema; ``None`` means ok.

    ``premises`` are the resolved conclusions of the referenced steps, in
    reference order.  Returns a human-readable mismatch reason otherwise.
    """
    rule = step.rule
    conc = step.conclusion
    if len(premises) != _ARITY[rule]:
        return f"expected {_ARITY[rule]} premises, got {len(premises)}"

    gamma = conc.antecedents
    phi = conc.consequent

    if rule is RuleTag.TOP:
        if phi is not TOP:
            return "conclusion consequent must be top"
        if gamma:
            return "conclusion must have no antecedents"
        return None

    if rule is RuleTag.X2X:
        if gamma != frozenset((phi,)):
            return "conclusion must have the consequent as its only antecedent"
        return None

    if rule is RuleTag.BOT_AX:
        if gamma != frozenset((BOT,)):
            return "conclusion must have bot as its only antecedent"
        return None

    if rule is RuleTag.PREMISE_INFLATION:
        (p,) = premises
        if p.consequent is not phi:
            return "consequent must match the premise"
        if not p.antecedents <= gamma:
            return "conclusion antecedents must contain the premise antecedents"
        return None

    if rule is RuleTag.CUT:
        p1, p2 = premises
        if p1.antecedents != gamma:
            return "first premise must share the conclusion antecedents"
        if p2.consequent is not phi:
            return "second premise must conclude the conclusion consequent"
        if p2.antecedents != gamma | {p1.consequent}:
            return "second premise antecedents must be the conclusion antecedents plus the cut formula"
        return None

    if rule in (RuleTag.AND_EL, RuleTag.AND_ER):
        (p,) = premises
        if p.antecedents != gamma:
            return "premise must share the conclusion antecedents"
        c = p.consequent
        if c.kind != AND:
            return "premise consequent must be a conjunction"
        part = c.left if rule is RuleTag.AND_EL else c.right
        if part is not phi:
            return "conclusion must be the matching conjunct of the premise"
        return None

    if rule is RuleTag.AND_I:
        p1, p2 = premises
        if phi.kind != AND:
            return "conclusion consequent must be a conjunction"
        if p1.antecedents != gamma or p2.antecedents != gamma:
            return "premises must share the conclusion antecedents"
        if p1.consequent is not phi.left or p2.consequent is not phi.right:
            return "premises must conclude the two conjuncts in order"
        return None

    if rule is RuleTag.IMP_E:
        p1, p2 = premises
        if p1.antecedents != gamma or p2.antecedents != gamma:
            return "premises must share the conclusion antecedents"
        imp = p2.consequent
        if imp.kind != IMP:
            return "second premise consequent must be an implication"
        if imp.left is not p1.consequent:
            return "first premise must conclude the implication antecedent"
        if imp.right is not phi:
            return "conclusion must be the implication consequent"
        return None

    if rule is RuleTag.IMP_IW:
        (p,) = premises
        if p.antecedents != gamma:
            return "premise must share the conclusion antecedents"
        if phi.kind != IMP:
            return "conclusion consequent must be an implication"
        if phi.right is not p.consequent:
            return "premise must conclude the implication consequent"
        return None

    if rule is RuleTag.IMP_I:
        (p,) = premises
        if phi.kind != IMP:
            return "conclusion consequent must be an implication"
        if p.consequent is not phi.right:
            return "premise must conclude the implication consequent"
        if p.antecedents != gamma | {phi.left}:
            return "premise antecedents must be the conclusion antecedents plus the implication antecedent"
        return None

    if rule is RuleTag.IMP_ED:
        (p,) = premises
        if p.antecedents != gamma:
            return "premise must share the conclusion antecedents"
        c = p.consequent
        if c.kind != IMP:
            return "premise consequent must be an implication"
        if c.right is not phi:
            return "conclusion must be the implication consequent"
        return None

    if rule is RuleTag.DF_EXCLUDED_MIDDLE:
        p1, p2 = premises
        if p1.consequent is not phi or p2.consequent is not phi:
            return "premises must conclude the conclusion consequent"
        if not gamma <= p1.antecedents or not gamma <= p2.antecedents:
            return "premise antecedents must contain the conclusion antecedents"
        candidates = set()
        d1 = _single(p1.antecedents - gamma)
        if d1 is not None:
            candidates.add(d1)
        elif p1.antecedents != gamma:
            return "first premise may add only the case formula"
        d2 = _single(p2.antecedents - gamma)
        if d2 is not None:
            if d2.kind != IMP or d2.right is not BOT:
                return "second premise may add only the negated case formula"
            candidates.add(d2.left)
        elif p2.antecedents != gamma:
            return "second premise may add only the negated case formula"
        if not candidates:
            candidates = set(gamma)
        for c in candidates:
            if p1.antecedents == gamma | {c} and p2.antecedents == gamma | {Imp(c, BOT)}:
                return None
        return "no case formula matches both premises"

    if rule in (RuleTag.OR_IL, RuleTag.OR_IR):
        (p,) = premises
        if p.antecedents != gamma:
            return "premise must share the conclusion antecedents"
        if phi.kind != OR:
            return "conclusion consequent must be a disjunction"
        part = phi.left if rule is RuleTag.OR_IL else phi.right
        if part is not p.consequent:
            return "premise must conclude the matching disjunct"
        return None

    if rule is RuleTag.OR_E:
        p1, p2, p3 = premises
        if p3.antecedents != gamma:
            return "third premise must share the conclusion antecedents"
        d = p3.consequent
        if d.kind != OR:
            return "third premise consequent must be a disjunction"
        if p1.consequent is not phi or p2.consequent is not phi:
            return "case premises must conclude the conclusion consequent"
        if p1.antecedents != gamma | {d.left}:
            return "first premise antecedents must add the left disjunct"
        if p2.antecedents != gamma | {d.right}:
            return "second premise antecedents must add the right disjunct"
        return None

    if rule in (RuleTag.E1, RuleTag.E2):
        p1, p2 = premises
        if phi.kind != IMP:
            return "conclusion consequent must be an implication"
        if rule is RuleTag.E1:
            # Gamma, (a -> chi) |- (b -> chi)  from  Gamma, a |- b  and  Gamma, b |- a
            b, chi = phi.left, phi.right
            a = p2.consequent
            added = Imp(a, chi)
        else:
            # Gamma, (chi -> a) |- (chi -> b)  from  Gamma, a |- b  and  Gamma, b |- a
            chi, b = phi.left, phi.right
            a = p2.consequent
            added = Imp(chi, a)
        if p1.consequent is not b:
            return "first premise must conclude the replacing formula"
        if added not in gamma:
            return "conclusion antecedents must contain the rewritten implication"
        for g in (gamma - {added}, gamma):
            if p1.antecedents == g | {a} and p2.antecedents == g | {b}:
                return None
        return "premise antecedents do not match the rule context"

    if rule in (RuleTag.E1_0, RuleTag.E2_0):
        p1, p2 = premises
        if phi.kind != IMP:
            return "conclusion consequent must be an implication"
        if rule is RuleTag.E1_0:
            b, chi = phi.left, phi.right
            a = p2.consequent
            added = Imp(a, chi)
        else:
            chi, b = phi.left, phi.right
            a = p2.consequent
            added = Imp(chi, a)
        if p1.consequent is not b:
            return "first premise must conclude the replacing formula"
        if gamma != frozenset((added,)):
            return "conclusion must have the rewritten implication as its only antecedent"
        if p1.antecedents != frozenset((a,)) or p2.antecedents != frozenset((b,)):
            return "premises must be the two single-antecedent derivability directions"
        return None

    if rule is RuleTag.E0:
        # (a1 -> b1) |- (a2 -> b2)  from  a1 |- a2, a2 |- a1, b1 |- b2, b2 |- b1
        p1, p2, p3, p4 = premises
        if phi.kind != IMP:
            return "conclusion consequent must be an implication"
        lhs = _single(gamma)
        if lhs is None or lhs.kind != IMP:
            return "conclusion must have a single implication antecedent"
        a1, b1 = lhs.left, lhs.right
        a2, b2 = phi.left, phi.right
        expected = (
            (frozenset((a1,)), a2),
            (frozenset((a2,)), a1),
            (frozenset((b1,)), b2),
            (frozenset((b2,)), b1),
        )
        for i, (p, (ants, cons)) in enumerate(zip(premises, expected)):
            if p.antecedents != ants or p.consequent is not cons:
                return f"premise {i + 1} must be the matching equivalence direction"
        return None

    raise AssertionError(f"unhandled rule {rule}")


def check_proof(proof: Proof, logic: LogicId) -> Violation | None:
    """Validate every step against ``logic``; ``None`` means the proof is ok."""
    admitted = logic.admitted
    for i, step in enumerate(proof.steps):
        if step.rule not in admitted:
            return Violation(i, step.rule, f"rule not admitted in {logic}")
        resolved = [proof.steps[p].conclusion for p in step.premises]
        reason = check_step(step, resolved)
        if reason is not None:
            return Violation(i, step.rule, reason)
    return None


# ---------------------------------------------------------------------------
# Proof text format

_RULE_BY_NAME = {tag.value: tag for tag in RuleTag}


def parse_proof(text: str) -> Proof:
    """Parse the line-oriented proof format.

    ``<index>. <sequent> ; rule=<RuleTag> ; premises=<comma-separated indices>``
    with 1-based indices; blank lines and ``#`` comments are ignored.
    """
    steps: list[ProofStep] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            head, rule_part, prem_part = (part.strip() for part in line.split(";"))
        except ValueError:
            raise ProofStructureError(f"line {lineno}: expected three ';'-separated fields")
        idx_text, _, seq_text = head.partition(".")
        try:
            idx = int(idx_text)
        except ValueError:
            raise ProofStructureError(f"line {lineno}: missing step index")
        if idx != len(steps) + 1:
            raise ProofStructureError(f"line {lineno}: expected step index {len(steps) + 1}")
        try:
            conclusion = parse_sequent(seq_text.strip())
        except ParseError as e:
            raise ProofStructureError(f"line {lineno}: {e}") from e
        if not rule_part.startswith("rule="):
            raise ProofStructureError(f"line {lineno}: expected 'rule=<name>'")
        rule_name = rule_part[len("rule=") :].strip()
        rule = _RULE_BY_NAME.get(rule_name)
        if rule is None:
            raise ProofStructureError(f"line {lineno}: unknown rule {rule_name!r}")
        if not prem_part.startswith("premises="):
            raise ProofStructureError(f"line {lineno}: expected 'premises=<indices>'")
        prem_text = prem_part[len("premises=") :].strip()
        premises: list[int] = []
        if prem_text:
            for piece in prem_text.split(","):
                try:
                    premises.append(int(piece.strip()) - 1)
                except ValueError:
                    raise ProofStructureError(f"line {lineno}: bad premise index {piece.strip()!r}")
        steps.append(ProofStep(conclusion, rule, tuple(premises)))
    return Proof(steps)


def format_proof(proof: Proof) -> str:
    lines = []
    for i, step in enumerate(proof.steps, start=1):
        prems = ",".join(str(p + 1) for p in step.premises)
        lines.append(f"{i}. {step.conclusion} ; rule={step.rule} ; premises={prems}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Incremental construction


class ProofBuilder:
    """Appends steps, deduplicating by conclusion.

    Referencing an earlier step that concludes the same sequent keeps
    synthesized proofs small; any valid derivation of a sequent serves all
    later uses equally well.
    """

    def __init__(self) -> None:
        self.steps: list[ProofStep] = []
        self._by_conclusion: dict[Sequent, int] = {}

    def add(self, conclusion: Sequent, rule: RuleTag, premises: Iterable[int] = ()) -> int:
        existing = self._by_conclusion.get(conclusion)
        if existing is not None:
            return existing
        self.steps.append(ProofStep(conclusion, rule, tuple(premises)))
        index = len(self.steps) - 1
        self._by_conclusion[conclusion] = index
        return index

    def include(self, proof: Proof) -> int:
        """Inline another proof's steps; returns the index of its conclusion."""
        mapping: dict[int, int] = {}
        last = -1
        for i, step in enumerate(proof.steps):
            mapped = tuple(mapping[p] for p in step.premises)
            last = self.add(step.conclusion, step.rule, mapped)
            mapping[i] = last
        return last

    def build(self, conclusion: Sequent) -> Proof:
        """Finish the proof, making ``conclusion`` the final step."""
        idx = self._by_conclusion.get(conclusion)
        if idx is None:
            raise ValueError(f"no step concludes {conclusion}")
        if idx != len(self.steps) - 1:
            self.add_restatement(conclusion, idx)
        return Proof(self.steps)

    def add_restatement(self, conclusion: Sequent, index: int) -> int:
        # Inflation by the empty set restates an earlier conclusion verbatim.
        self.steps.append(ProofStep(conclusion, RuleTag.PREMISE_INFLATION, (index,)))
        return len(self.steps) - 1


# ---------------------------------------------------------------------------
# Derived-rule synthesis for substitution contexts


def synthesize_ef_proof(
    template: Formula,
    phi: Formula,
    psi: Formula,
    gamma: AbstractSet[Formula],
    proof_phi_psi: Proof,
    proof_psi_phi: Proof,
    placeholder: str = "x0",
) -> Proof:
    """Build a proof of ``Gamma, template[x0:=phi] |- template[x0:=psi]``.

    ``proof_phi_psi`` must conclude ``Gamma, phi |- psi`` and
    ``proof_psi_phi`` the converse.  The construction recurses on the
    template: conjunctions go through conjunction elimination, cut, and
    introduction; implications through the two context rewriting rules
    followed by a cut.  With an empty ``gamma`` the context-free rewriting
    rules are used, so the result stays inside the weak-substitution logic;
    otherwise it is valid wherever E1/E2 and the input proofs are.
    """
    gamma = frozenset(gamma)
    want_first = Sequent(gamma | {phi}, psi)
    want_second = Sequent(gamma | {psi}, phi)
    if proof_phi_psi.conclusion != want_first:
        raise ValueError(f"first proof must conclude {want_first}, got {proof_phi_psi.conclusion}")
    if proof_psi_phi.conclusion != want_second:
        raise ValueError(f"second proof must conclude {want_second}, got {proof_psi_phi.conclusion}")

    weak = not gamma
    e1 = RuleTag.E1_0 if weak else RuleTag.E1
    e2 = RuleTag.E2_0 if weak else RuleTag.E2
    builder = ProofBuilder()

    def derive(f: Formula, a: Formula, b: Formula, pf_ab: Proof, pf_ba: Proof) -> int:
        """Index of a step concluding ``gamma, f[x0:=a] |- f[x0:=b]``."""
        fa = substitute(f, placeholder, a)
        fb = substitute(f, placeholder, b)
        if placeholder not in variables_of(f):
            i = builder.add(Sequent({fa}, fa), RuleTag.X2X)
            if gamma:
                i = builder.add(Sequent(gamma | {fa}, fa), RuleTag.PREMISE_INFLATION, (i,))
            return i
        if f.kind == VAR:  # f is the placeholder itself
            return builder.include(pf_ab)
        if f.kind == AND:
            left_i = derive(f.left, a, b, pf_ab, pf_ba)
            right_i = derive(f.right, a, b, pf_ab, pf_ba)
            ga, gb = substitute(f.left, placeholder, a), substitute(f.left, placeholder, b)
            ha, hb = substitute(f.right, placeholder, a), substitute(f.right, placeholder, b)
            ctx = gamma | {fa}
            x2x = builder.add(Sequent({fa}, fa), RuleTag.X2X)
            base = builder.add(Sequent(ctx, fa), RuleTag.PREMISE_INFLATION, (x2x,))
            got_ga = builder.add(Sequent(ctx, ga), RuleTag.AND_EL, (base,))
            got_ha = builder.add(Sequent(ctx, ha), RuleTag.AND_ER, (base,))
            # Cut the recursive rewrites into the fa context.
            left_inf = builder.add(
                Sequent(ctx | {ga}, gb), RuleTag.PREMISE_INFLATION, (left_i,)
            )
            got_gb = builder.add(Sequent(ctx, gb), RuleTag.CUT, (got_ga, left_inf))
            right_inf = builder.add(
                Sequent(ctx | {ha}, hb), RuleTag.PREMISE_INFLATION, (right_i,)
            )
            got_hb = builder.add(Sequent(ctx, hb), RuleTag.CUT, (got_ha, right_inf))
            return builder.add(Sequent(ctx, fb), RuleTag.AND_I, (got_gb, got_hb))
        if f.kind == IMP:
            ga, gb = substitute(f.left, placeholder, a), substitute(f.left, placeholder, b)
            ha, hb = substitute(f.right, placeholder, a), substitute(f.right, placeholder, b)
            mid = Imp(gb, ha)
            # Rewrite the antecedent side, then the consequent side.
            g_ab = derive(f.left, a, b, pf_ab, pf_ba)
            g_ba = derive(f.left, b, a, pf_ba, pf_ab)
            first = builder.add(Sequent(gamma | {fa}, mid), e1, (g_ab, g_ba))
            h_ab = derive(f.right, a, b, pf_ab, pf_ba)
            h_ba = derive(f.right, b, a, pf_ba, pf_ab)
            second = builder.add(Sequent(gamma | {mid}, fb), e2, (h_ab, h_ba))
            if mid is fa:
                return second
            inflated = builder.add(
                Sequent(gamma | {fa, mid}, fb), RuleTag.PREMISE_INFLATION, (second,)
            )
            return builder.add(Sequent(gamma | {fa}, fb), RuleTag.CUT, (first, inflated))
        raise DisjunctionError("templates with disjunction are not supported")

    final = derive(template, phi, psi, proof_phi_psi, proof_psi_phi)
    t_phi = substitute(template, placeholder, phi)
    t_psi = substitute(template, placeholder, psi)
    target = Sequent(gamma | {t_phi}, t_psi)
    assert builder.steps[final].conclusion == target
    return builder.build(target)


# ---------------------------------------------------------------------------
# Insignificant-implication elimination


def _e0_sides(step: ProofStep) -> tuple[Formula, Formula]:
    (lhs,) = step.conclusion.antecedents
    return lhs, step.conclusion.consequent


def _as_e0(proof: Proof) -> Proof:
    """Rewrite E1_0/E2_0 steps into E0 steps (adding x2x steps as needed)."""
    if not any(s.rule in (RuleTag.E1_0, RuleTag.E2_0) for s in proof.steps):
        return proof
    builder = ProofBuilder()
    mapping: dict[int, int] = {}
    for i, step in enumerate(proof.steps):
        prems = tuple(mapping[p] for p in step.premises)
        if step.rule in (RuleTag.E1_0, RuleTag.E2_0):
            lhs, rhs = _e0_sides(step)
            if step.rule is RuleTag.E1_0:
                chi = lhs.right
                refl = builder.add(Sequent({chi}, chi), RuleTag.X2X)
                prems = (prems[0], prems[1], refl, refl)
            else:
                chi = lhs.left
                refl = builder.add(Sequent({chi}, chi), RuleTag.X2X)
                prems = (refl, refl, prems[0], prems[1])
            mapping[i] = builder.add(step.conclusion, RuleTag.E0, prems)
        else:
            mapping[i] = builder.add(step.conclusion, step.rule, prems)
    return builder.build(proof.conclusion)


def significant_implications(proof: Proof, goal: Sequent) -> frozenset[Formula]:
    """The minimal implication set forced by the goal and the E-rule steps.

    Contains every implication subformula of the goal, pairs up both sides
    of every context-free rewriting step (either both in or both out), and
    is closed under implication subformulas of its members.
    """
    pairs: list[tuple[Formula, Formula]] = []
    for step in proof.steps:
        if step.rule in (RuleTag.E0, RuleTag.E1_0, RuleTag.E2_0):
            pairs.append(_e0_sides(step))

    significant: set[Formula] = set()
    for member in goal.formulas():
        significant |= implication_subformulas(member)
    changed = True
    while changed:
        changed = False
        for f in list(significant):
            subs = implication_subformulas(f)
            if not subs <= significant:
                significant |= subs
                changed = True
        for lhs, rhs in pairs:
            if (lhs in significant) != (rhs in significant):
                significant.add(lhs)
                significant.add(rhs)
                changed = True
    return frozenset(significant)


def eliminate_insignificant(proof: Proof, goal: Sequent) -> Proof:
    """Rewrite a valid PEL0 proof of ``goal`` so that every implication
    subformula of every step is significant.

    Implications outside the significant set are erased by replacing them
    with the image of their consequent; steps whose premise and conclusion
    collapse to the same sequent are dropped and references redirected.
    """
    violation = check_proof(proof, PEL0)
    if violation is not None:
        raise ValueError(f"input proof is not valid: {violation}")
    if proof.conclusion != goal:
        raise ValueError(f"input proof concludes {proof.conclusion}, not {goal}")

    proof = _as_e0(proof)
    keep = significant_implications(proof, goal)

    t_cache: dict[Formula, Formula] = {}

    def t(f: Formula) -> Formula:
        cached = t_cache.get(f)
        if cached is not None:
            return cached
        if f.is_atom:
            result = f
        elif f.kind == AND:
            result = And(t(f.left), t(f.right))
        elif f.kind == IMP:
            result = f if f in keep else t(f.right)
        else:
            raise DisjunctionError("disjunction is outside this transformation")
        t_cache[f] = result
        return result

    def t_seq(s: Sequent) -> Sequent:
        return Sequent((t(a) for a in s.antecedents), t(s.consequent))

    builder = ProofBuilder()
    mapping: dict[int, int] = {}
    for i, step in enumerate(proof.steps):
        rule = step.rule
        if rule is RuleTag.IMP_E:
            imp = proof.steps[step.premises[1]].conclusion.consequent
            if imp not in keep:
                mapping[i] = mapping[step.premises[1]]
                continue
        elif rule is RuleTag.IMP_IW:
            if step.conclusion.consequent not in keep:
                mapping[i] = mapping[step.premises[0]]
                continue
        elif rule is RuleTag.E0:
            lhs, _ = _e0_sides(step)
            if lhs not in keep:
                mapping[i] = mapping[step.premises[2]]
                continue
        prems = tuple(mapping[p] for p in step.premises)
        mapping[i] = builder.add(t_seq(step.conclusion), rule, prems)
    return builder.build(goal)
