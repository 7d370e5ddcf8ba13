"""Polynomial-time derivability for disjunction-free primal logic.

Derivability is decided by forward-chaining closure over the subformula
universe of hypotheses and queries: seed with the hypotheses (and top),
then saturate with conjunction elimination/introduction, modus ponens, and
weak implication introduction, all restricted to universe members.  A watch
index maps each formula to the universe members it can trigger, so every
formula is processed once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable

from .calculi import Proof, ProofBuilder, RuleTag
from .syntax import (
    AND,
    IMP,
    TOP,
    DisjunctionError,
    Formula,
    Sequent,
    contains_or,
    sequent_subformulas,
    subformulas,
)

__all__ = [
    "ClosureEvent",
    "ClosureResult",
    "close",
    "decide_pl_multi",
    "decide_pl",
    "extract_pl_proof",
]


@dataclass(frozen=True)
class ClosureEvent:
    """One saturation step: ``formula`` became derivable via ``rule``."""

    formula: Formula
    rule: str  # Hyp, Top, AndEl, AndEr, AndI, ImpE, ImpIW
    sources: tuple[Formula, ...]

    def __str__(self) -> str:
        if not self.sources:
            return f"derived {self.formula} by {self.rule}"
        srcs = ", ".join(str(s) for s in self.sources)
        return f"derived {self.formula} by {self.rule} from {srcs}"


@dataclass
class ClosureResult:
    hypotheses: frozenset[Formula]
    universe: frozenset[Formula]
    derived: set[Formula] = field(default_factory=set)
    events: list[ClosureEvent] = field(default_factory=list)


def _check_or_free(formulas: Iterable[Formula]) -> None:
    for f in formulas:
        if contains_or(f):
            raise DisjunctionError(f"disjunction is not supported here: {f}")


def close(hypotheses: AbstractSet[Formula], queries: AbstractSet[Formula]) -> ClosureResult:
    """Saturate the subformula universe of ``hypotheses | queries``."""
    _check_or_free(hypotheses)
    _check_or_free(queries)

    universe: set[Formula] = set()
    for f in hypotheses:
        universe |= subformulas(f)
    for f in queries:
        universe |= subformulas(f)

    # Watch index: which universe members can fire when f becomes derived.
    conj_parent: dict[Formula, list[Formula]] = {}
    imp_by_left: dict[Formula, list[Formula]] = {}
    imp_by_right: dict[Formula, list[Formula]] = {}
    for u in universe:
        if u.kind == AND:
            conj_parent.setdefault(u.left, []).append(u)
            if u.right is not u.left:
                conj_parent.setdefault(u.right, []).append(u)
        elif u.kind == IMP:
            imp_by_left.setdefault(u.left, []).append(u)
            imp_by_right.setdefault(u.right, []).append(u)

    result = ClosureResult(frozenset(hypotheses), frozenset(universe))
    derived = result.derived
    queue: deque[Formula] = deque()

    def add(f: Formula, rule: str, sources: tuple[Formula, ...]) -> None:
        if f in derived:
            return
        derived.add(f)
        result.events.append(ClosureEvent(f, rule, sources))
        queue.append(f)

    for h in sorted(hypotheses, key=lambda f: f.fid):
        add(h, "Hyp", ())
    if TOP in universe:
        add(TOP, "Top", ())

    while queue:
        f = queue.popleft()
        if f.kind == AND:
            add(f.left, "AndEl", (f,))
            add(f.right, "AndEr", (f,))
        if f.kind == IMP and f.left in derived:
            add(f.right, "ImpE", (f.left, f))
        for c in conj_parent.get(f, ()):
            if c.left in derived and c.right in derived:
                add(c, "AndI", (c.left, c.right))
        for imp in imp_by_left.get(f, ()):
            if imp in derived:
                add(imp.right, "ImpE", (f, imp))
        for imp in imp_by_right.get(f, ()):
            add(imp, "ImpIW", (f,))

    return result


def decide_pl_multi(
    hypotheses: AbstractSet[Formula], queries: AbstractSet[Formula]
) -> dict[Formula, bool]:
    """Map each query to whether it is derivable from the hypotheses."""
    result = close(hypotheses, queries)
    return {q: q in result.derived for q in queries}


def decide_pl(sequent: Sequent) -> bool:
    result = close(sequent.antecedents, {sequent.consequent})
    return sequent.consequent in result.derived


def extract_pl_proof(sequent: Sequent) -> Proof | None:
    """Replay closure events into a checkable proof object, if derivable.

    Every extracted step keeps the full antecedent set as its context, so
    each closure event maps onto a single rule application (hypotheses and
    top go through x2x/Top plus premise inflation).
    """
    result = close(sequent.antecedents, {sequent.consequent})
    goal = sequent.consequent
    if goal not in result.derived:
        return None

    by_formula = {e.formula: e for e in result.events}
    needed: set[Formula] = set()
    stack = [goal]
    while stack:
        f = stack.pop()
        if f in needed:
            continue
        needed.add(f)
        stack.extend(by_formula[f].sources)

    gamma = sequent.antecedents
    builder = ProofBuilder()
    index: dict[Formula, int] = {}
    for event in result.events:  # derivation order: sources precede uses
        if event.formula not in needed:
            continue
        f, rule = event.formula, event.rule
        target = Sequent(gamma, f)
        if rule == "Hyp":
            i = builder.add(Sequent({f}, f), RuleTag.X2X)
            if gamma != frozenset((f,)):
                i = builder.add(target, RuleTag.PREMISE_INFLATION, (i,))
        elif rule == "Top":
            i = builder.add(Sequent((), TOP), RuleTag.TOP)
            if gamma:
                i = builder.add(target, RuleTag.PREMISE_INFLATION, (i,))
        elif rule == "AndEl":
            i = builder.add(target, RuleTag.AND_EL, (index[event.sources[0]],))
        elif rule == "AndEr":
            i = builder.add(target, RuleTag.AND_ER, (index[event.sources[0]],))
        elif rule == "AndI":
            left, right = event.sources
            i = builder.add(target, RuleTag.AND_I, (index[left], index[right]))
        elif rule == "ImpE":
            arg, imp = event.sources
            i = builder.add(target, RuleTag.IMP_E, (index[arg], index[imp]))
        elif rule == "ImpIW":
            i = builder.add(target, RuleTag.IMP_IW, (index[event.sources[0]],))
        else:
            raise AssertionError(rule)
        index[f] = i
    return builder.build(Sequent(gamma, goal))
