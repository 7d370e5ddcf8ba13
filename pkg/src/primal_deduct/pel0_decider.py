"""Cubic-time derivability for primal logic with weak substitution rules.

The decision runs in two phases: normalize the hypothesis/query forest so
that no two distinct subformulas are equivalent ("free of equivalents"),
then delegate to the plain primal-logic decider.  Once the forest is free
of equivalents, weak-rule derivability and primal derivability coincide,
so each equivalence query during normalization is just a pair of linear
primal-logic decisions.
"""

from __future__ import annotations

import heapq
import random
from typing import AbstractSet, Sequence

from .pl_decider import close, decide_pl_multi
from .syntax import (
    AND,
    BOT_KIND,
    IMP,
    TOP_KIND,
    VAR,
    And,
    DisjunctionError,
    Formula,
    Imp,
    Sequent,
    contains_or,
    formula_key,
    subformulas,
    variables_of,
)

__all__ = [
    "pel0_equivalent",
    "normalize_free_of_equivalents",
    "decide_pel0_multi",
    "decide_pel0",
]


def pel0_equivalent(phi: Formula, psi: Formula) -> bool:
    """Mutual derivability, valid when the strict subformulas of both sides
    are jointly free of equivalents (the normalization loop guarantees it).
    """
    if phi is psi:
        return True
    first = close({phi}, {psi})
    if psi not in first.derived:
        return False
    second = close({psi}, {phi})
    return phi in second.derived


# Derivably equivalent formulas agree under every degenerate-implication
# valuation (an implication evaluates to its consequent), so a table of
# valuation bits is a sound fast filter for candidate lookup.
_FINGERPRINT_SAMPLES = 64


class _Fingerprints:
    def __init__(self, variables: Sequence[str]):
        self.cache: dict[Formula, int] = {}
        names = sorted(variables)
        if len(names) <= 6:
            count = 1 << len(names)
            self.assignments = [
                {name: bool(mask >> i & 1) for i, name in enumerate(names)}
                for mask in range(count)
            ]
        else:
            rng = random.Random(0xF00D)
            self.assignments = [
                {name: rng.random() < 0.5 for name in names}
                for _ in range(_FINGERPRINT_SAMPLES)
            ]

    def of(self, f: Formula) -> int:
        cached = self.cache.get(f)
        if cached is not None:
            return cached
        if f.kind == VAR:
            bits = 0
            for i, a in enumerate(self.assignments):
                if a[f.name]:
                    bits |= 1 << i
        elif f.kind == TOP_KIND:
            bits = (1 << len(self.assignments)) - 1
        elif f.kind == BOT_KIND:
            bits = 0
        elif f.kind == AND:
            bits = self.of(f.left) & self.of(f.right)
        elif f.kind == IMP:
            bits = self.of(f.right)
        else:
            raise DisjunctionError(f"disjunction is not supported here: {f}")
        self.cache[f] = bits
        return bits


def normalize_free_of_equivalents(
    formulas: Sequence[Formula], debug: bool = False
) -> list[Formula]:
    """Rewrite each formula so the result set is free of equivalents.

    Nodes of the input forest are processed shortest first (ties broken by
    printed form, then intern id).  When the node under consideration is
    equivalent to an already-marked node, it is replaced by that earlier
    representative; either way the resulting node is marked.  Children are
    always strictly shorter, hence already marked, so each node is rebuilt
    from marked parts before the equivalence lookup, and the lookup itself
    only ever compares formulas whose strict subformulas are jointly free
    of equivalents.

    Each output formula is equivalent to its input and not longer.  With
    ``debug`` the marking invariants are re-checked after every step.
    """
    for f in formulas:
        if contains_or(f):
            raise DisjunctionError(f"disjunction is not supported here: {f}")

    variables: set[str] = set()
    nodes: set[Formula] = set()
    for f in formulas:
        variables |= variables_of(f)
        nodes |= subformulas(f)

    prints = _Fingerprints(sorted(variables))
    rewritten: dict[Formula, Formula] = {}
    marked_set: set[Formula] = set()
    buckets: dict[int, list[Formula]] = {}

    # A node is ready once both children are processed; the globally
    # shortest unmarked node is always ready, because an unready node
    # strictly contains some ready one.
    parents: dict[Formula, list[Formula]] = {}
    pending: dict[Formula, int] = {}
    heap: list[tuple[int, str, int, int, Formula, Formula]] = []
    for f in nodes:
        if f.is_atom:
            heapq.heappush(heap, (1, str(f), f.fid, f.fid, f, f))
        else:
            children = {f.left, f.right}
            pending[f] = len(children)
            for c in children:
                parents.setdefault(c, []).append(f)

    def rebuild(f: Formula) -> Formula:
        if f.is_atom:
            return f
        left = rewritten[f.left]
        right = rewritten[f.right]
        if left is f.left and right is f.right:
            return f
        return And(left, right) if f.kind == AND else Imp(left, right)

    def check_invariants() -> None:
        for m in marked_set:
            assert subformulas(m) <= marked_set, "marked nodes must be subformula-closed"
        reps = sorted(marked_set, key=formula_key)
        for i, a in enumerate(reps):
            for b in reps[i + 1 :]:
                assert not pel0_equivalent(a, b), f"marked set not free of equivalents: {a} ~ {b}"
        longest = max((m.length for m in marked_set), default=0)
        for entry in heap:
            assert entry[0] >= longest, "an unmarked node became shorter than a marked one"

    while heap:
        _, _, _, _, f, current = heapq.heappop(heap)
        if current in marked_set:
            rewritten[f] = current
        else:
            replacement = current
            bucket = buckets.get(prints.of(current))
            if bucket is not None:
                for candidate in bucket:  # marking order: first representative wins
                    if pel0_equivalent(current, candidate):
                        replacement = candidate
                        break
            if replacement is current:
                marked_set.add(current)
                buckets.setdefault(prints.of(current), []).append(current)
            rewritten[f] = replacement
        for parent in parents.get(f, ()):
            pending[parent] -= 1
            if pending[parent] == 0:
                built = rebuild(parent)
                heapq.heappush(
                    heap, (built.length, str(built), built.fid, parent.fid, parent, built)
                )
        if debug:
            check_invariants()

    return [rewritten[f] for f in formulas]


def decide_pel0_multi(
    hypotheses: AbstractSet[Formula], queries: AbstractSet[Formula]
) -> dict[Formula, bool]:
    """Derivability of each query from the hypotheses under the weak rules.

    Hypotheses and queries are normalized jointly, so equivalences across
    the two groups collapse onto shared representatives, and the normalized
    problem is decided in plain primal logic.
    """
    hyp_list = sorted(hypotheses, key=formula_key)
    query_list = sorted(queries, key=formula_key)
    normalized = normalize_free_of_equivalents(hyp_list + query_list)
    norm_hyps = set(normalized[: len(hyp_list)])
    norm_queries = normalized[len(hyp_list) :]
    answers = decide_pl_multi(norm_hyps, set(norm_queries))
    return {q: answers[nq] for q, nq in zip(query_list, norm_queries)}


def decide_pel0(sequent: Sequent) -> bool:
    return decide_pel0_multi(sequent.antecedents, {sequent.consequent})[sequent.consequent]
