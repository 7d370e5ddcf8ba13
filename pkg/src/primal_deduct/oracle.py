"""Brute-force ground truth by bounded saturation.

The saturation engine computes a least fixpoint of the admitted inference
rules over a finite formula universe and a finite family of antecedent
contexts.  It is deliberately simple: global passes over explicitly
enumerated rule instances, re-run until nothing changes.  It exists to be
obviously correct and independent of the fast deciders, so the two can be
tested against each other.

Contexts are the hypothesis set extended by up to ``max_context_extension``
universe formulas, plus (for the logics with context-free rewriting rules)
the empty and singleton contexts their premises live in.  Saturation is
sound for every catalogued logic; completeness at a given bound is an
empirical matter, which is exactly what the agreement tests probe.  With
``track_provenance`` every derivation records how it was obtained, and
:func:`extract_proof` replays the record into a checkable proof object.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from math import comb
from typing import AbstractSet, Iterable, Iterator

from .calculi import LogicId, Proof, ProofBuilder, RuleTag
from .syntax import (
    AND,
    BOT,
    IMP,
    OR,
    TOP,
    And,
    Formula,
    Imp,
    Or,
    Sequent,
    Var,
    formula_key,
    subformulas,
)

__all__ = [
    "SaturationConfig",
    "SaturationResult",
    "saturate",
    "bounded_theorem",
    "extract_proof",
    "subformula_universe",
    "padded_universe",
    "enumerate_small_sequents",
    "CapExceededError",
    "hard_cap",
]

Context = frozenset
Fact = tuple  # (context, formula)


def hard_cap(default: int) -> int:
    """Effort ceiling, overridable through PRIMAL_DEDUCT_HARD_CAP."""
    raw = os.environ.get("PRIMAL_DEDUCT_HARD_CAP")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


class CapExceededError(ValueError):
    pass


def subformula_universe(formulas: Iterable[Formula]) -> frozenset[Formula]:
    universe: set[Formula] = set()
    for f in formulas:
        universe |= subformulas(f)
    return frozenset(universe)


def padded_universe(
    base: AbstractSet[Formula], max_length: int, rounds: int = 1
) -> frozenset[Formula]:
    """Close ``base`` under pairwise combinations up to a length bound.

    Used to check that enlarging the universe beyond the subformula closure
    does not change any answers.
    """
    universe = set(base)
    for _ in range(rounds):
        items = sorted(universe, key=formula_key)
        additions = set()
        for a in items:
            for b in items:
                for make in (And, Imp):
                    f = make(a, b)
                    if f.length <= max_length:
                        additions.add(f)
        universe |= additions
    return frozenset(universe)


def _defaults(logic: LogicId) -> tuple[int, bool]:
    """Context-family defaults: extension size and singleton contexts."""
    rules = logic.admitted
    extension = 0
    if rules & {RuleTag.IMP_I, RuleTag.DF_EXCLUDED_MIDDLE, RuleTag.E1, RuleTag.E2, RuleTag.OR_E}:
        extension = 2
    singletons = bool(rules & {RuleTag.E0, RuleTag.E1_0, RuleTag.E2_0})
    return extension, singletons


@dataclass
class SaturationConfig:
    logic: LogicId
    universe: frozenset[Formula] | None = None  # default: subformula closure
    max_context_extension: int | None = None
    include_singletons: bool | None = None
    max_antecedent_subsets: int = 4096  # guard for the full-powerset mode
    full_powerset: bool = False
    step_bound: int | None = None  # total work units; None = env default
    track_provenance: bool = False


@dataclass
class SaturationResult:
    logic: LogicId
    universe: tuple[Formula, ...]
    derived: dict[Context, set[Formula]]
    partial: bool = False
    provenance: dict[Fact, tuple] | None = None

    def derives(self, sequent: Sequent) -> bool:
        context = frozenset(sequent.antecedents)
        if context not in self.derived:
            raise ValueError(f"context {set(context)} is outside the saturated family")
        if sequent.consequent in self.derived[context]:
            return True
        if sequent.consequent not in self._universe_set():
            raise ValueError(
                f"query {sequent.consequent} is outside the saturated universe"
            )
        return False

    def _universe_set(self) -> frozenset[Formula]:
        return frozenset(self.universe)

    def sequents(self) -> Iterator[Sequent]:
        for context in sorted(self.derived, key=lambda c: (len(c), sorted(map(formula_key, c)))):
            for f in sorted(self.derived[context], key=formula_key):
                yield Sequent(context, f)


def _build_contexts(
    hypotheses: Context,
    base: list[Formula],
    extension: int,
    singletons: bool,
    config: SaturationConfig,
) -> list[Context]:
    if config.full_powerset:
        if 2 ** len(base) > config.max_antecedent_subsets:
            raise CapExceededError(f"full powerset over {len(base)} formulas exceeds the cap")
        return [
            frozenset(c)
            for k in range(len(base) + 1)
            for c in itertools.combinations(base, k)
        ]
    family: dict[Context, None] = {frozenset(): None}
    if singletons:
        for u in base:
            family[frozenset((u,))] = None
    for k in range(extension + 1):
        for ext in itertools.combinations(base, k):
            family[hypotheses | frozenset(ext)] = None
    return list(family)


def saturate(config: SaturationConfig, hypotheses: AbstractSet[Formula]) -> SaturationResult:
    """Least fixpoint of the admitted rules over the context family."""
    hypotheses = frozenset(hypotheses)
    universe = frozenset(config.universe or ()) | subformula_universe(hypotheses)
    base = sorted(universe, key=formula_key)

    extension, singletons = _defaults(config.logic)
    if config.max_context_extension is not None:
        extension = config.max_context_extension
    if config.include_singletons is not None:
        singletons = config.include_singletons
    step_bound = config.step_bound if config.step_bound is not None else hard_cap(20_000_000)

    contexts = _build_contexts(hypotheses, base, extension, singletons, config)
    rules = config.logic.admitted

    conjunctions = [f for f in base if f.kind == AND]
    implications = [f for f in base if f.kind == IMP]
    disjunctions = [f for f in base if f.kind == OR]
    imps_by_right: dict[Formula, list[Formula]] = {}
    imps_by_left: dict[Formula, list[Formula]] = {}
    for f in implications:
        imps_by_right.setdefault(f.right, []).append(f)
        imps_by_left.setdefault(f.left, []).append(f)

    provenance: dict[Fact, tuple] | None = {} if config.track_provenance else None

    def note(ctx: Context, f: Formula, kind: str, prems: tuple = ()) -> None:
        if provenance is not None:
            provenance.setdefault((ctx, f), (kind, prems))

    derived: dict[Context, set[Formula]] = {}
    for c in contexts:
        seeds = set(c)
        for f in c:
            note(c, f, "seed")
        if TOP in universe:
            seeds.add(TOP)
            note(c, TOP, "top")
        derived[c] = seeds

    # Structural subset lists: family members contained in a context.  In
    # powerset mode the remove-one chains reach every subset transitively.
    sub_of: dict[Context, list[Context]] = {}
    empty: Context = frozenset()
    for c in contexts:
        subs: list[Context] = []
        if config.full_powerset:
            subs = [c - {u} for u in c]
        else:
            if c and empty in derived:
                subs.append(empty)
            if singletons:
                for u in c:
                    s = frozenset((u,))
                    if s != c and s in derived:
                        subs.append(s)
            if hypotheses <= c and c != hypotheses and hypotheses in derived:
                subs.append(hypotheses)
                ext = sorted(c - hypotheses, key=formula_key)
                for k in range(1, len(ext) + 1):
                    for part in itertools.combinations(ext, k):
                        s = hypotheses | frozenset(part)
                        if s != c and s in derived:
                            subs.append(s)
        sub_of[c] = subs

    work = 0
    partial = False
    changed = True
    while changed:
        changed = False
        work += len(contexts)
        if work > step_bound:
            partial = True
            break

        for c in contexts:
            d = derived[c]
            before = len(d)

            for s in sub_of[c]:  # premise inflation
                for f in derived[s] - d:
                    d.add(f)
                    note(c, f, "inherit", ((s, f),))

            if RuleTag.CUT in rules:
                for f in list(d):
                    if f in c:
                        continue
                    bigger = derived.get(c | {f})
                    if bigger is not None:
                        for g in bigger - d:
                            d.add(g)
                            note(c, g, "cut", ((c, f), (c | {f}, g)))
                # Composition through singleton contexts: C |- f plus
                # f |- g gives C |- g by inflation and cut.
                for f in list(d):
                    single = derived.get(frozenset((f,)))
                    if single is not None:
                        for g in single - d:
                            d.add(g)
                            note(c, g, "compose", ((c, f), (frozenset((f,)), g)))

            local = True
            while local:
                local = False
                for f in list(d):
                    if f.kind == AND:  # conjunction elimination
                        if f.left not in d:
                            d.add(f.left)
                            note(c, f.left, "and_el", ((c, f),))
                            local = True
                        if f.right not in d:
                            d.add(f.right)
                            note(c, f.right, "and_er", ((c, f),))
                            local = True
                for f in conjunctions:  # conjunction introduction
                    if f not in d and f.left in d and f.right in d:
                        d.add(f)
                        note(c, f, "and_i", ((c, f.left), (c, f.right)))
                        local = True
                for f in implications:
                    if f in d and f.left in d and f.right not in d:  # modus ponens
                        d.add(f.right)
                        note(c, f.right, "imp_e", ((c, f.left), (c, f)))
                        local = True
                    if f not in d and f.right in d:  # weak introduction
                        d.add(f)
                        note(c, f, "imp_iw", ((c, f.right),))
                        local = True
                if RuleTag.IMP_ED in rules:
                    for f in list(d):
                        if f.kind == IMP and f.right not in d:
                            d.add(f.right)
                            note(c, f.right, "imp_ed", ((c, f),))
                            local = True
                if RuleTag.BOT_AX in rules and BOT in d:
                    for f in universe - d:
                        d.add(f)
                        note(c, f, "bot", ((c, BOT),))
                        local = True
                if RuleTag.OR_IL in rules:
                    for f in disjunctions:
                        if f not in d:
                            if f.left in d:
                                d.add(f)
                                note(c, f, "or_il", ((c, f.left),))
                                local = True
                            elif f.right in d:
                                d.add(f)
                                note(c, f, "or_ir", ((c, f.right),))
                                local = True

            if RuleTag.IMP_I in rules:
                for f in implications:
                    if f in d:
                        continue
                    inner_ctx = c | {f.left}
                    inner = derived.get(inner_ctx)
                    if inner is not None and f.right in inner:
                        d.add(f)
                        note(c, f, "imp_i", ((inner_ctx, f.right),))

            if RuleTag.DF_EXCLUDED_MIDDLE in rules:
                for f in base:
                    neg = Imp(f, BOT)
                    if neg not in universe:
                        continue
                    ctx_f, ctx_neg = c | {f}, c | {neg}
                    with_f = derived.get(ctx_f)
                    with_neg = derived.get(ctx_neg)
                    if with_f is not None and with_neg is not None:
                        for g in (with_f & with_neg) - d:
                            d.add(g)
                            note(c, g, "dfem", ((ctx_f, g), (ctx_neg, g)))

            if RuleTag.OR_E in rules:
                for f in disjunctions:
                    if f not in d:
                        continue
                    ctx_l, ctx_r = c | {f.left}, c | {f.right}
                    left = derived.get(ctx_l)
                    right = derived.get(ctx_r)
                    if left is not None and right is not None:
                        for g in (left & right) - d:
                            d.add(g)
                            note(c, g, "or_e", ((ctx_l, g), (ctx_r, g), (c, f)))

            if len(d) != before:
                changed = True
                work += len(d) - before

        if rules & {RuleTag.E1, RuleTag.E2}:
            changed |= _contextual_rewrites(rules, contexts, derived, imps_by_left, imps_by_right, note)
        if rules & {RuleTag.E0, RuleTag.E1_0, RuleTag.E2_0}:
            changed |= _free_rewrites(rules, derived, implications, note)

    return SaturationResult(config.logic, tuple(base), derived, partial, provenance)


def _contextual_rewrites(rules, contexts, derived, imps_by_left, imps_by_right, note) -> bool:
    """Replace one side of an implication antecedent by a formula
    interderivable with it under the same context."""
    changed = False
    for gamma in contexts:
        if RuleTag.E1 in rules:
            for group in imps_by_right.values():
                for old in group:  # gamma, (a -> chi) |- (b -> chi)
                    target = derived.get(gamma | {old})
                    if target is None:
                        continue
                    for new in group:
                        if new in target:
                            continue
                        ctx_a, ctx_b = gamma | {old.left}, gamma | {new.left}
                        with_a = derived.get(ctx_a)
                        with_b = derived.get(ctx_b)
                        if (
                            with_a is not None
                            and with_b is not None
                            and new.left in with_a
                            and old.left in with_b
                        ):
                            target.add(new)
                            note(gamma | {old}, new, "e1", ((ctx_a, new.left), (ctx_b, old.left)))
                            changed = True
        if RuleTag.E2 in rules:
            for group in imps_by_left.values():
                for old in group:  # gamma, (chi -> a) |- (chi -> b)
                    target = derived.get(gamma | {old})
                    if target is None:
                        continue
                    for new in group:
                        if new in target:
                            continue
                        ctx_a, ctx_b = gamma | {old.right}, gamma | {new.right}
                        with_a = derived.get(ctx_a)
                        with_b = derived.get(ctx_b)
                        if (
                            with_a is not None
                            and with_b is not None
                            and new.right in with_a
                            and old.right in with_b
                        ):
                            target.add(new)
                            note(gamma | {old}, new, "e2", ((ctx_a, new.right), (ctx_b, old.right)))
                            changed = True
    return changed


def _free_rewrites(rules, derived, implications, note) -> bool:
    """Context-free rewriting between singleton-antecedent contexts."""
    has_e0 = RuleTag.E0 in rules
    changed = False

    def mutual(a: Formula, b: Formula) -> bool:
        if a is b:
            return True
        da = derived.get(frozenset((a,)))
        db = derived.get(frozenset((b,)))
        return da is not None and db is not None and b in da and a in db

    for old in implications:
        source = frozenset((old,))
        target = derived.get(source)
        if target is None:
            continue
        for new in implications:
            if new in target:
                continue
            left_ok = mutual(old.left, new.left)
            right_ok = mutual(old.right, new.right)
            if has_e0 and left_ok and right_ok:
                prems = (
                    (frozenset((old.left,)), new.left),
                    (frozenset((new.left,)), old.left),
                    (frozenset((old.right,)), new.right),
                    (frozenset((new.right,)), old.right),
                )
                target.add(new)
                note(source, new, "e0", prems)
                changed = True
            elif RuleTag.E1_0 in rules and left_ok and old.right is new.right:
                prems = (
                    (frozenset((old.left,)), new.left),
                    (frozenset((new.left,)), old.left),
                )
                target.add(new)
                note(source, new, "e1_0", prems)
                changed = True
            elif RuleTag.E2_0 in rules and right_ok and old.left is new.left:
                prems = (
                    (frozenset((old.right,)), new.right),
                    (frozenset((new.right,)), old.right),
                )
                target.add(new)
                note(source, new, "e2_0", prems)
                changed = True
    return changed


def bounded_theorem(
    sequent: Sequent,
    logic: LogicId,
    universe: AbstractSet[Formula] | None = None,
    step_bound: int | None = None,
    max_context_extension: int | None = None,
) -> bool | None:
    """Tri-state bounded theoremhood: True if derived, False if saturation
    finished without deriving the sequent, None if the budget ran out.

    ``False`` is exact where the subformula-restricted context family is
    complete (primal logic and its weak-rewriting extension); for larger
    logics it only reports the bounded search outcome.
    """
    config = SaturationConfig(
        logic=logic,
        universe=frozenset(universe) if universe is not None else subformula_universe(sequent.formulas()),
        step_bound=step_bound,
        max_context_extension=max_context_extension,
    )
    result = saturate(config, sequent.antecedents)
    if result.derives(sequent):
        return True
    return None if result.partial else False


# ---------------------------------------------------------------------------
# Proof extraction from provenance


def extract_proof(result: SaturationResult, sequent: Sequent) -> Proof | None:
    """Replay a saturation record into a proof object for ``sequent``.

    Requires a result produced with ``track_provenance``.  Returns ``None``
    when the sequent was not derived.
    """
    if result.provenance is None:
        raise ValueError("saturation was run without provenance tracking")
    context = frozenset(sequent.antecedents)
    goal: Fact = (context, sequent.consequent)
    if context not in result.derived or sequent.consequent not in result.derived[context]:
        return None

    prov = result.provenance
    builder = ProofBuilder()
    index: dict[Fact, int] = {}

    def emit(fact: Fact) -> int:
        # Iterative DFS: provenance chains can outgrow the recursion limit.
        order: list[Fact] = []
        seen: set[Fact] = set()
        stack: list[tuple[Fact, bool]] = [(fact, False)]
        while stack:
            current, expanded = stack.pop()
            if current in index:
                continue
            if expanded:
                order.append(current)
                continue
            if current in seen:
                continue
            seen.add(current)
            stack.append((current, True))
            for premise in prov[current][1]:
                stack.append((premise, False))
        for current in order:
            index[current] = _emit_one(builder, index, prov, current)
        return index[fact]

    final = emit(goal)
    target = Sequent(context, sequent.consequent)
    assert builder.steps[final].conclusion == target
    return builder.build(target)


def _emit_one(builder: ProofBuilder, index: dict[Fact, int], prov: dict, fact: Fact) -> int:
    ctx, f = fact
    kind, prems = prov[fact]
    conclusion = Sequent(ctx, f)
    if kind == "seed":
        i = builder.add(Sequent({f}, f), RuleTag.X2X)
        if ctx != frozenset((f,)):
            i = builder.add(conclusion, RuleTag.PREMISE_INFLATION, (i,))
        return i
    if kind == "top":
        i = builder.add(Sequent((), TOP), RuleTag.TOP)
        if ctx:
            i = builder.add(conclusion, RuleTag.PREMISE_INFLATION, (i,))
        return i
    if kind == "inherit":
        return builder.add(conclusion, RuleTag.PREMISE_INFLATION, (index[prems[0]],))
    if kind == "compose":
        (_, f), (single, g) = prems
        i = builder.add(Sequent(ctx | {f}, g), RuleTag.PREMISE_INFLATION, (index[prems[1]],))
        return builder.add(conclusion, RuleTag.CUT, (index[prems[0]], i))
    if kind == "bot":
        i = builder.add(Sequent({BOT}, f), RuleTag.BOT_AX)
        i = builder.add(Sequent(ctx | {BOT}, f), RuleTag.PREMISE_INFLATION, (i,))
        return builder.add(conclusion, RuleTag.CUT, (index[prems[0]], i))
    rule = {
        "and_el": RuleTag.AND_EL,
        "and_er": RuleTag.AND_ER,
        "and_i": RuleTag.AND_I,
        "imp_e": RuleTag.IMP_E,
        "imp_iw": RuleTag.IMP_IW,
        "imp_ed": RuleTag.IMP_ED,
        "imp_i": RuleTag.IMP_I,
        "cut": RuleTag.CUT,
        "dfem": RuleTag.DF_EXCLUDED_MIDDLE,
        "or_il": RuleTag.OR_IL,
        "or_ir": RuleTag.OR_IR,
        "or_e": RuleTag.OR_E,
        "e1": RuleTag.E1,
        "e2": RuleTag.E2,
        "e1_0": RuleTag.E1_0,
        "e2_0": RuleTag.E2_0,
        "e0": RuleTag.E0,
    }[kind]
    return builder.add(conclusion, rule, tuple(index[p] for p in prems))


# ---------------------------------------------------------------------------
# Exhaustive enumeration of small sequents


def enumerate_small_sequents(
    num_vars: int,
    max_depth: int,
    max_antecedents: int,
    connectives: Iterable[str] = ("and", "imp"),
    max_total_length: int | None = None,
    cap: int | None = None,
) -> Iterator[Sequent]:
    """Every sequent over the depth-bounded formula family, smallest first.

    Atoms have depth 0 and always include top; bot joins when listed among
    the connectives.  Sequents are emitted in ascending combined length,
    ties broken by the canonical formula order, so the stream is exhaustive
    under any length frontier and byte-identical across runs.  The family
    must stay within ``cap`` (default from the hard-cap environment knob).
    """
    conns = set(connectives)
    binary = []
    if "and" in conns:
        binary.append(And)
    if "imp" in conns:
        binary.append(Imp)
    if "or" in conns:
        binary.append(Or)
    atoms: list[Formula] = [Var(f"x{i + 1}") for i in range(num_vars)] + [TOP]
    if "bot" in conns:
        atoms.append(BOT)

    levels: list[list[Formula]] = [list(atoms)]
    seen: set[Formula] = set(atoms)
    for _ in range(max_depth):
        pool = [f for level in levels for f in level]
        fresh = []
        for make in binary:
            for a in pool:
                for b in pool:
                    f = make(a, b)
                    if f not in seen:
                        seen.add(f)
                        fresh.append(f)
        levels.append(fresh)

    formulas = sorted(seen, key=formula_key)
    if cap is None:
        cap = hard_cap(1_000_000)
    if max_total_length is None:
        total = len(formulas) * sum(comb(len(formulas), k) for k in range(max_antecedents + 1))
        if total > cap:
            raise CapExceededError(
                f"family of {total} sequents exceeds the cap of {cap};"
                " pass max_total_length to bound it"
            )
        max_total_length = (max_antecedents + 1) * max(f.length for f in formulas)

    emitted = 0

    def antecedent_sets(remaining: int, start: int, slots: int) -> Iterator[tuple[Formula, ...]]:
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for i in range(start, len(formulas)):
            a = formulas[i]
            if a.length > remaining:
                break  # canonical order is length-ascending
            for rest in antecedent_sets(remaining - a.length, i + 1, slots - 1):
                yield (a, *rest)

    for total_length in range(1, max_total_length + 1):
        for cons in formulas:
            rem = total_length - cons.length
            if rem < 0:
                break
            for ants in antecedent_sets(rem, 0, max_antecedents):
                emitted += 1
                if emitted > cap:
                    raise CapExceededError(f"enumeration exceeded the cap of {cap}")
                yield Sequent(ants, cons)
