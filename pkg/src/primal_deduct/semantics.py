"""Refutation machinery: valuations, relaxed Kripke models, truth tables.

Valuations treat an implication as its consequent, which soundly models
primal logic extended with the degenerate-implication rule.  Kripke models
evaluate implications freely per world, subject to two closure conditions
(a true consequent forces the implication; a true implication plus its
antecedent forces the consequent) and persistence along the world order.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Mapping, Sequence

from .calculi import PL_ED, Proof, RuleTag, check_proof
from .syntax import (
    AND,
    BOT_KIND,
    IMP,
    OR,
    TOP_KIND,
    VAR,
    DisjunctionError,
    Formula,
    Sequent,
    contains_or,
    formula_key,
    sequent_subformulas,
    variables_of,
)

__all__ = [
    "Valuation",
    "evaluate_valuation",
    "soundness_check",
    "KripkeModel",
    "ModelInvariantError",
    "UndeclaredImplicationError",
    "model_check",
    "countermodel_search",
    "SearchBoundError",
    "decide_cl_truthtable",
    "VariableCapError",
    "format_countermodel",
]


class Valuation:
    """A two-valued assignment; unlisted variables default to false."""

    __slots__ = ("assignment",)

    def __init__(self, assignment: Mapping[str, bool] | None = None):
        self.assignment = dict(assignment or {})

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={'T' if v else 'F'}" for k, v in sorted(self.assignment.items()))
        return f"<Valuation {inner or 'all false'}>"

    def formula(self, f: Formula) -> bool:
        if f.kind == VAR:
            return self.assignment.get(f.name, False)
        if f.kind == TOP_KIND:
            return True
        if f.kind == BOT_KIND:
            return False
        if f.kind == AND:
            return self.formula(f.left) and self.formula(f.right)
        if f.kind == IMP:
            return self.formula(f.right)  # implications collapse to their consequent
        raise DisjunctionError(f"disjunction has no valuation semantics: {f}")

    def sequent(self, s: Sequent) -> bool:
        if any(not self.formula(a) for a in s.antecedents):
            return True
        return self.formula(s.consequent)


def evaluate_valuation(valuation: Valuation, sequent: Sequent) -> bool:
    return valuation.sequent(sequent)


def _all_valuations(names: Sequence[str]) -> Iterable[Valuation]:
    for values in itertools.product((False, True), repeat=len(names)):
        yield Valuation(dict(zip(names, values)))


def soundness_check(proof: Proof) -> tuple[int, Valuation] | None:
    """Evaluate every step of a valid degenerate-implication proof under all
    assignments; returns the first failing (step index, valuation), if any.

    A non-``None`` result would demonstrate an implementation bug, never a
    property of the calculus.
    """
    violation = check_proof(proof, PL_ED)
    if violation is not None:
        raise ValueError(f"proof is not valid: {violation}")
    names: set[str] = set()
    for step in proof.steps:
        for f in step.conclusion.formulas():
            names |= variables_of(f)
    for valuation in _all_valuations(sorted(names)):
        for i, step in enumerate(proof.steps):
            if not valuation.sequent(step.conclusion):
                return (i, valuation)
    return None


# ---------------------------------------------------------------------------
# Kripke models


class ModelInvariantError(ValueError):
    """The would-be model violates an order, closure, or persistence rule."""


class UndeclaredImplicationError(ValueError):
    """A formula mentions an implication outside the declared universe."""


def _closure_of_order(worlds: Sequence[str], order: Iterable[tuple[str, str]]):
    le: set[tuple[str, str]] = {(w, w) for w in worlds}
    le.update(order)
    changed = True
    while changed:
        changed = False
        for a, b in list(le):
            for c, d in list(le):
                if b == c and (a, d) not in le:
                    le.add((a, d))
                    changed = True
    return frozenset(le)


class KripkeModel:
    """Finite relaxed model: free implication values under two conditions.

    ``true_atoms`` maps each world to its true atoms (variables and bot);
    ``true_imps`` to its true implications, all drawn from the declared
    ``universe``.  Construction validates everything and raises
    :class:`ModelInvariantError` on the first failure.
    """

    __slots__ = ("worlds", "le", "true_atoms", "true_imps", "universe")

    def __init__(
        self,
        worlds: Sequence[str],
        order: Iterable[tuple[str, str]],
        true_atoms: Mapping[str, AbstractSet[Formula]],
        true_imps: Mapping[str, AbstractSet[Formula]],
        universe: AbstractSet[Formula],
    ):
        self.worlds = tuple(worlds)
        self.le = _closure_of_order(self.worlds, order)
        for a, b in self.le:
            if a not in self.worlds or b not in self.worlds:
                raise ModelInvariantError(f"order mentions unknown world: {(a, b)}")
            if a != b and (b, a) in self.le:
                raise ModelInvariantError(f"order is not antisymmetric: {a} <=> {b}")
        self.true_atoms = {w: frozenset(true_atoms.get(w, ())) for w in self.worlds}
        self.true_imps = {w: frozenset(true_imps.get(w, ())) for w in self.worlds}
        self.universe = frozenset(universe)

        for f in self.universe:
            if f.kind != IMP:
                raise ModelInvariantError(f"universe must contain implications only: {f}")
            for part in (f.left, f.right):
                missing = {g for g in _imp_parts(part) if g not in self.universe}
                if missing:
                    raise ModelInvariantError(
                        f"universe is not closed under implication subformulas: missing {missing}"
                    )
        for w in self.worlds:
            for f in self.true_imps[w]:
                if f not in self.universe:
                    raise ModelInvariantError(f"undeclared implication made true: {f}")

        # Persistence along the order, for atoms and implications alike.
        for a, b in self.le:
            if a == b:
                continue
            if not self.true_atoms[a] <= self.true_atoms[b]:
                raise ModelInvariantError(f"atom truth is not persistent from {a} to {b}")
            if not self.true_imps[a] <= self.true_imps[b]:
                raise ModelInvariantError(f"implication truth is not persistent from {a} to {b}")

        for w in self.worlds:
            for f in self.universe:
                if self.formula_true(w, f.right) and f not in self.true_imps[w]:
                    raise ModelInvariantError(
                        f"at {w}: {f.right} is true, so {f} must be true as well"
                    )
                if (
                    f in self.true_imps[w]
                    and self.formula_true(w, f.left)
                    and not self.formula_true(w, f.right)
                ):
                    raise ModelInvariantError(
                        f"at {w}: {f} and {f.left} are true, so {f.right} must be true"
                    )

    @classmethod
    def standard(
        cls,
        worlds: Sequence[str],
        order: Iterable[tuple[str, str]],
        true_atoms: Mapping[str, AbstractSet[Formula]],
        universe: AbstractSet[Formula],
    ) -> "KripkeModel":
        """Model whose implications follow the intuitionistic clause:
        true at a world iff every upper world making the antecedent true
        makes the consequent true.  Sound and complete for minimal logic.
        """
        worlds = tuple(worlds)
        le = _closure_of_order(worlds, order)
        imps = {w: set() for w in worlds}

        def true_at(w: str, f: Formula) -> bool:
            if f.kind == VAR or f.kind == BOT_KIND:
                return f in true_atoms.get(w, ())
            if f.kind == TOP_KIND:
                return True
            if f.kind == AND:
                return true_at(w, f.left) and true_at(w, f.right)
            if f.kind == IMP:
                return f in imps[w]
            raise DisjunctionError(f"disjunction is not supported here: {f}")

        for f in sorted(universe, key=formula_key):  # parts before wholes
            for w in worlds:
                if all(
                    true_at(b, f.right)
                    for b in worlds
                    if (w, b) in le and true_at(b, f.left)
                ):
                    imps[w].add(f)
        return cls(worlds, order, true_atoms, imps, universe)

    def formula_true(self, world: str, f: Formula) -> bool:
        if f.kind == VAR or f.kind == BOT_KIND:
            return f in self.true_atoms[world]
        if f.kind == TOP_KIND:
            return True
        if f.kind == AND:
            return self.formula_true(world, f.left) and self.formula_true(world, f.right)
        if f.kind == IMP:
            if f not in self.universe:
                raise UndeclaredImplicationError(f"implication not declared in this model: {f}")
            return f in self.true_imps[world]
        raise DisjunctionError(f"disjunction is not supported here: {f}")

    def sequent_true(self, world: str, s: Sequent) -> bool:
        for b in self.worlds:
            if (world, b) not in self.le:
                continue
            if all(self.formula_true(b, a) for a in s.antecedents):
                if not self.formula_true(b, s.consequent):
                    return False
        return True


def model_check(model: KripkeModel, world: str, sequent: Sequent) -> bool:
    return model.sequent_true(world, sequent)


class SearchBoundError(ValueError):
    """The requested countermodel search exceeds the configured caps."""


def _imp_parts(f: Formula) -> frozenset[Formula]:
    return frozenset(g for g in sequent_subformulas(Sequent((), f)) if g.kind == IMP)


def _upward_closed_sets(worlds: Sequence[str], le: frozenset) -> list[frozenset[str]]:
    sets = []
    for bits in itertools.product((False, True), repeat=len(worlds)):
        chosen = frozenset(w for w, b in zip(worlds, bits) if b)
        if all((a, b) not in le or b in chosen for a in chosen for b in worlds):
            sets.append(chosen)
    return sets


def _posets(n: int) -> list[frozenset[tuple[int, int]]]:
    """All partial orders on 0..n-1, chains first, deterministic order."""
    base = [(i, i) for i in range(n)]
    candidates = []
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        rel = set(base) | {p for p, b in zip(pairs, bits) if b}
        if any((b, a) in rel for a, b in rel if a != b):
            continue
        if any((a, d) not in rel for a, b in rel for c, d in rel if b == c):
            continue
        candidates.append(frozenset(rel))
    seen = set()
    unique = []
    for rel in candidates:
        if rel not in seen:
            seen.add(rel)
            unique.append(rel)
    # Chains (totally ordered sets) come first; these suffice in practice.
    def key(rel):
        comparable = sum(1 for a in range(n) for b in range(n) if (a, b) in rel or (b, a) in rel)
        is_chain = comparable == n * n
        return (not is_chain, -len(rel), sorted(rel))

    unique.sort(key=key)
    return unique


_DEFAULT_WORLD_CAP = 3
_DEFAULT_MODEL_CAP = 2_000_000


def _env_cap(default: int) -> int:
    raw = os.environ.get("PRIMAL_DEDUCT_HARD_CAP")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def countermodel_search(
    sequent: Sequent,
    max_worlds: int = 2,
    world_cap: int = _DEFAULT_WORLD_CAP,
    max_models: int | None = None,
    semantics: str = "free",
    bot_stays_false: bool = False,
) -> tuple[KripkeModel, str] | None:
    """Search for a model and world where ``sequent`` fails.

    ``semantics`` is ``"free"`` (implications valued arbitrarily under the
    model conditions; refutes primal-logic derivability) or ``"standard"``
    (intuitionistic implication clause; refutes minimal-logic derivability).
    With ``bot_stays_false`` the bot atom is never made true, so a standard
    countermodel also refutes derivability in the logic with explosion.
    Returns ``None`` when no countermodel exists within the bound, which is
    not a theoremhood certificate.  The search is exponential, so the world
    count is capped; ``max_models`` bounds the number of candidate models.
    """
    if contains_or(sequent.consequent) or any(contains_or(a) for a in sequent.antecedents):
        raise DisjunctionError("countermodel search is defined for disjunction-free sequents")
    if max_worlds > world_cap:
        raise SearchBoundError(f"max_worlds={max_worlds} exceeds the cap of {world_cap}")
    if max_models is None:
        max_models = _env_cap(_DEFAULT_MODEL_CAP)

    subs = sequent_subformulas(sequent)
    atoms = sorted((f for f in subs if f.kind in (VAR, BOT_KIND)), key=formula_key)
    if bot_stays_false:
        atoms = [a for a in atoms if a.kind != BOT_KIND]
    imps = sorted((f for f in subs if f.kind == IMP), key=formula_key)
    universe = frozenset(imps)

    examined = 0
    for n in range(1, max_worlds + 1):
        worlds = tuple(f"w{i}" for i in range(n))
        for rel in _posets(n):
            le = frozenset((worlds[a], worlds[b]) for a, b in rel)
            upsets = _upward_closed_sets(worlds, le)
            for atom_choice in itertools.product(upsets, repeat=len(atoms)):
                true_atoms = {
                    w: frozenset(a for a, chosen in zip(atoms, atom_choice) if w in chosen)
                    for w in worlds
                }
                if semantics == "standard":
                    examined += 1
                    if examined > max_models:
                        raise SearchBoundError(f"examined more than {max_models} candidate models")
                    model = KripkeModel.standard(worlds, le, true_atoms, universe)
                    for w in worlds:
                        if not model.sequent_true(w, sequent):
                            return model, w
                    continue
                for imp_choice in itertools.product(upsets, repeat=len(imps)):
                    examined += 1
                    if examined > max_models:
                        raise SearchBoundError(f"examined more than {max_models} candidate models")
                    true_imps = {
                        w: frozenset(f for f, chosen in zip(imps, imp_choice) if w in chosen)
                        for w in worlds
                    }
                    try:
                        model = KripkeModel(worlds, le, true_atoms, true_imps, universe)
                    except ModelInvariantError:
                        continue
                    for w in worlds:
                        if not model.sequent_true(w, sequent):
                            return model, w
    return None


def format_countermodel(model: KripkeModel, world: str, sequent: Sequent) -> str:
    """Flat key-value rendering of a refutation, formulas in the text grammar."""
    lines = [f"sequent = {sequent}", f"world = {world}", "worlds = " + " ".join(model.worlds)]
    pairs = sorted(f"{a}<={b}" for a, b in model.le if a != b)
    lines.append("order = " + " ".join(pairs))
    for w in model.worlds:
        atoms = ", ".join(sorted(str(a) for a in model.true_atoms[w]))
        lines.append(f"atoms[{w}] = {atoms}")
    for w in model.worlds:
        imps = ", ".join(sorted(str(f) for f in model.true_imps[w]))
        lines.append(f"imps[{w}] = {imps}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Classical truth tables


class VariableCapError(ValueError):
    pass


def decide_cl_truthtable(sequent: Sequent, variable_cap: int = 20) -> bool:
    """Classical validity of ``antecedents -> consequent`` by truth table."""
    names: set[str] = set()
    for f in sequent.formulas():
        names |= variables_of(f)
    if len(names) > variable_cap:
        raise VariableCapError(f"{len(names)} variables exceed the cap of {variable_cap}")
    ordered = sorted(names)

    def value(f: Formula, env: dict[str, bool]) -> bool:
        if f.kind == VAR:
            return env[f.name]
        if f.kind == TOP_KIND:
            return True
        if f.kind == BOT_KIND:
            return False
        if f.kind == AND:
            return value(f.left, env) and value(f.right, env)
        if f.kind == OR:
            return value(f.left, env) or value(f.right, env)
        return (not value(f.left, env)) or value(f.right, env)

    for values in itertools.product((False, True), repeat=len(ordered)):
        env = dict(zip(ordered, values))
        if all(value(a, env) for a in sequent.antecedents) and not value(
            sequent.consequent, env
        ):
            return False
    return True
