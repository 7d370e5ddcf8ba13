"""Formulas, sequents, parsing and printing.

Formulas are immutable, hash-consed expression trees: building the same
formula twice (in any construction order) yields the very same object, so
structural equality is identity and sets/dicts of formulas are cheap.

Text grammar (also used by the CLI and proof files)::

    formula := orExpr ('->' formula)?         # right-associative
    orExpr  := andExpr ('|' andExpr)*
    andExpr := atom ('&' atom)*
    atom    := IDENT | 'top' | 'bot' | '(' formula ')'
    sequent := (formula (',' formula)*)? '|-' formula

Precedence: '&' binds tighter than '|', which binds tighter than '->'.
The printer emits minimal parentheses under the same precedence.
"""

from __future__ import annotations

import re
import threading
from typing import AbstractSet, Iterable, Iterator

__all__ = [
    "Formula",
    "Sequent",
    "Var",
    "And",
    "Imp",
    "Or",
    "TOP",
    "BOT",
    "VAR",
    "TOP_KIND",
    "BOT_KIND",
    "AND",
    "IMP",
    "OR",
    "ParseError",
    "DisjunctionError",
    "parse_formula",
    "parse_sequent",
    "subformulas",
    "sequent_subformulas",
    "proper_subformulas",
    "implication_subformulas",
    "variables_of",
    "contains_or",
    "substitute",
    "formula_key",
]

# Node kinds.
VAR = "var"
TOP_KIND = "top"
BOT_KIND = "bot"
AND = "and"
IMP = "imp"
OR = "or"

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_RESERVED = ("top", "bot")


class ParseError(ValueError):
    """Malformed formula/sequent text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


class DisjunctionError(ValueError):
    """Raised by operations that are only defined on disjunction-free input."""


class Formula:
    """An interned formula node.

    Never constructed directly: use :func:`Var`, :func:`And`, :func:`Imp`,
    :func:`Or` and the constants ``TOP``/``BOT``.  ``fid`` is the unique
    intern id; ``length`` is the node count of the tree.
    """

    __slots__ = ("kind", "name", "left", "right", "fid", "length")

    kind: str
    name: str | None
    left: "Formula | None"
    right: "Formula | None"
    fid: int
    length: int

    def __str__(self) -> str:
        return _print(self, 1)

    def __repr__(self) -> str:
        return f"<Formula {self}>"

    def __hash__(self) -> int:
        return self.fid

    # Identity semantics: interning makes default `is`-equality structural.

    @property
    def is_atom(self) -> bool:
        return self.kind in (VAR, TOP_KIND, BOT_KIND)


_intern_lock = threading.Lock()
_intern: dict[tuple, Formula] = {}


def _make(kind: str, name: str | None, left: Formula | None, right: Formula | None) -> Formula:
    key = (
        kind,
        name,
        left.fid if left is not None else -1,
        right.fid if right is not None else -1,
    )
    node = _intern.get(key)
    if node is not None:
        return node
    # Writes are serialized; readers above never see a half-built node
    # because insertion happens only after full initialization.
    with _intern_lock:
        node = _intern.get(key)
        if node is not None:
            return node
        node = object.__new__(Formula)
        node.kind = kind
        node.name = name
        node.left = left
        node.right = right
        node.length = 1 + (left.length if left else 0) + (right.length if right else 0)
        node.fid = len(_intern)
        _intern[key] = node
        return node


def Var(name: str) -> Formula:
    """Interned propositional variable.  Names follow identifier syntax."""
    if not _IDENT_RE.fullmatch(name) or name in _RESERVED:
        raise ValueError(f"invalid variable name: {name!r}")
    return _make(VAR, name, None, None)


TOP = _make(TOP_KIND, None, None, None)
BOT = _make(BOT_KIND, None, None, None)


def And(left: Formula, right: Formula) -> Formula:
    return _make(AND, None, left, right)


def Imp(left: Formula, right: Formula) -> Formula:
    return _make(IMP, None, left, right)


def Or(left: Formula, right: Formula) -> Formula:
    return _make(OR, None, left, right)


# ---------------------------------------------------------------------------
# Printing

_PREC = {IMP: 1, OR: 2, AND: 3}


def _print(f: Formula, required: int) -> str:
    if f.kind == VAR:
        return f.name  # type: ignore[return-value]
    if f.kind == TOP_KIND:
        return "top"
    if f.kind == BOT_KIND:
        return "bot"
    if f.kind == AND:
        s = f"{_print(f.left, 3)} & {_print(f.right, 4)}"
    elif f.kind == OR:
        s = f"{_print(f.left, 2)} | {_print(f.right, 3)}"
    else:  # IMP, right-associative
        s = f"{_print(f.left, 2)} -> {_print(f.right, 1)}"
    return f"({s})" if _PREC[f.kind] < required else s


def formula_key(f: Formula) -> tuple[int, str, int]:
    """Canonical sort key: length first, then printed form, then intern id."""
    return (f.length, str(f), f.fid)


# ---------------------------------------------------------------------------
# Sequents


class Sequent:
    """A judgment ``antecedents |- consequent``.

    Antecedents are a set: duplicates collapse and order is irrelevant.
    """

    __slots__ = ("antecedents", "consequent", "_hash")

    def __init__(self, antecedents: Iterable[Formula], consequent: Formula):
        self.antecedents: frozenset[Formula] = frozenset(antecedents)
        self.consequent = consequent
        self._hash = hash((self.antecedents, consequent))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Sequent)
            and self.consequent is other.consequent
            and self.antecedents == other.antecedents
        )

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if not self.antecedents:
            return f"|- {self.consequent}"
        ants = ", ".join(sorted(str(a) for a in self.antecedents))
        return f"{ants} |- {self.consequent}"

    def __repr__(self) -> str:
        return f"<Sequent {self}>"

    @property
    def total_length(self) -> int:
        return self.consequent.length + sum(a.length for a in self.antecedents)

    def formulas(self) -> Iterator[Formula]:
        yield from self.antecedents
        yield self.consequent


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<imp>->)|(?P<turnstile>\|-)"
    r"|(?P<or>\|)|(?P<and>&)|(?P<comma>,)|(?P<lpar>\()|(?P<rpar>\)))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            at = len(text) - len(rest)
            raise ParseError(f"unexpected character {rest[0]!r}", at)
        tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))  # type: ignore[arg-type]
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {what}", tok[2])
        return tok

    def formula(self) -> Formula:
        left = self.or_expr()
        if self.peek()[0] == "imp":
            self.next()
            return Imp(left, self.formula())
        return left

    def or_expr(self) -> Formula:
        f = self.and_expr()
        while self.peek()[0] == "or":
            self.next()
            f = Or(f, self.and_expr())
        return f

    def and_expr(self) -> Formula:
        f = self.atom()
        while self.peek()[0] == "and":
            self.next()
            f = And(f, self.atom())
        return f

    def atom(self) -> Formula:
        kind, value, at = self.next()
        if kind == "ident":
            if value == "top":
                return TOP
            if value == "bot":
                return BOT
            return Var(value)
        if kind == "lpar":
            f = self.formula()
            self.expect("rpar", "')'")
            return f
        raise ParseError("expected a formula", at)

    def sequent(self) -> Sequent:
        antecedents: list[Formula] = []
        if self.peek()[0] == "turnstile":
            self.next()
        else:
            antecedents.append(self.formula())
            while self.peek()[0] == "comma":
                self.next()
                antecedents.append(self.formula())
            kind, _, at = self.next()
            if kind != "turnstile":
                raise ParseError("expected '|-'", at)
        consequent = self.formula()
        return Sequent(antecedents, consequent)

    def finish(self) -> None:
        kind, _, at = self.peek()
        if kind != "end":
            raise ParseError("unexpected trailing input", at)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.finish()
    return f


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    s = p.sequent()
    p.finish()
    return s


# ---------------------------------------------------------------------------
# Subformula machinery

_subformula_cache: dict[int, frozenset[Formula]] = {}


def subformulas(f: Formula) -> frozenset[Formula]:
    """Reflexive-transitive subterm closure, including ``f`` itself."""
    cached = _subformula_cache.get(f.fid)
    if cached is not None:
        return cached
    if f.is_atom:
        result = frozenset((f,))
    else:
        result = subformulas(f.left) | subformulas(f.right) | {f}
    _subformula_cache[f.fid] = result
    return result


def sequent_subformulas(s: Sequent) -> frozenset[Formula]:
    result = subformulas(s.consequent)
    for a in s.antecedents:
        result |= subformulas(a)
    return result


def proper_subformulas(s: Sequent, helpers: AbstractSet[Formula]) -> frozenset[Formula]:
    """Subformulas of ``s`` occurring at some position outside every helper.

    A position counts as inside a helper occurrence if the node at that
    position, or any of its ancestors within the same member formula, is a
    member of ``helpers``.  With an empty helper set this is exactly
    :func:`sequent_subformulas`.
    """
    found: set[Formula] = set()

    def walk(f: Formula) -> None:
        if f in helpers:
            return  # this position and everything below it is shielded
        if f in found:
            return  # already found at an unshielded position and descended
        found.add(f)
        if not f.is_atom:
            walk(f.left)
            walk(f.right)

    for member in (*s.antecedents, s.consequent):
        walk(member)
    return frozenset(found)


def implication_subformulas(f: Formula) -> frozenset[Formula]:
    return frozenset(g for g in subformulas(f) if g.kind == IMP)


_vars_cache: dict[int, frozenset[str]] = {}


def variables_of(f: Formula) -> frozenset[str]:
    cached = _vars_cache.get(f.fid)
    if cached is not None:
        return cached
    if f.kind == VAR:
        result = frozenset((f.name,))
    elif f.is_atom:
        result = frozenset()
    else:
        result = variables_of(f.left) | variables_of(f.right)
    _vars_cache[f.fid] = result
    return result


_or_cache: dict[int, bool] = {}


def contains_or(f: Formula) -> bool:
    cached = _or_cache.get(f.fid)
    if cached is not None:
        return cached
    if f.kind == OR:
        result = True
    elif f.is_atom:
        result = False
    else:
        result = contains_or(f.left) or contains_or(f.right)
    _or_cache[f.fid] = result
    return result


def substitute(f: Formula, name: str, replacement: Formula) -> Formula:
    """Replace every occurrence of the variable ``name`` in ``f``."""
    if f.kind == VAR:
        return replacement if f.name == name else f
    if f.is_atom:
        return f
    left = substitute(f.left, name, replacement)
    right = substitute(f.right, name, replacement)
    if left is f.left and right is f.right:
        return f
    return _make(f.kind, None, left, right)
