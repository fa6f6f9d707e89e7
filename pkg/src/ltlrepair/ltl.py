"""LTL abstract syntax, parser, token rendering and path-based editing.

Formulas are immutable frozen dataclasses, so structurally equal trees
compare and hash equal. Derived operators (``->``, ``<->``, ``F``, ``G``,
``W``, ``R``, ``&&``) are first-class node kinds.

Concrete syntax::

    atoms       [a-zA-Z_][a-zA-Z0-9_]*   (except the reserved words below)
    constants   true false
    unary       !  X  F  G
    binary      &&  ||  ->  <->  U  W  R

Binding strength, tightest first: unary operators, ``U``/``W``/``R``
(right associative), ``&&``, ``||``, ``->`` (right associative), ``<->``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

UNARY_OPS = ("!", "X", "F", "G")
BINARY_OPS = ("&&", "||", "->", "<->", "U", "W", "R")
TEMPORAL_BINARY_OPS = ("U", "W", "R")
RESERVED = frozenset({"true", "false", "X", "F", "G", "U", "W", "R"})

Path = tuple[int, ...]


class LTLSyntaxError(ValueError):
    """Raised on malformed formula text."""

    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnknownAtomError(ValueError):
    """Raised when a formula mentions an atom outside the declared alphabet."""

    def __init__(self, atom: str):
        super().__init__(f"unknown atomic proposition {atom!r}")
        self.atom = atom


class InvalidPathError(IndexError):
    pass


@dataclass(frozen=True)
class Formula:
    @property
    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Constant(Formula):
    value: bool


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Unary(Formula):
    op: str
    child: Formula

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.child,)


@dataclass(frozen=True)
class Binary(Formula):
    op: str
    left: Formula
    right: Formula

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


TRUE = Constant(True)
FALSE = Constant(False)

FormulaLike = Union[Formula, str]


# Constructors used throughout the code base and tests.


def Not(f: Formula) -> Unary:
    return Unary("!", f)


def Next(f: Formula) -> Unary:
    return Unary("X", f)


def Eventually(f: Formula) -> Unary:
    return Unary("F", f)


def Always(f: Formula) -> Unary:
    return Unary("G", f)


def And(a: Formula, b: Formula) -> Binary:
    return Binary("&&", a, b)


def Or(a: Formula, b: Formula) -> Binary:
    return Binary("||", a, b)


def Implies(a: Formula, b: Formula) -> Binary:
    return Binary("->", a, b)


def Iff(a: Formula, b: Formula) -> Binary:
    return Binary("<->", a, b)


def Until(a: Formula, b: Formula) -> Binary:
    return Binary("U", a, b)


def WeakUntil(a: Formula, b: Formula) -> Binary:
    return Binary("W", a, b)


def Release(a: Formula, b: Formula) -> Binary:
    return Binary("R", a, b)


def conjunction(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    result: Formula | None = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return TRUE if result is None else result


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|&&|\|\||!|\(|\))|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)

# binary operator -> (binding power, right associative)
_BINARY_PREC = {
    "<->": (1, False),
    "->": (2, True),
    "||": (3, False),
    "&&": (4, False),
    "U": (5, True),
    "W": (5, True),
    "R": (5, True),
}


def tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise LTLSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        tok = m.group("op") or m.group("ident")
        tokens.append((tok, m.start("op") if m.group("op") else m.start("ident")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Iterable[str] | None):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.alphabet = None if alphabet is None else frozenset(alphabet)

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def error(self, message: str) -> LTLSyntaxError:
        return LTLSyntaxError(message, self.text, self.pos())

    def parse(self) -> Formula:
        if not self.tokens:
            raise self.error("empty formula")
        f = self.expr(0)
        if self.i != len(self.tokens):
            raise self.error(f"unexpected token {self.peek()!r}")
        return f

    def expr(self, min_prec: int) -> Formula:
        left = self.unary()
        while True:
            tok = self.peek()
            if tok not in _BINARY_PREC:
                return left
            prec, right_assoc = _BINARY_PREC[tok]
            if prec < min_prec:
                return left
            self.i += 1
            right = self.expr(prec if right_assoc else prec + 1)
            left = Binary(tok, left, right)

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        if tok in UNARY_OPS:
            self.i += 1
            return Unary(tok, self.unary())
        if tok == "(":
            self.i += 1
            f = self.expr(0)
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.i += 1
            return f
        if tok == "true":
            self.i += 1
            return TRUE
        if tok == "false":
            self.i += 1
            return FALSE
        if tok[0].isalpha() or tok[0] == "_":
            if tok in RESERVED:
                raise self.error(f"operator {tok!r} used as an atom")
            if self.alphabet is not None and tok not in self.alphabet:
                raise UnknownAtomError(tok)
            self.i += 1
            return Atom(tok)
        raise self.error(f"unexpected token {tok!r}")


def parse(text: str, alphabet: Iterable[str] | None = None) -> Formula:
    """Parse ``text`` into a formula.

    If ``alphabet`` is given, atoms outside it raise :class:`UnknownAtomError`.
    """
    return _Parser(text, alphabet).parse()


def as_formula(f: FormulaLike, alphabet: Iterable[str] | None = None) -> Formula:
    return parse(f, alphabet) if isinstance(f, str) else f


# ---------------------------------------------------------------------------
# Rendering


def render(f: Formula) -> list[str]:
    """Deterministic token stream.

    Unary operators always parenthesize their operand and binary operands
    are parenthesized when they are themselves binary, so the stream never
    depends on operator precedence.
    """
    out: list[str] = []
    _render_into(f, out)
    return out


def _render_into(f: Formula, out: list[str]) -> None:
    if isinstance(f, Constant):
        out.append("true" if f.value else "false")
    elif isinstance(f, Atom):
        out.append(f.name)
    elif isinstance(f, Unary):
        out.append(f.op)
        out.append("(")
        _render_into(f.child, out)
        out.append(")")
    elif isinstance(f, Binary):
        for side, is_left in ((f.left, True), (f.right, False)):
            if isinstance(side, Binary):
                out.append("(")
                _render_into(side, out)
                out.append(")")
            else:
                _render_into(side, out)
            if is_left:
                out.append(f.op)
    else:
        raise TypeError(f"not a formula: {f!r}")


def join_tokens(tokens: Sequence[str]) -> str:
    parts: list[str] = []
    prev = None
    for tok in tokens:
        if parts and not (prev == "(" or tok == ")" or (tok == "(" and prev in UNARY_OPS)):
            parts.append(" ")
        parts.append(tok)
        prev = tok
    return "".join(parts)


def to_text(f: Formula) -> str:
    return join_tokens(render(f))


# ---------------------------------------------------------------------------
# Structure


def subformulas(f: Formula) -> list[tuple[Path, Formula]]:
    """Pre-order list of ``(path, node)`` pairs, root first."""
    out: list[tuple[Path, Formula]] = []
    stack: list[tuple[Path, Formula]] = [((), f)]
    while stack:
        path, node = stack.pop()
        out.append((path, node))
        kids = node.children
        for idx in range(len(kids) - 1, -1, -1):
            stack.append((path + (idx,), kids[idx]))
    return out


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in f.children)


def depth(f: Formula) -> int:
    return 1 + max((depth(c) for c in f.children), default=0)


def atoms(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    result: set[str] = set()
    for c in f.children:
        result |= atoms(c)
    return result


def iter_nodes(f: Formula) -> Iterator[Formula]:
    for _, node in subformulas(f):
        yield node


def get_at(f: Formula, path: Path) -> Formula:
    node = f
    for idx in path:
        kids = node.children
        if not 0 <= idx < len(kids):
            raise InvalidPathError(f"path {path} is not valid for {to_text(f)}")
        node = kids[idx]
    return node


def replace_at(f: Formula, path: Path, g: Formula) -> Formula:
    """Return a copy of ``f`` whose node at ``path`` is ``g``."""
    if not path:
        return g
    idx, rest = path[0], path[1:]
    if isinstance(f, Unary) and idx == 0:
        return Unary(f.op, replace_at(f.child, rest, g))
    if isinstance(f, Binary) and idx == 0:
        return Binary(f.op, replace_at(f.left, rest, g), f.right)
    if isinstance(f, Binary) and idx == 1:
        return Binary(f.op, f.left, replace_at(f.right, rest, g))
    raise InvalidPathError(f"path index {idx} is not valid at {to_text(f)}")
