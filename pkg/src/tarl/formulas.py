"""Propositional formulas over ~, &, |, -> and the fusion connective o.

The ASCII surface syntax is

    formula := imp ;  imp := or ("->" imp)? ;  or := and ("|" and)* ;
    and := fus ("&" fus)* ;  fus := unary ("o" unary)* ;
    unary := "~" unary | "(" formula ")" | ident ;
    ident := [a-z][a-zA-Z0-9_]*   (the bare keyword "o" is reserved)

so precedence is ~ > o > & > | > ->, implication associates to the right and
the other binary connectives to the left.  The Unicode spellings of the
connectives are accepted as aliases on input.  Fusion is definable:
A o B abbreviates ~(A -> ~B), and ``desugar_fusion`` performs that rewrite.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Formula", "Var", "Neg", "And", "Or", "Imp", "Fusion",
    "ParseError", "parse_formula", "print_formula",
    "desugar_fusion", "is_core", "variables", "shared_variables",
    "substitute",
]


@dataclass(frozen=True)
class Formula:
    """Base class; formulas are immutable and compared structurally."""

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str

    def __post_init__(self):
        if not re.fullmatch(r"[a-z][a-zA-Z0-9_]*", self.name) or self.name == "o":
            raise ValueError(f"bad variable name: {self.name!r}")


@dataclass(frozen=True)
class Neg(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Fusion(Formula):
    left: Formula
    right: Formula


class ParseError(ValueError):
    """Raised on malformed input; carries the offset and what was expected."""

    def __init__(self, position: int, expected: str, found: str = ""):
        self.position = position
        self.expected = expected
        self.found = found
        shown = f", found {found!r}" if found else ""
        super().__init__(f"at position {position}: expected {expected}{shown}")


# ------------------------------------------------------------------
# Lexer / parser
# ------------------------------------------------------------------

_ALIASES = {"∧": " & ", "∨": " | ", "→": " -> ", "¬": " ~", "∘": " o ",
            "～": " ~"}

_TOKEN_RE = re.compile(r"\s*(->|[~&|()]|[a-z][a-zA-Z0-9_]*)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    for uni, ascii_ in _ALIASES.items():
        text = text.replace(uni, ascii_)
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(pos, "a connective, '(' or an identifier", stripped[0])
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, int]], length: int):
        self.tokens = tokens
        self.pos = 0
        self.length = length

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def here(self) -> int:
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else self.length

    def eat(self) -> str:
        tok = self.tokens[self.pos][0]
        self.pos += 1
        return tok

    def expect(self, tok: str):
        if self.peek() != tok:
            raise ParseError(self.here(), repr(tok), self.peek() or "end of input")
        self.eat()

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.eat()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.eat()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.fus()
        while self.peek() == "&":
            self.eat()
            f = And(f, self.fus())
        return f

    def fus(self) -> Formula:
        f = self.unary()
        while self.peek() == "o":
            self.eat()
            f = Fusion(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.eat()
            return Neg(self.unary())
        if tok == "(":
            self.eat()
            f = self.imp()
            self.expect(")")
            return f
        if tok is not None and re.fullmatch(r"[a-z][a-zA-Z0-9_]*", tok) and tok != "o":
            self.eat()
            return Var(tok)
        raise ParseError(self.here(), "'~', '(' or an identifier", tok or "end of input")


def parse_formula(text: str) -> Formula:
    """Parse the ASCII (or Unicode-aliased) syntax into a Formula."""
    parser = _Parser(_tokenize(text), len(text))
    f = parser.imp()
    if parser.peek() is not None:
        raise ParseError(parser.here(), "end of input", parser.peek())
    return f


# ------------------------------------------------------------------
# Printer
# ------------------------------------------------------------------

def _level(f: Formula) -> int:
    if isinstance(f, Imp):
        return 1
    if isinstance(f, Or):
        return 2
    if isinstance(f, And):
        return 3
    if isinstance(f, Fusion):
        return 4
    return 5  # Neg and Var never need wrapping below a binary operator


def _render(f: Formula, strength: int) -> str:
    if isinstance(f, Var):
        text = f.name
    elif isinstance(f, Neg):
        text = "~" + _render(f.body, 5)
    elif isinstance(f, Imp):
        text = _render(f.left, 2) + " -> " + _render(f.right, 1)
    elif isinstance(f, Or):
        text = _render(f.left, 2) + " | " + _render(f.right, 3)
    elif isinstance(f, And):
        text = _render(f.left, 3) + " & " + _render(f.right, 4)
    elif isinstance(f, Fusion):
        text = _render(f.left, 4) + " o " + _render(f.right, 5)
    else:  # pragma: no cover - the AST is closed
        raise TypeError(f"not a formula: {f!r}")
    if _level(f) < strength:
        return "(" + text + ")"
    return text


def print_formula(f: Formula) -> str:
    """Minimal-parenthesis rendering; parse_formula(print_formula(f)) == f."""
    return _render(f, 0)


# ------------------------------------------------------------------
# Structural helpers
# ------------------------------------------------------------------

def desugar_fusion(f: Formula) -> Formula:
    """Replace every fusion A o B by ~(A -> ~B), bottom up."""
    if isinstance(f, Var):
        return f
    if isinstance(f, Neg):
        return Neg(desugar_fusion(f.body))
    if isinstance(f, Fusion):
        return Neg(Imp(desugar_fusion(f.left), Neg(desugar_fusion(f.right))))
    cls = type(f)
    return cls(desugar_fusion(f.left), desugar_fusion(f.right))


def is_core(f: Formula) -> bool:
    """True when f contains no fusion node."""
    if isinstance(f, Var):
        return True
    if isinstance(f, Neg):
        return is_core(f.body)
    if isinstance(f, Fusion):
        return False
    return is_core(f.left) and is_core(f.right)


def variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Var):
        return frozenset((f.name,))
    if isinstance(f, Neg):
        return variables(f.body)
    return variables(f.left) | variables(f.right)


def shared_variables(a: Formula, b: Formula) -> frozenset[str]:
    return variables(a) & variables(b)


def substitute(f: Formula, mapping: dict[str, Formula]) -> Formula:
    """Uniformly replace variables by formulas (schema instantiation)."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, Neg):
        return Neg(substitute(f.body, mapping))
    cls = type(f)
    return cls(substitute(f.left, mapping), substitute(f.right, mapping))

