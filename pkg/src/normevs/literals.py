"""Text literals used by the CLI and JSON reports.

Norms: ``zero``, ``one``, ``sup``, ``sup(w=1,2)``, ``p(2)``, ``p(2; w=1,1,4)``,
``p(inf)``, ``scale(2, p(1))``, ``sum(p(1), sup)``.
Points: ``[1,2,3]`` (R^n), ``{1:1, 2:2}`` (c00), ``{[0,0],[1,0]}`` (finite
point set), ``(r; [a1,...,am])`` (cone point).
"""
from __future__ import annotations

import re

from .errors import InvalidP, ParseError
from .instances import ConePoint, FinitePointSet
from .norms import (
    ONE,
    SUP,
    ZERO,
    NormExpr,
    Scale,
    SparseVec,
    Sum,
    as_vec,
    fmt_num,
    format_norm,
    p_norm,
)

__all__ = [
    "format_norm",
    "parse_norm",
    "parse_vec",
    "format_vec",
    "parse_sparse",
    "format_sparse",
    "parse_pointset",
    "format_pointset",
    "parse_cone",
    "format_cone",
]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>[-+]?(?:inf|(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))|(?P<name>[A-Za-z_]\w*)|(?P<punct>[()\[\]{},;:=]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos} in {text!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def fail(self, what: str):
        tok = self.peek()
        found = "end of input" if tok is None else repr(tok[1])
        raise ParseError(f"expected {what}, found {found} in {self.text!r}")

    def take(self, value: str) -> None:
        tok = self.peek()
        if tok is None or tok[1] != value:
            self.fail(repr(value))
        self.i += 1

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[1] == value:
            self.i += 1
            return True
        return False

    def number(self) -> float:
        tok = self.peek()
        if tok is None or tok[0] != "num":
            self.fail("a number")
        self.i += 1
        return float(tok[1])

    def numbers(self, close: str) -> list[float]:
        vals = [self.number()]
        while self.accept(","):
            vals.append(self.number())
        self.take(close)
        return vals

    def done(self) -> None:
        if self.peek() is not None:
            self.fail("end of input")

    def weights(self) -> list[float]:
        self.take("w")
        self.take("=")
        return self.numbers(")")

    def norm(self) -> NormExpr:
        tok = self.peek()
        if tok is None or tok[0] != "name":
            self.fail("a norm")
        self.i += 1
        name = tok[1].lower()
        if name == "zero":
            return ZERO
        if name == "one":
            return ONE
        if name == "sup":
            if self.accept("("):
                return p_norm(float("inf"), self.weights())
            return SUP
        if name == "p":
            self.take("(")
            p = self.number()
            if self.accept(";"):
                return p_norm(p, self.weights())
            self.take(")")
            return p_norm(p)
        if name == "scale":
            self.take("(")
            alpha = self.number()
            self.take(",")
            child = self.norm()
            self.take(")")
            return Scale(alpha, child)
        if name == "sum":
            self.take("(")
            children = [self.norm()]
            while self.accept(","):
                children.append(self.norm())
            self.take(")")
            return Sum(tuple(children))
        raise ParseError(f"unknown norm {tok[1]!r} in {self.text!r}")


def parse_norm(text: str) -> NormExpr:
    """Parse a norm literal (not normalized)."""
    parser = _Parser(text)
    try:
        expr = parser.norm()
    except (InvalidP, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{exc} in {text!r}") from exc
    parser.done()
    return expr


def parse_vec(text: str):
    parser = _Parser(text)
    parser.take("[")
    vals = parser.numbers("]")
    parser.done()
    return as_vec(vals)


def format_vec(x) -> str:
    return "[" + ",".join(fmt_num(float(v)) for v in x) + "]"


def parse_sparse(text: str) -> SparseVec:
    parser = _Parser(text)
    parser.take("{")
    entries: dict[int, float] = {}
    if not parser.accept("}"):
        while True:
            idx = parser.number()
            if idx != int(idx) or idx < 1:
                raise ParseError(f"SparseVec index must be a positive integer in {text!r}")
            parser.take(":")
            entries[int(idx)] = parser.number()
            if parser.accept("}"):
                break
            parser.take(",")
    parser.done()
    return SparseVec.from_mapping(entries)


def format_sparse(x: SparseVec) -> str:
    return "{" + ", ".join(f"{i}:{fmt_num(v)}" for i, v in x.entries) + "}"


def parse_pointset(text: str) -> FinitePointSet:
    parser = _Parser(text)
    parser.take("{")
    points = []
    while True:
        parser.take("[")
        points.append(parser.numbers("]"))
        if parser.accept("}"):
            break
        parser.take(",")
    parser.done()
    return FinitePointSet.of(points)


def format_pointset(a: FinitePointSet) -> str:
    return "{" + ",".join(format_vec(p) for p in a.points) + "}"


def parse_cone(text: str) -> ConePoint:
    parser = _Parser(text)
    parser.take("(")
    r = parser.number()
    parser.take(";")
    parser.take("[")
    a = parser.numbers("]")
    parser.take(")")
    parser.done()
    return ConePoint(r, tuple(a))


def format_cone(x: ConePoint) -> str:
    return f"({fmt_num(x.r)}; {format_vec(x.a)})"
