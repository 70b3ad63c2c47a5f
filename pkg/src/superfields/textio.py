"""Parsing polynomials and vector fields from the text the library prints.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := ['-'] factor ('*' factor)*
    factor := atom ['^' int]
    atom   := number | name | 'd[' name ']' | '(' expr ')'

``d[name]`` is the partial derivative along ``name``; it may only be the
last factor of a term.  Odd variables multiply in the order written.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .superpoly import Coords, SuperPoly
from .svf import SuperVectorField


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(d\[[A-Za-z_][\w]*\])|([A-Za-z_][\w]*)|(\^)|([-+*()]))")


def _tokens(text: str) -> list:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:pos + 12]!r}")
        num, der, name, hat, op = m.groups()
        if num:
            out.append(("num", Fraction(num)))
        elif der:
            out.append(("d", der[2:-1]))
        elif name:
            out.append(("name", name))
        elif hat:
            out.append(("op", "^"))
        else:
            out.append(("op", op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, coords: Coords):
        self.toks = _tokens(text)
        self.i = 0
        self.C = coords

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        t = self.peek()
        if t[0] is None or (kind and t[0] != kind) or (val and t[1] != val):
            raise ParseError(f"expected {val or kind}, got {t[1]!r}")
        self.i += 1
        return t

    def parse(self):
        v = self.expr()
        if self.peek()[0] is not None:
            raise ParseError(f"trailing input {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            v = _add(v, w if op == "+" else _neg(w))
        return v

    def term(self):
        neg = False
        while self.peek() in (("op", "-"), ("op", "+")):
            neg ^= self.take()[1] == "-"
        v = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            w = self.factor()
            if isinstance(v, SuperVectorField):
                raise ParseError("d[...] must be the last factor of a term")
            v = w.lmul(v) if isinstance(w, SuperVectorField) else v * w
        return _neg(v) if neg else v

    def factor(self):
        v = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            k = self.take("num")[1]
            if k.denominator != 1 or isinstance(v, SuperVectorField):
                raise ParseError("exponents must be integers on polynomials")
            v = v ** int(k)
        return v

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return SuperPoly.constant(self.C, val)
        if kind == "name":
            self.take()
            try:
                return self.C.var(val)
            except (KeyError, ValueError) as exc:
                raise ParseError(f"unknown variable {val!r}") from exc
        if kind == "d":
            self.take()
            try:
                return SuperVectorField.partial(self.C, val)
            except (KeyError, ValueError) as exc:
                raise ParseError(f"unknown variable {val!r}") from exc
        if (kind, val) == ("op", "("):
            self.take()
            v = self.expr()
            self.take("op", ")")
            return v
        raise ParseError(f"unexpected {val!r}")


def _add(a, b):
    if type(a) is not type(b):
        raise ParseError("cannot add a polynomial and a vector field")
    return a + b


def _neg(a):
    return a.scale(-1)


def parse_poly(text: str, coords: Coords) -> SuperPoly:
    v = _Parser(text, coords).parse()
    if not isinstance(v, SuperPoly):
        raise ParseError("expected a polynomial")
    return v


def parse_field(text: str, coords: Coords) -> SuperVectorField:
    v = _Parser(text, coords).parse()
    if not isinstance(v, SuperVectorField):
        raise ParseError("expected a vector field (terms ending in d[var])")
    return v


def parse_vars(spec: str) -> Coords:
    """``"u1 u2:2 | th1 th2"``: even names before ``|``, odd after; ``:w`` sets weight."""
    even, _, odd = spec.partition("|")
    out = []
    for parity, chunk in ((0, even), (1, odd)):
        for item in chunk.replace(",", " ").split():
            name, _, w = item.partition(":")
            if not re.fullmatch(r"[A-Za-z_]\w*", name):
                raise ParseError(f"bad variable name {name!r}")
            try:
                weight = int(w) if w else 1
            except ValueError as exc:
                raise ParseError(f"bad weight in {item!r}") from exc
            out.append((name, parity, weight))
    if not out:
        raise ParseError("no variables given")
    try:
        return Coords.build(out)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
