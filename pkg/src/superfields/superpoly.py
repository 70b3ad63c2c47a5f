"""Exact polynomials in commuting and anticommuting variables.

A monomial is stored as ``(exps, mask)``: ``exps`` holds the exponents of
every variable in declaration order (always 0 for odd variables) and ``mask``
has bit ``i`` set when odd variable ``i`` is present.  The fermionic factor is
always kept in declaration order; reorderings are absorbed into the sign of
the coefficient.

Derivatives with respect to odd variables are *left* derivatives: the variable
is anticommuted to the front of the monomial and then deleted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

EVEN, ODD = 0, 1

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class CoordinateMismatch(ValueError):
    pass


@dataclass(frozen=True)
class VarSpec:
    name: str
    parity: int = EVEN
    weight: int = 1

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise ValueError(f"bad variable name {self.name!r}")
        if self.parity not in (EVEN, ODD):
            raise ValueError(f"parity must be 0 or 1, got {self.parity!r}")
        if self.weight < 1:
            raise ValueError(f"weight of {self.name} must be >= 1")


class Coords:
    """An ordered coordinate system of even and odd variables with weights."""

    __slots__ = ("vars", "_index", "parities", "weights", "odd_mask", "_hash")

    def __init__(self, variables: Iterable[VarSpec]):
        self.vars = tuple(variables)
        self._index = {}
        for i, v in enumerate(self.vars):
            if v.name in self._index:
                raise ValueError(f"duplicate variable name {v.name!r}")
            self._index[v.name] = i
        self.parities = tuple(v.parity for v in self.vars)
        self.weights = tuple(v.weight for v in self.vars)
        self.odd_mask = sum(1 << i for i, p in enumerate(self.parities) if p)
        self._hash = hash(self.vars)

    @classmethod
    def build(cls, spec: Iterable[tuple]) -> "Coords":
        """``Coords.build([("u", 0, 2), ("th", 1, 1)])``; weight defaults to 1."""
        out = []
        for item in spec:
            if isinstance(item, VarSpec):
                out.append(item)
            else:
                out.append(VarSpec(*item))
        return cls(out)

    def __len__(self):
        return len(self.vars)

    def __iter__(self):
        return iter(self.vars)

    def __eq__(self, other):
        return self is other or (isinstance(other, Coords) and self.vars == other.vars)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{v.name}:{'odd' if v.parity else 'even'}:{v.weight}" for v in self.vars)
        return f"Coords({inner})"

    def index(self, name: str | int) -> int:
        if isinstance(name, int):
            return name
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no variable {name!r} in {self!r}") from None

    def names(self) -> list[str]:
        return [v.name for v in self.vars]

    def var(self, name: str | int) -> "SuperPoly":
        i = self.index(name)
        return SuperPoly.monomial(self, _unit_key(self, i))

    def one(self) -> "SuperPoly":
        return SuperPoly.constant(self, 1)

    def zero(self) -> "SuperPoly":
        return SuperPoly(self)

    @property
    def depth(self) -> int:
        return max(self.weights) if self.weights else 0


def _unit_key(coords: Coords, i: int):
    n = len(coords)
    if coords.parities[i]:
        return ((0,) * n, 1 << i)
    exps = [0] * n
    exps[i] = 1
    return (tuple(exps), 0)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def merge_sign(a: int, b: int) -> int:
    """Sign of reordering theta_A * theta_B into canonical order (A, B disjoint)."""
    s = 0
    while b:
        low = b & -b
        j = low.bit_length() - 1
        s += _popcount(a >> (j + 1))
        b ^= low
    return -1 if s & 1 else 1


def key_parity(key) -> int:
    return _popcount(key[1]) & 1


def key_weight(coords: Coords, key) -> int:
    exps, mask = key
    w = 0
    for i, e in enumerate(exps):
        if e:
            w += e * coords.weights[i]
    m = mask
    while m:
        low = m & -m
        w += coords.weights[low.bit_length() - 1]
        m ^= low
    return w


def key_exponents(coords: Coords, key) -> tuple[int, ...]:
    """Full exponent vector, odd variables contributing 0 or 1."""
    exps, mask = key
    return tuple((mask >> i) & 1 if coords.parities[i] else exps[i] for i in range(len(coords)))


def key_from_exponents(coords: Coords, full: Iterable[int]):
    full = tuple(full)
    mask = 0
    exps = []
    for i, e in enumerate(full):
        if coords.parities[i]:
            if e not in (0, 1):
                raise ValueError("odd variables square to zero")
            mask |= e << i
            exps.append(0)
        else:
            exps.append(e)
    return (tuple(exps), mask)


def _sort_key(coords: Coords, key):
    full = key_exponents(coords, key)
    return (key_weight(coords, key), sum(full), tuple(-e for e in full))


class SuperPoly:
    """Polynomial with exact rational coefficients over a :class:`Coords`."""

    __slots__ = ("coords", "terms")

    def __init__(self, coords: Coords, terms: Mapping | None = None):
        self.coords = coords
        if terms:
            self.terms = {k: Fraction(c) for k, c in terms.items() if c}
        else:
            self.terms = {}

    @classmethod
    def _raw(cls, coords, terms):
        p = cls.__new__(cls)
        p.coords = coords
        p.terms = terms
        return p

    @classmethod
    def constant(cls, coords: Coords, c) -> "SuperPoly":
        c = Fraction(c)
        if not c:
            return cls(coords)
        return cls._raw(coords, {((0,) * len(coords), 0): c})

    @classmethod
    def monomial(cls, coords: Coords, key, c=1) -> "SuperPoly":
        return cls._raw(coords, {key: Fraction(c)}) if c else cls(coords)

    # ---- basic protocol -------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, SuperPoly):
            return self.coords == other.coords and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == SuperPoly.constant(self.coords, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.coords, frozenset(self.terms.items())))

    def __repr__(self):
        return f"SuperPoly({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def copy(self) -> "SuperPoly":
        return SuperPoly._raw(self.coords, dict(self.terms))

    def _check(self, other: "SuperPoly"):
        if other.coords is not self.coords and other.coords != self.coords:
            raise CoordinateMismatch("operands live on different coordinate systems")

    def _coerce(self, other) -> "SuperPoly":
        if isinstance(other, SuperPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return SuperPoly.constant(self.coords, other)
        raise TypeError(f"cannot combine SuperPoly with {type(other).__name__}")

    # ---- arithmetic -----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return SuperPoly._raw(self.coords, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperPoly._raw(self.coords, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "SuperPoly":
        c = Fraction(c)
        if not c:
            return SuperPoly(self.coords)
        return SuperPoly._raw(self.coords, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: dict = {}
        for (ea, ma), ca in self.terms.items():
            for (eb, mb), cb in other.terms.items():
                if ma & mb:
                    continue
                c = ca * cb
                if ma and mb and merge_sign(ma, mb) < 0:
                    c = -c
                key = (tuple(x + y for x, y in zip(ea, eb)), ma | mb)
                v = out.get(key, 0) + c
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return SuperPoly._raw(self.coords, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = self.coords.one()
        for _ in range(n):
            out = out * self
        return out

    # ---- calculus -------------------------------------------------------

    def partial(self, var) -> "SuperPoly":
        """Left derivative with respect to ``var`` (name, index or VarSpec)."""
        if isinstance(var, VarSpec):
            var = var.name
        i = self.coords.index(var)
        out: dict = {}
        if self.coords.parities[i]:
            bit = 1 << i
            below = bit - 1
            for (e, m), c in self.terms.items():
                if not m & bit:
                    continue
                if _popcount(m & below) & 1:
                    c = -c
                key = (e, m ^ bit)
                out[key] = out.get(key, 0) + c
        else:
            for (e, m), c in self.terms.items():
                k = e[i]
                if not k:
                    continue
                ne = e[:i] + (k - 1,) + e[i + 1:]
                key = (ne, m)
                out[key] = out.get(key, 0) + c * k
        return SuperPoly._raw(self.coords, {k: v for k, v in out.items() if v})

    # ---- gradings -------------------------------------------------------

    def parity(self):
        """0, 1, or None for the zero polynomial; raises on mixed parity."""
        ps = {key_parity(k) for k in self.terms}
        if not ps:
            return None
        if len(ps) > 1:
            raise ValueError("polynomial has inhomogeneous parity")
        return ps.pop()

    def parity_or_none(self):
        ps = {key_parity(k) for k in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def is_parity_homogeneous(self) -> bool:
        return len({key_parity(k) for k in self.terms}) <= 1

    def parity_part(self, p: int) -> "SuperPoly":
        return SuperPoly._raw(self.coords, {k: c for k, c in self.terms.items() if key_parity(k) == p})

    def weighted_degree(self):
        """Weighted degree, ``ANY_DEGREE`` for zero, ``INHOMOGENEOUS`` otherwise."""
        if not self.terms:
            return ANY_DEGREE
        ds = {key_weight(self.coords, k) for k in self.terms}
        if len(ds) > 1:
            return INHOMOGENEOUS
        return ds.pop()

    def degree_part(self, d: int) -> "SuperPoly":
        return SuperPoly._raw(self.coords, {k: c for k, c in self.terms.items() if key_weight(self.coords, k) == d})

    def constant_term(self) -> Fraction:
        return self.terms.get(((0,) * len(self.coords), 0), Fraction(0))

    def is_constant(self) -> bool:
        z = ((0,) * len(self.coords), 0)
        return all(k == z for k in self.terms)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kc: _sort_key(self.coords, kc[0]))

    def __iter__(self) -> Iterator:
        return iter(self.sorted_terms())

    # ---- substitutions --------------------------------------------------

    def embed(self, target: Coords, mapping: Mapping[str, str] | None = None) -> "SuperPoly":
        """Re-express over ``target`` by variable name (optionally renamed)."""
        mapping = mapping or {}
        idx = [target.index(mapping.get(v.name, v.name)) for v in self.coords.vars]
        for i, j in enumerate(idx):
            if self.coords.parities[i] != target.parities[j]:
                raise CoordinateMismatch(f"parity of {self.coords.vars[i].name} differs in target")
        out = SuperPoly(target)
        for key, c in self.terms.items():
            term = SuperPoly.constant(target, c)
            full = key_exponents(self.coords, key)
            # odd variables re-multiplied in source order keep the source sign
            for i, e in enumerate(full):
                if e:
                    term = term * (SuperPoly.monomial(target, _unit_key(target, idx[i])) ** e)
            out = out + term
        return out

    def substitute(self, values: Mapping[str, "SuperPoly"]) -> "SuperPoly":
        """Replace variables by polynomials over ``values``' common coordinates.

        Odd variables may only be replaced by odd polynomials; products are
        rebuilt left to right in canonical order so signs stay consistent.
        """
        targets = {self.coords.index(k): v for k, v in values.items()}
        if not targets:
            return self.copy()
        tc = next(iter(targets.values())).coords
        out = SuperPoly(tc)
        for key, c in self.terms.items():
            term = SuperPoly.constant(tc, c)
            full = key_exponents(self.coords, key)
            for i, e in enumerate(full):
                if not e:
                    continue
                if i in targets:
                    base = targets[i]
                else:
                    base = tc.var(self.coords.vars[i].name)
                term = term * (base ** e)
            out = out + term
        return out

    # ---- text -----------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.sorted_terms():
            mono = _mono_text(self.coords, key)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{_frac_text(a)}*{mono}"
            else:
                body = _frac_text(a)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _frac_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mono_text(coords: Coords, key) -> str:
    bits = []
    for i, e in enumerate(key_exponents(coords, key)):
        if e == 1:
            bits.append(coords.vars[i].name)
        elif e > 1:
            bits.append(f"{coords.vars[i].name}^{e}")
    return "*".join(bits)


class _Marker:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


ANY_DEGREE = _Marker("ANY_DEGREE")
INHOMOGENEOUS = _Marker("INHOMOGENEOUS")


def monomials_of_weight(coords: Coords, d: int, parity: int | None = None) -> list:
    """All monomial keys of weighted degree ``d`` (optionally of one parity)."""
    n = len(coords)
    if d < 0:
        return []
    out = []
    ws = coords.weights
    ps = coords.parities

    def rec(i, remaining, exps, mask):
        if i == n:
            if remaining == 0:
                out.append((tuple(exps), mask))
            return
        w = ws[i]
        if ps[i]:
            rec(i + 1, remaining, exps + [0], mask)
            if w <= remaining:
                rec(i + 1, remaining - w, exps + [0], mask | (1 << i))
        else:
            for e in range(remaining // w + 1):
                rec(i + 1, remaining - e * w, exps + [e], mask)

    rec(0, d, [], 0)
    if parity is not None:
        out = [k for k in out if key_parity(k) == parity]
    out.sort(key=lambda k: _sort_key(coords, k))
    return out
