"""Super vector fields, super differential forms, divergences, gradings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .superpoly import (
    ANY_DEGREE,
    INHOMOGENEOUS,
    Coords,
    CoordinateMismatch,
    SuperPoly,
    VarSpec,
    key_parity,
    key_weight,
    monomials_of_weight,
)


class ParityError(ValueError):
    """Raised when a sign-sensitive operation receives a mixed-parity field."""


class SuperVectorField:
    """``sum_i X^i(x) d/dx^i`` with at most one coefficient per direction."""

    __slots__ = ("coords", "comps")

    def __init__(self, coords: Coords, comps: Mapping | None = None):
        self.coords = coords
        self.comps = {}
        for d, c in (comps or {}).items():
            i = coords.index(d)
            if not isinstance(c, SuperPoly):
                c = SuperPoly.constant(coords, c)
            elif c.coords != coords:
                raise CoordinateMismatch("coefficient over a different coordinate system")
            if c:
                self.comps[i] = self.comps[i] + c if i in self.comps else c
        self.comps = {i: c for i, c in self.comps.items() if c}

    @classmethod
    def _raw(cls, coords, comps):
        x = cls.__new__(cls)
        x.coords = coords
        x.comps = comps
        return x

    @classmethod
    def partial(cls, coords: Coords, var) -> "SuperVectorField":
        return cls._raw(coords, {coords.index(var): coords.one()})

    # ---- linear structure ----------------------------------------------

    def __bool__(self):
        return bool(self.comps)

    def is_zero(self):
        return not self.comps

    def _check(self, other):
        if other.coords is not self.coords and other.coords != self.coords:
            raise CoordinateMismatch("fields live on different coordinate systems")

    def __add__(self, other):
        self._check(other)
        out = dict(self.comps)
        for i, c in other.comps.items():
            v = out[i] + c if i in out else c
            if v:
                out[i] = v
            else:
                out.pop(i, None)
        return SuperVectorField._raw(self.coords, out)

    def __neg__(self):
        return SuperVectorField._raw(self.coords, {i: -c for i, c in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SuperVectorField":
        c = Fraction(c)
        if not c:
            return SuperVectorField(self.coords)
        return SuperVectorField._raw(self.coords, {i: v.scale(c) for i, v in self.comps.items()})

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        if isinstance(c, SuperPoly):
            return self.lmul(c)
        return NotImplemented

    def lmul(self, f: SuperPoly) -> "SuperVectorField":
        """Left multiplication ``f * X``."""
        out = {}
        for i, c in self.comps.items():
            v = f * c
            if v:
                out[i] = v
        return SuperVectorField._raw(self.coords, out)

    def __eq__(self, other):
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        return self.coords == other.coords and self.comps == other.comps

    def __hash__(self):
        return hash((self.coords, frozenset((i, c) for i, c in self.comps.items())))

    def __repr__(self):
        return f"SuperVectorField({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    # ---- gradings -------------------------------------------------------

    def term_parities(self) -> set:
        ps = set()
        for i, c in self.comps.items():
            pd = self.coords.parities[i]
            for k in c.terms:
                ps.add((key_parity(k) + pd) & 1)
        return ps

    def parity(self):
        """0 or 1; None for the zero field; raises ParityError when mixed."""
        ps = self.term_parities()
        if not ps:
            return None
        if len(ps) > 1:
            raise ParityError("field has inhomogeneous parity")
        return ps.pop()

    def is_parity_homogeneous(self) -> bool:
        return len(self.term_parities()) <= 1

    def parity_part(self, p: int) -> "SuperVectorField":
        out = {}
        for i, c in self.comps.items():
            part = c.parity_part((p + self.coords.parities[i]) & 1)
            if part:
                out[i] = part
        return SuperVectorField._raw(self.coords, out)

    def weighted_degree(self):
        ds = set()
        for i, c in self.comps.items():
            w = self.coords.weights[i]
            for k in c.terms:
                ds.add(key_weight(self.coords, k) - w)
        if not ds:
            return ANY_DEGREE
        if len(ds) > 1:
            return INHOMOGENEOUS
        return ds.pop()

    def degree_part(self, d: int) -> "SuperVectorField":
        out = {}
        for i, c in self.comps.items():
            part = c.degree_part(d + self.coords.weights[i])
            if part:
                out[i] = part
        return SuperVectorField._raw(self.coords, out)

    # ---- action ---------------------------------------------------------

    def apply(self, f: SuperPoly) -> SuperPoly:
        """``X(f) = sum_i X^i * d_i f`` (left derivatives)."""
        out = SuperPoly(self.coords)
        for i, c in self.comps.items():
            df = f.partial(i)
            if df:
                out = out + c * df
        return out

    def items(self):
        return sorted(self.comps.items())

    def vector(self) -> dict:
        """Sparse coordinate vector keyed by ``(direction, monomial)``."""
        out = {}
        for i, c in self.comps.items():
            for k, v in c.terms.items():
                out[(i, k)] = v
        return out

    @classmethod
    def from_vector(cls, coords: Coords, vec: Mapping) -> "SuperVectorField":
        comps: dict = {}
        for (i, k), v in vec.items():
            if v:
                comps.setdefault(i, {})[k] = v
        return cls._raw(coords, {i: SuperPoly(coords, t) for i, t in comps.items() if t})

    def to_text(self) -> str:
        if not self.comps:
            return "0"
        parts = []
        for i, c in sorted(self.comps.items()):
            parts.append(f"({c.to_text()})*d[{self.coords.vars[i].name}]")
        return " + ".join(parts)

    def embed(self, target: Coords, mapping: Mapping[str, str] | None = None) -> "SuperVectorField":
        mapping = mapping or {}
        out = {}
        for i, c in self.comps.items():
            j = target.index(mapping.get(self.coords.vars[i].name, self.coords.vars[i].name))
            out[j] = c.embed(target, mapping)
        return SuperVectorField(target, out)


def _sign_parity(x):
    return 0 if x is None else x


def bracket(X: SuperVectorField, Y: SuperVectorField) -> SuperVectorField:
    """Super commutator ``[X, Y] = X o Y - (-1)^{|X||Y|} Y o X`` as a field."""
    X._check(Y)
    px, py = X.parity(), Y.parity()
    if px is None or py is None:
        return SuperVectorField(X.coords)
    sign = -1 if (px & py) else 1
    out: dict = {}
    for j in set(X.comps) | set(Y.comps):
        v = SuperPoly(X.coords)
        if j in Y.comps:
            v = v + X.apply(Y.comps[j])
        if j in X.comps:
            t = Y.apply(X.comps[j])
            v = v - t if sign == 1 else v + t
        if v:
            out[j] = v
    return SuperVectorField._raw(X.coords, out)


def supercommutator_on(X, Y, f: SuperPoly) -> SuperPoly:
    """Operator-level ``X(Y(f)) - (-1)^{|X||Y|} Y(X(f))``; oracle for :func:`bracket`."""
    px, py = _sign_parity(X.parity()), _sign_parity(Y.parity())
    a = X.apply(Y.apply(f))
    b = Y.apply(X.apply(f))
    return a + b if (px & py) else a - b


def jacobiator(X, Y, Z) -> SuperVectorField:
    """Signed cyclic sum ``(-1)^{|X||Z|}[X,[Y,Z]] + cyclic``; zero in any Lie superalgebra."""
    px, py, pz = (_sign_parity(v.parity()) for v in (X, Y, Z))
    t1 = bracket(X, bracket(Y, Z))
    t2 = bracket(Y, bracket(Z, X))
    t3 = bracket(Z, bracket(X, Y))
    out = t1.scale(-1 if px & pz else 1)
    out = out + t2.scale(-1 if py & px else 1)
    out = out + t3.scale(-1 if pz & py else 1)
    return out


def grading_operator(coords: Coords) -> SuperVectorField:
    """The weighted Euler field ``Z = sum_i w_i x^i d_i``."""
    comps = {i: coords.var(i).scale(w) for i, w in enumerate(coords.weights)}
    return SuperVectorField(coords, comps)


def divergence(X: SuperVectorField) -> SuperPoly:
    """``div X = sum_i (-1)^{p_i (|X| + 1)} d_i X^i``; zero iff X preserves vol."""
    px = _sign_parity(X.parity())
    out = SuperPoly(X.coords)
    for i, c in X.comps.items():
        d = c.partial(i)
        if X.coords.parities[i] and not px:
            d = -d
        out = out + d
    return out


def div_beta(f: SuperPoly, beta, n: int) -> SuperPoly:
    """Deformed divergence on generating functions over ``(tau, u^1..u^n, theta_1..theta_n)``.

    The overall sign uses the parity of the odd-contact field built from ``f``,
    which is opposite to the parity of ``f``.
    """
    c = f.coords
    if len(c) != 2 * n + 1:
        raise CoordinateMismatch(f"expected 2n+1 = {2 * n + 1} coordinates, got {len(c)}")
    pattern = [1] + [0] * n + [1] * n
    if list(c.parities) != pattern:
        raise CoordinateMismatch("coordinates must be (tau odd, u even x n, theta odd x n)")
    beta = Fraction(beta)
    tau = 0
    us = range(1, n + 1)
    ths = range(n + 1, 2 * n + 1)
    mixed = SuperPoly(c)
    for i, a in zip(us, ths):
        mixed = mixed + f.partial(a).partial(i)
    ft = f.partial(tau)
    euler = SuperPoly(c)
    for i in list(us) + list(ths):
        euler = euler + c.var(i) * ft.partial(i)
    euler = euler - ft.scale(n * beta)
    pf = f.parity_or_none()
    if f and pf is None:
        raise ParityError("div_beta needs a parity-homogeneous generating function")
    sign = 1 if (pf or 0) else -1
    return (mixed + euler).scale(2 * sign)


# ---------------------------------------------------------------------------
# differential forms
# ---------------------------------------------------------------------------


class Forms:
    """Super differential forms on ``coords``.

    Forms are polynomials over doubled coordinates ``x^i, dx^i`` where
    ``parity(dx) = parity(x) + 1``.  Then ``d = sum_i dx^i d/dx^i`` is an odd
    vector field and contraction ``i_X = sum_i X^i d/d(dx^i)`` has parity
    ``|X| + 1``; the Lie derivative is their supercommutator.
    """

    def __init__(self, coords: Coords, prefix: str = "d_"):
        self.base = coords
        self.prefix = prefix
        dvars = [VarSpec(prefix + v.name, 1 - v.parity, v.weight) for v in coords.vars]
        self.coords = Coords(list(coords.vars) + dvars)
        n = len(coords)
        self.n = n
        self.ext_d = SuperVectorField(self.coords, {i: self.coords.var(n + i) for i in range(n)})

    def lift(self, f: SuperPoly) -> SuperPoly:
        return f.embed(self.coords)

    def x(self, name) -> SuperPoly:
        return self.coords.var(self.base.vars[self.base.index(name)].name)

    def dx(self, name) -> SuperPoly:
        return self.coords.var(self.n + self.base.index(name))

    def d(self, omega: SuperPoly) -> SuperPoly:
        return self.ext_d.apply(omega)

    def contraction(self, X: SuperVectorField) -> SuperVectorField:
        comps = {self.n + i: self.lift(c) for i, c in X.comps.items()}
        return SuperVectorField(self.coords, comps)

    def contract(self, X: SuperVectorField, omega: SuperPoly) -> SuperPoly:
        return self.contraction(X).apply(omega)

    def lie_field(self, X: SuperVectorField) -> SuperVectorField:
        """``L_X = [i_X, d]`` as a vector field on the doubled coordinates."""
        if not X.is_parity_homogeneous():
            raise ParityError("Lie derivative needs a parity-homogeneous field")
        if not X:
            return SuperVectorField(self.coords)
        return bracket(self.contraction(X), self.ext_d)

    def lie_derivative(self, X: SuperVectorField, omega: SuperPoly) -> SuperPoly:
        return self.lie_field(X).apply(omega)

    def form_degree_part(self, omega: SuperPoly, k: int) -> SuperPoly:
        n = self.n
        terms = {}
        for key, c in omega.terms.items():
            exps, mask = key
            deg = sum(exps[n:]) + bin(mask >> n).count("1")
            if deg == k:
                terms[key] = c
        return SuperPoly(self.coords, terms)


def lie_derivative(X: SuperVectorField, omega: SuperPoly, forms: Forms) -> SuperPoly:
    return forms.lie_derivative(X, omega)


# ---------------------------------------------------------------------------
# graded spans
# ---------------------------------------------------------------------------


@dataclass
class GradedSpan:
    coords: Coords
    pieces: dict = field(default_factory=dict)

    @property
    def weights(self):
        return self.coords.weights

    @property
    def depth(self) -> int:
        neg = [k for k, v in self.pieces.items() if v and k < 0]
        return -min(neg) if neg else 0

    def degrees(self) -> list[int]:
        return sorted(self.pieces)

    def dims(self) -> dict:
        return {k: len(self.pieces[k]) for k in self.degrees()}

    def basis(self) -> list:
        out = []
        for k in self.degrees():
            out.extend(self.pieces[k])
        return out

    def nonpositive(self) -> "GradedSpan":
        return GradedSpan(self.coords, {k: list(v) for k, v in self.pieces.items() if k <= 0})

    def grading_errors(self) -> list:
        """Fields with ``[Z, X] != deg * X``."""
        Z = grading_operator(self.coords)
        bad = []
        for k in self.degrees():
            for X in self.pieces[k]:
                if bracket(Z, X) != X.scale(k):
                    bad.append((k, X))
        return bad


def homogeneous_monomial_fields(coords: Coords, k: int, parity: int | None = None) -> list:
    """All ``monomial * d_i`` of weighted degree ``k`` in a fixed order."""
    out = []
    for i, v in enumerate(coords.vars):
        want = None if parity is None else (parity + v.parity) & 1
        for key in monomials_of_weight(coords, k + v.weight, want):
            out.append(SuperVectorField._raw(coords, {i: SuperPoly._raw(coords, {key: Fraction(1)})}))
    return out


def fields_parity(fields: Iterable[SuperVectorField]) -> set:
    return {f.parity() for f in fields}
