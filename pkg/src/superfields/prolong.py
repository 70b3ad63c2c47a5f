"""Weisfeiler-graded Cartan prolongation, computed two independent ways.

``prolong_recursive`` builds ``g_k`` degree by degree as the fields whose
brackets with the negative part land in lower pieces.  ``preserver_solve``
instead finds every homogeneous field preserving a list of geometric
structures, together with the multiplier certificates.  ``cross_check``
compares the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .superpoly import ANY_DEGREE, INHOMOGENEOUS, Coords, SuperPoly, monomials_of_weight
from .svf import (
    Forms,
    GradedSpan,
    ParityError,
    SuperVectorField,
    bracket,
    div_beta,
    divergence,
    grading_operator,
    homogeneous_monomial_fields,
)


class ProlongError(ValueError):
    """Input data for a prolongation is not a graded subalgebra."""


VOLUME = "volume-form"
PFAFF = "even-pfaff-system"
CONTACT = "contact-pfaff"
DUAL = "dual-pfaff-system"
INVARIANT = "invariant-form"
DEFORMED_DIV = "deformed-divergence"

KINDS = (VOLUME, PFAFF, CONTACT, DUAL, INVARIANT, DEFORMED_DIV)


@dataclass
class StructureSpec:
    """A structure a field may preserve.

    ``forms`` holds 1-forms (Pfaff kinds) or one form (invariant-form) over
    ``forms_ctx.coords``; ``fields`` holds the dual system for ``DUAL``.
    ``DEFORMED_DIV`` uses ``forms[0]`` as the contact form, ``beta`` and ``n``.
    """

    kind: str
    forms: list = field(default_factory=list)
    fields: list = field(default_factory=list)
    forms_ctx: Forms | None = None
    beta: Fraction | None = None
    n: int | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown structure kind {self.kind!r}")
        if self.kind in (PFAFF, CONTACT, INVARIANT, DEFORMED_DIV) and (not self.forms or self.forms_ctx is None):
            raise ValueError(f"{self.kind} needs forms and a Forms context")
        if self.kind == DUAL and not self.fields:
            raise ValueError("dual-pfaff-system needs fields")

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.label:
            out["label"] = self.label
        if self.forms:
            out["forms"] = [f.to_text() for f in self.forms]
        if self.fields:
            out["fields"] = [f.to_text() for f in self.fields]
        if self.beta is not None:
            out["beta"] = _q(self.beta)
        return out


def _q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class Certificate:
    """Multipliers ``f`` witnessing preservation of one structure by one field."""

    kind: str
    multipliers: dict  # (i, j) -> SuperPoly
    residual_zero: bool

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "residual_zero": self.residual_zero,
            "multipliers": {f"{i},{j}": p.to_text() for (i, j), p in sorted(self.multipliers.items())},
        }


@dataclass
class ProlongResult:
    span: GradedSpan
    dims: dict
    method: str
    certificates: dict = field(default_factory=dict)

    def describe(self) -> dict:
        return {"method": self.method, "dims": {str(k): v for k, v in sorted(self.dims.items())}}


# ---------------------------------------------------------------------------
# homogeneous pieces
# ---------------------------------------------------------------------------


def homogeneous_fields(k: int, coords: Coords, parity: int | None = None) -> list[SuperVectorField]:
    """Basis of all monomial fields of weighted degree ``k``."""
    if k < -coords.depth:
        return []
    return homogeneous_monomial_fields(coords, k, parity)


def vect_dim_oracle(n: int, k: int) -> int:
    """Brute-force count of degree-k fields in vect(n): n * #monomials of degree k+1."""
    from itertools import product

    if k + 1 < 0:
        return 0
    count = sum(1 for e in product(range(k + 2), repeat=n) if sum(e) == k + 1)
    return n * count


def _field_from_combo(cands: Sequence[SuperVectorField], combo: dict) -> SuperVectorField:
    coords = cands[0].coords
    vec: dict = {}
    for j, c in combo.items():
        linalg.axpy(vec, c, cands[j].vector())
    return SuperVectorField.from_vector(coords, vec)


def _solve_combos(n_cands: int, images: dict, aux: dict | None = None) -> list[dict]:
    """Nullspace of ``c -> sum_j c_j images[j] + sum_t a_t aux[t]`` projected to c.

    Returns a reduced echelon basis keyed by candidate index.
    """
    aux = aux or {}
    unknowns = [("c", j) for j in range(n_cands)] + [("a", t) for t in aux]
    rows: dict = {}
    for j in range(n_cands):
        for col, v in images[j].items():
            rows.setdefault(col, {})[("c", j)] = v
    for t, img in aux.items():
        for col, v in img.items():
            rows.setdefault(col, {})[("a", t)] = v
    # aux unknowns first so that elimination expresses them through c
    order = [("a", t) for t in aux] + [("c", j) for j in range(n_cands)]
    null = linalg.nullspace(rows.values(), order)
    proj = linalg.Echelon(order=lambda j: j)
    for vec in null:
        p = {j: v for (tag, j), v in vec.items() if tag == "c"}
        if p:
            proj.add(p)
    return [proj.rows[p] for p in sorted(proj.rows)]


# ---------------------------------------------------------------------------
# recursive definition
# ---------------------------------------------------------------------------


def _echelon_of(fields) -> linalg.Echelon:
    e = linalg.Echelon()
    for f in fields:
        e.add(f.vector())
    return e


def closure_errors(span: GradedSpan, degrees=None) -> list:
    """Pairs violating ``[g_i, g_j] in g_{i+j}`` (beyond the computed range only zero counts)."""
    degs = span.degrees() if degrees is None else degrees
    lo = -span.depth
    hi = max(span.degrees()) if span.degrees() else 0
    ech = {k: _echelon_of(span.pieces[k]) for k in span.degrees()}
    bad = []
    for a, i in enumerate(degs):
        for j in degs[a:]:
            s = i + j
            if s > hi:
                continue
            for X in span.pieces.get(i, []):
                for Y in span.pieces.get(j, []):
                    B = bracket(X, Y)
                    if not B:
                        continue
                    if s < lo or s not in ech or not ech[s].contains(B.vector()):
                        bad.append((i, j, X, Y, B))
    return bad


def check_nonpositive(g_neg: GradedSpan, g0: Sequence[SuperVectorField]) -> GradedSpan:
    span = GradedSpan(g_neg.coords, {k: list(v) for k, v in g_neg.pieces.items() if k < 0})
    span.pieces[0] = list(g0)
    bad = span.grading_errors()
    if bad:
        k, X = bad[0]
        raise ProlongError(f"field {X.to_text()} is not homogeneous of degree {k}")
    for k in span.degrees():
        for X in span.pieces[k]:
            X.parity()
    errs = closure_errors(span)
    if errs:
        i, j, X, Y, B = errs[0]
        raise ProlongError(f"[{X.to_text()}, {Y.to_text()}] = {B.to_text()} is not in g_{i + j}")
    return span


def _prolong_step(span: GradedSpan, k: int, echs: dict) -> list[SuperVectorField]:
    coords = span.coords
    out = []
    neg = [j for j in span.degrees() if j < 0]
    for parity in (0, 1):
        cands = homogeneous_fields(k, coords, parity)
        if not cands:
            continue
        images = {j: {} for j in range(len(cands))}
        for j_deg in neg:
            target = echs.get(k + j_deg)
            for yi, Y in enumerate(span.pieces[j_deg]):
                for ci, b in enumerate(cands):
                    B = bracket(b, Y)
                    if not B:
                        continue
                    r = B.vector() if target is None else target.reduce(B.vector())
                    for col, v in r.items():
                        images[ci][(j_deg, yi, col)] = v
        for combo in _solve_combos(len(cands), images):
            out.append(_field_from_combo(cands, combo))
    return out


def prolong_recursive(g_neg: GradedSpan, g0: Sequence[SuperVectorField], kmax: int) -> ProlongResult:
    """``g_k = {X of degree k : [X, g_j] in g_{k+j} for every negative j}``, k = 1..kmax."""
    span = check_nonpositive(g_neg, g0)
    echs = {k: _echelon_of(span.pieces[k]) for k in span.degrees()}
    for k in range(1, kmax + 1):
        gk = _prolong_step(span, k, echs)
        span.pieces[k] = gk
        echs[k] = _echelon_of(gk)
    return ProlongResult(span=span, dims=span.dims(), method="recursion")


def normalizer_degree0(g_neg: GradedSpan) -> list[SuperVectorField]:
    """Degree-0 fields ``X`` with ``[X, g_j] in g_j`` for every negative ``j``."""
    span = GradedSpan(g_neg.coords, {k: list(v) for k, v in g_neg.pieces.items() if k < 0})
    echs = {k: _echelon_of(span.pieces[k]) for k in span.degrees()}
    return _prolong_step(span, 0, echs)


def generated_by_minus_one(g_neg: GradedSpan) -> bool:
    """Whether iterated brackets of ``g_{-1}`` span the whole negative part."""
    lows = {-1: list(g_neg.pieces.get(-1, []))}
    for d in range(2, g_neg.depth + 1):
        lows[-d] = [bracket(X, Y) for X in lows[-1] for Y in lows[-(d - 1)]]
    for d, fields in lows.items():
        have = _echelon_of(f for f in fields if f)
        want = g_neg.pieces.get(d, [])
        if have.rank != len(want) or not all(have.contains(f.vector()) for f in want):
            return False
    return True


# ---------------------------------------------------------------------------
# structure-preserver definition
# ---------------------------------------------------------------------------


def _form_weight(forms: Forms, omega: SuperPoly) -> int:
    d = omega.weighted_degree()
    if d is ANY_DEGREE or d is INHOMOGENEOUS:
        raise ValueError(f"structure form {omega.to_text()} is not homogeneous")
    return d


def _tag(col, *prefix):
    return prefix + (col,)


def _structure_images(s: StructureSpec, sidx: int, X: SuperVectorField) -> dict:
    """Image of X under the linear constraint map of one structure (without multipliers)."""
    out: dict = {}
    if s.kind == VOLUME:
        for key, v in divergence(X).terms.items():
            out[(sidx, "vol", key)] = v
    elif s.kind in (PFAFF, CONTACT, INVARIANT):
        L = s.forms_ctx.lie_field(X)
        for i, a in enumerate(s.forms):
            for key, v in L.apply(a).terms.items():
                out[(sidx, i, key)] = v
    elif s.kind == DUAL:
        for i, D in enumerate(s.fields):
            for col, v in bracket(D, X).vector().items():
                out[(sidx, i, col)] = v
    elif s.kind == DEFORMED_DIV:
        f = generating_function(s, X)
        f_base = _restrict_to_base(s.forms_ctx, f)
        for key, v in div_beta(f_base, s.beta, s.n).terms.items():
            out[(sidx, "divb", key)] = v
    return out


def generating_function(s: StructureSpec, X: SuperVectorField) -> SuperPoly:
    """``i_X alpha`` for the contact form of ``s``."""
    return s.forms_ctx.contract(X, s.forms[0])


def _restrict_to_base(forms: Forms, f: SuperPoly) -> SuperPoly:
    n = forms.n
    terms = {}
    for (e, m), c in f.terms.items():
        if any(e[n:]) or (m >> n):
            raise ValueError("generating function still contains differentials")
        terms[(e[:n], m)] = c
    return SuperPoly(forms.base, terms)


def _multiplier_slots(s: StructureSpec, sidx: int, k: int, parity: int) -> dict:
    """Auxiliary unknowns ``f^i_j * m`` with their (negated) images."""
    aux: dict = {}
    if s.kind in (PFAFF, CONTACT):
        fc = s.forms_ctx
        base = fc.base
        ws = [_form_weight(fc, a) for a in s.forms]
        ps = [a.parity() for a in s.forms]
        for i in range(len(s.forms)):
            for j, aj in enumerate(s.forms):
                d = k + ws[i] - ws[j]
                fp = (parity + ps[i] + ps[j]) & 1
                for key in monomials_of_weight(base, d, fp):
                    m = SuperPoly.monomial(base, key)
                    prod = fc.lift(m) * aj
                    aux[(sidx, i, j, key)] = {(sidx, i, col): -v for col, v in prod.terms.items()}
    elif s.kind == DUAL:
        base = s.fields[0].coords
        ws = [D.weighted_degree() for D in s.fields]
        ps = [D.parity() for D in s.fields]
        for i in range(len(s.fields)):
            for j, Dj in enumerate(s.fields):
                d = k + ws[i] - ws[j]
                fp = (parity + ps[i] + ps[j]) & 1
                for key in monomials_of_weight(base, d, fp):
                    m = SuperPoly.monomial(base, key)
                    prod = Dj.lmul(m)
                    aux[(sidx, i, j, key)] = {(sidx, i, col): -v for col, v in prod.vector().items()}
    return aux


def preserver_solve(structures, coords: Coords, k: int) -> list[SuperVectorField]:
    """Basis of degree-k fields preserving every structure in ``structures``."""
    if isinstance(structures, StructureSpec):
        structures = [structures]
    out = []
    for parity in (0, 1):
        cands = homogeneous_fields(k, coords, parity)
        if not cands:
            continue
        images = {j: {} for j in range(len(cands))}
        aux: dict = {}
        for sidx, s in enumerate(structures):
            for j, b in enumerate(cands):
                images[j].update(_structure_images(s, sidx, b))
            aux.update(_multiplier_slots(s, sidx, k, parity))
        for combo in _solve_combos(len(cands), images, aux):
            out.append(_field_from_combo(cands, combo))
    return out


def certify(s: StructureSpec, X: SuperVectorField) -> Certificate:
    """Find multipliers for one field and verify them by direct substitution."""
    if s.kind in (VOLUME, INVARIANT, DEFORMED_DIV):
        imgs = _structure_images(s, 0, X)
        return Certificate(s.kind, {}, not imgs)
    k = X.weighted_degree()
    if k is ANY_DEGREE:
        return Certificate(s.kind, {}, True)
    if k is INHOMOGENEOUS:
        raise ValueError("certificates need a homogeneous field")
    parity = X.parity()
    target = _structure_images(s, 0, X)
    aux = _multiplier_slots(s, 0, k, parity)
    names = list(aux)
    rows: dict = {}
    for t in names:
        for col, v in aux[t].items():
            rows.setdefault(col, {})[t] = v
    cols = set(rows) | set(target)
    eqs = [(rows.get(col, {}), -target.get(col, 0)) for col in sorted(cols, key=repr)]
    sol = linalg.solve(eqs, names)
    if sol is None:
        return Certificate(s.kind, {}, False)
    mult: dict = {}
    for (sidx, i, j, key), v in sol.items():
        base = s.forms_ctx.base if s.forms else s.fields[0].coords
        mult[(i, j)] = mult.get((i, j), SuperPoly(base)) + SuperPoly.monomial(base, key, v)
    return Certificate(s.kind, mult, _residual_zero(s, X, mult))


def _residual_zero(s: StructureSpec, X: SuperVectorField, mult: dict) -> bool:
    if s.kind in (PFAFF, CONTACT):
        fc = s.forms_ctx
        for i, a in enumerate(s.forms):
            r = fc.lie_derivative(X, a)
            for j, b in enumerate(s.forms):
                if (i, j) in mult:
                    r = r - fc.lift(mult[(i, j)]) * b
            if r:
                return False
        return True
    if s.kind == DUAL:
        for i, D in enumerate(s.fields):
            r = bracket(D, X)
            for j, Dj in enumerate(s.fields):
                if (i, j) in mult:
                    r = r - Dj.lmul(mult[(i, j)])
            if r:
                return False
        return True
    raise ValueError(s.kind)


def prolong_preserver(structures, coords: Coords, kmax: int, kmin: int | None = None) -> ProlongResult:
    kmin = -coords.depth if kmin is None else kmin
    span = GradedSpan(coords, {})
    for k in range(kmin, kmax + 1):
        span.pieces[k] = preserver_solve(structures, coords, k)
    return ProlongResult(span=span, dims=span.dims(), method="preserver")


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------


@dataclass
class CrossCheckReport:
    equal: bool
    dims_a: dict
    dims_b: dict
    mismatched_degrees: list

    def describe(self) -> dict:
        return {
            "equal": self.equal,
            "dims": {str(k): [self.dims_a.get(k, 0), self.dims_b.get(k, 0)] for k in sorted(set(self.dims_a) | set(self.dims_b))},
            "mismatched_degrees": self.mismatched_degrees,
        }


def cross_check(a: ProlongResult, b: ProlongResult, degrees=None) -> CrossCheckReport:
    degs = sorted(set(a.span.degrees()) & set(b.span.degrees())) if degrees is None else list(degrees)
    bad = []
    for k in degs:
        va = [f.vector() for f in a.span.pieces.get(k, [])]
        vb = [f.vector() for f in b.span.pieces.get(k, [])]
        if not linalg.same_span(va, vb):
            bad.append(k)
    dims_a = {k: len(a.span.pieces.get(k, [])) for k in degs}
    dims_b = {k: len(b.span.pieces.get(k, [])) for k in degs}
    return CrossCheckReport(not bad, dims_a, dims_b, bad)


def in_span(fields: Sequence[SuperVectorField], X: SuperVectorField) -> bool:
    return _echelon_of(fields).contains(X.vector())


def grading_ok(span: GradedSpan) -> bool:
    return not span.grading_errors()


__all__ = [
    "CONTACT",
    "DEFORMED_DIV",
    "DUAL",
    "INVARIANT",
    "PFAFF",
    "VOLUME",
    "Certificate",
    "CrossCheckReport",
    "ProlongError",
    "ProlongResult",
    "StructureSpec",
    "certify",
    "check_nonpositive",
    "closure_errors",
    "cross_check",
    "generated_by_minus_one",
    "homogeneous_fields",
    "normalizer_degree0",
    "preserver_solve",
    "prolong_preserver",
    "prolong_recursive",
    "vect_dim_oracle",
]
