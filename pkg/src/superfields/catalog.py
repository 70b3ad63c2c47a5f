"""Constructors and verifiers for the simple vector-field superalgebras.

Series are described by the structures they preserve and their non-positive
parts are solved for.  ``mb(3|8)`` is built from explicit generators; the
index conventions for its raised indices are fixed by searching a small set
of candidates and keeping the first one that passes every check.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import linalg
from .prolong import (
    CONTACT,
    DEFORMED_DIV,
    DUAL,
    INVARIANT,
    PFAFF,
    VOLUME,
    StructureSpec,
    certify,
    closure_errors,
    prolong_preserver,
    prolong_recursive,
    preserver_solve,
)
from .superpoly import EVEN, ODD, Coords, VarSpec
from .svf import Forms, GradedSpan, SuperVectorField, bracket, grading_operator, jacobiator


class OutOfScope(ValueError):
    pass


class UnknownAlgebra(ValueError):
    pass


def levi_civita(*idx: int) -> int:
    """Sign of the permutation ``idx`` of ``0..n-1``; 0 on repeats."""
    if len(set(idx)) != len(idx):
        return 0
    sign = 1
    p = list(idx)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# names
# ---------------------------------------------------------------------------

_OUT = re.compile(r"^(kas|vas|~|tilde|t?sle~|sle~|sm~|tsle|tsm)", re.I)
_PAT_NM = re.compile(r"^(vect|svect|h|k)\((\d+)(?:\|(\d+))?\)$")
_PAT_N = re.compile(r"^(le|sle|m)\((\d+)\)$")
_PAT_SM = re.compile(r"^sm_?\{?(-?\d+(?:/\d+)?)\}?\((\d+)\)$")
_ALIASES = {
    "mb38": "mb(3|8)",
    "mb(3|8)": "mb(3|8)",
    "vle36": "vle(3|6)",
    "vle(3|6)": "vle(3|6)",
    "ksle510": "ksle(5|10)",
    "ksle(5|10)": "ksle(5|10)",
}


def parse_name(name: str) -> tuple:
    """Canonical ``(family, params)`` for an algebra name."""
    s = name.strip().replace(" ", "")
    if _OUT.match(s) or "~" in s:
        raise OutOfScope(f"{name!r} is outside the supported catalog")
    low = s.lower()
    if low in _ALIASES:
        return (_ALIASES[low], ())
    if re.match(r"^(mb|vle|ksle)", low):
        raise OutOfScope(f"only the consistent regradings of the exceptions are built, not {name!r}")
    m = _PAT_NM.match(low)
    if m:
        fam, n, mm = m.group(1), int(m.group(2)), int(m.group(3) or 0)
        if fam == "h" and n % 2:
            raise UnknownAlgebra("h(n|m) needs n even")
        if fam == "k" and n % 2 == 0:
            raise UnknownAlgebra("k(n|m) needs n odd")
        if n + mm == 0:
            raise UnknownAlgebra("empty superspace")
        return (fam, (n, mm))
    m = _PAT_N.match(low)
    if m:
        n = int(m.group(2))
        if n < 1:
            raise UnknownAlgebra("n must be positive")
        return (m.group(1), (n,))
    m = _PAT_SM.match(low)
    if m:
        return ("sm", (Fraction(m.group(1)), int(m.group(2))))
    raise UnknownAlgebra(f"unknown algebra {name!r}")


def canonical_name(name: str) -> str:
    fam, params = parse_name(name)
    if not params:
        return fam
    if fam in ("vect", "svect", "h", "k"):
        return f"{fam}({params[0]}|{params[1]})"
    if fam == "sm":
        b = params[0]
        bs = str(b.numerator) if b.denominator == 1 else f"{b.numerator}/{b.denominator}"
        return f"sm_{bs}({params[1]})"
    return f"{fam}({params[0]})"


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


@dataclass
class AlgebraDescriptor:
    name: str
    superdim: tuple
    coords: Coords
    structures: list
    notes: list = field(default_factory=list)

    @property
    def weights(self) -> dict:
        return {v.name: v.weight for v in self.coords.vars}

    @property
    def depth(self) -> int:
        return self.coords.depth

    def to_json(self, span: GradedSpan | None = None, labels: dict | None = None) -> dict:
        out = {
            "schema": 1,
            "name": self.name,
            "superdim": list(self.superdim),
            "variables": [
                {"name": v.name, "parity": "odd" if v.parity else "even", "weight": v.weight} for v in self.coords.vars
            ],
            "depth": self.depth,
            "structures": [s.describe() for s in self.structures],
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if span is not None:
            gens = {}
            for k in span.degrees():
                gens[str(k)] = [X.to_text() for X in span.pieces[k]]
            out["generators"] = gens
            if labels:
                out["labels"] = {str(k): v for k, v in labels.items()}
        return out


def _series_coords(n: int, m: int, odd_prefix="th") -> Coords:
    vs = [VarSpec(f"u{i + 1}", EVEN, 1) for i in range(n)]
    vs += [VarSpec(f"{odd_prefix}{a + 1}", ODD, 1) for a in range(m)]
    return Coords(vs)


def _symplectic(n: int) -> Callable[[int, int], int]:
    def w(i, j):
        if i // 2 != j // 2 or i == j:
            return 0
        return 1 if i < j else -1

    return w


def _descriptor(name: str) -> AlgebraDescriptor:
    fam, params = parse_name(name)
    cname = canonical_name(name)
    if fam == "vect":
        n, m = params
        return AlgebraDescriptor(cname, (n, m), _series_coords(n, m), [])
    if fam == "svect":
        n, m = params
        return AlgebraDescriptor(cname, (n, m), _series_coords(n, m), [StructureSpec(VOLUME, label="vol")])
    if fam == "h":
        n, m = params
        C = _series_coords(n, m)
        F = Forms(C)
        w = _symplectic(n)
        om = F.coords.zero()
        for i in range(n):
            for j in range(n):
                if w(i, j):
                    om = om + (F.dx(f"u{i + 1}") * F.dx(f"u{j + 1}")).scale(w(i, j))
        for a in range(m):
            om = om + F.dx(f"th{a + 1}") * F.dx(f"th{a + 1}")
        return AlgebraDescriptor(cname, (n, m), C, [StructureSpec(INVARIANT, forms=[om], forms_ctx=F, label="omega")])
    if fam in ("le", "sle"):
        (n,) = params
        C = _series_coords(n, n)
        F = Forms(C)
        om = F.coords.zero()
        for i in range(n):
            om = om + F.dx(f"u{i + 1}") * F.dx(f"th{i + 1}")
        st = [StructureSpec(INVARIANT, forms=[om], forms_ctx=F, label="du^i dth_i")]
        if fam == "sle":
            st.append(StructureSpec(VOLUME, label="vol"))
        return AlgebraDescriptor(cname, (n, n), C, st)
    if fam == "k":
        n, m = params
        vs = [VarSpec("t", EVEN, 2)] + [VarSpec(f"u{i + 1}", EVEN, 1) for i in range(n - 1)]
        vs += [VarSpec(f"th{a + 1}", ODD, 1) for a in range(m)]
        C = Coords(vs)
        F = Forms(C)
        w = _symplectic(n - 1)
        al = F.dx("t")
        for i in range(n - 1):
            for j in range(n - 1):
                if w(i, j):
                    al = al + (F.x(f"u{i + 1}") * F.dx(f"u{j + 1}")).scale(w(i, j))
        for a in range(m):
            al = al + F.x(f"th{a + 1}") * F.dx(f"th{a + 1}")
        return AlgebraDescriptor(cname, (n, m), C, [StructureSpec(CONTACT, forms=[al], forms_ctx=F, label="alpha")])
    if fam in ("m", "sm"):
        if fam == "m":
            (n,) = params
        else:
            beta, n = params
        vs = [VarSpec("tau", ODD, 2)] + [VarSpec(f"u{i + 1}", EVEN, 1) for i in range(n)]
        vs += [VarSpec(f"th{i + 1}", ODD, 1) for i in range(n)]
        C = Coords(vs)
        F = Forms(C)
        # the minus sign makes div_beta of i_X alpha a cocycle for every beta
        al = F.dx("tau")
        for i in range(n):
            al = al - F.x(f"u{i + 1}") * F.dx(f"th{i + 1}") - F.x(f"th{i + 1}") * F.dx(f"u{i + 1}")
        st = [StructureSpec(CONTACT, forms=[al], forms_ctx=F, label="alpha")]
        notes = []
        if fam == "sm":
            st.append(StructureSpec(DEFORMED_DIV, forms=[al], forms_ctx=F, beta=beta, n=n, label="div_beta"))
            notes.append("generating function taken as the contraction i_X alpha")
        return AlgebraDescriptor(cname, (n, n + 1), C, st, notes)
    if fam == "vle(3|6)":
        return _vle_descriptor()
    if fam == "ksle(5|10)":
        return _ksle_descriptor()
    if fam == "mb(3|8)":
        gens = mb38_generators()
        return AlgebraDescriptor(
            "mb(3|8)", (3, 8), gens.coords, [StructureSpec(DUAL, fields=gens.Dtilde, label="Dtilde")],
            [f"index convention: {gens.convention.describe()}"],
        )
    raise UnknownAlgebra(name)


def _vle_descriptor() -> AlgebraDescriptor:
    C = Coords(
        [VarSpec(f"th{i + 1}{a + 1}", ODD, 1) for i in range(3) for a in range(2)]
        + [VarSpec(f"u{i + 1}", EVEN, 2) for i in range(3)]
    )
    F = Forms(C)
    eps2 = lambda a, b: levi_civita(a, b)
    alphas = []
    for i in range(3):
        al = F.dx(f"u{i + 1}")
        for j, k in itertools.product(range(3), repeat=2):
            e = levi_civita(i, j, k)
            if not e:
                continue
            for a, b in itertools.product(range(2), repeat=2):
                if eps2(a, b):
                    al = al + (F.x(f"th{j + 1}{a + 1}") * F.dx(f"th{k + 1}{b + 1}")).scale(e * eps2(a, b))
        alphas.append(al)
    return AlgebraDescriptor(
        "vle(3|6)", (3, 6), C,
        [StructureSpec(PFAFF, forms=alphas, forms_ctx=F, label="alpha^i"), StructureSpec(VOLUME, label="vol")],
    )


def _ksle_descriptor() -> AlgebraDescriptor:
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    C = Coords([VarSpec(f"u{i + 1}", EVEN, 2) for i in range(5)] + [VarSpec(f"th{i + 1}{j + 1}", ODD, 1) for i, j in pairs])
    F = Forms(C)

    def th(i, j, dx=False):
        if i == j:
            return F.coords.zero()
        a, b = min(i, j), max(i, j)
        v = (F.dx if dx else F.x)(f"th{a + 1}{b + 1}")
        return v if i < j else -v

    alphas = []
    for i in range(5):
        al = F.dx(f"u{i + 1}")
        for j, k, l, m in itertools.product(range(5), repeat=4):
            e = levi_civita(i, j, k, l, m)
            if e:
                al = al + (th(j, k) * th(l, m, dx=True)).scale(Fraction(e, 4))
        alphas.append(al)
    return AlgebraDescriptor(
        "ksle(5|10)", (5, 10), C,
        [StructureSpec(PFAFF, forms=alphas, forms_ctx=F, label="alpha^i"), StructureSpec(VOLUME, label="vol")],
        ["the grading operator has zero superdivergence here, so degree 0 is gl(5) rather than sl(5)"],
    )


# ---------------------------------------------------------------------------
# mb(3|8)
# ---------------------------------------------------------------------------

_RAISE = {
    "identity": ((1, 0), (0, 1)),
    "eps": ((0, 1), (-1, 0)),
    "-eps": ((0, -1), (1, 0)),
}


@dataclass(frozen=True)
class Mb38Convention:
    """How the undefined raised indices are read.

    ``theta^a_i = sum_b R[a][b] theta_{ib}``, ``eth^a = sum_b Q[a][b] eth_b``
    and ``eps^{123} = eps3_sign``.
    """

    theta_raise: str = "eps"
    eth_raise: str = "eps"
    eps3_sign: int = 1

    def describe(self) -> str:
        return f"theta^a_i={self.theta_raise}.theta_i, eth^a={self.eth_raise}.eth, eps^123={self.eps3_sign:+d}"


def candidate_conventions() -> list:
    return [
        Mb38Convention(t, e, s)
        for t in ("identity", "eps", "-eps")
        for e in ("identity", "eps", "-eps")
        for s in (1, -1)
    ]


@dataclass
class Mb38Generators:
    coords: Coords
    convention: Mb38Convention
    F: list
    E: list
    D: list
    I: dict
    J: dict
    Z: SuperVectorField
    Dtilde: list
    g0: list
    g0_labels: list

    def labelled(self) -> list:
        """``(label, degree, field)`` for the 23 non-positive generators."""
        out = [(f"F{a + 1}", -3, X) for a, X in enumerate(self.F)]
        out += [(f"E{i + 1}", -2, X) for i, X in enumerate(self.E)]
        out += [(f"D{i + 1}{a + 1}", -1, self.D[2 * i + a]) for i in range(3) for a in range(2)]
        out += [(lab, 0, X) for lab, X in zip(self.g0_labels, self.g0)]
        return out

    def span(self) -> GradedSpan:
        return GradedSpan(self.coords, {-3: list(self.F), -2: list(self.E), -1: list(self.D), 0: list(self.g0)})


def mb38_coords() -> Coords:
    return Coords(
        [VarSpec(f"th{i + 1}{a + 1}", ODD, 1) for i in range(3) for a in range(2)]
        + [VarSpec(f"u{i + 1}", EVEN, 2) for i in range(3)]
        + [VarSpec(f"vt{a + 1}", ODD, 3) for a in range(2)]
    )


def _g0_sl3_sl2(C: Coords, with_vt: bool):
    Zero = lambda: SuperVectorField(C)
    th = lambda i, a: C.var(f"th{i + 1}{a + 1}")
    d = lambda i, a: SuperVectorField.partial(C, f"th{i + 1}{a + 1}")
    u = lambda i: C.var(f"u{i + 1}")
    du = lambda i: SuperVectorField.partial(C, f"u{i + 1}")

    def G(k, l):
        X = du(l).lmul(u(k))
        for a in range(2):
            X = X - d(k, a).lmul(th(l, a))
        return X

    trG = G(0, 0) + G(1, 1) + G(2, 2)
    I = {(k, l): G(k, l) - (trG.scale(Fraction(1, 3)) if k == l else Zero()) for k in range(3) for l in range(3)}

    def H(c, e):
        X = Zero()
        if with_vt:
            X = SuperVectorField.partial(C, f"vt{e + 1}").lmul(C.var(f"vt{c + 1}"))
        for i in range(3):
            X = X - d(i, c).lmul(th(i, e))
        return X

    trH = H(0, 0) + H(1, 1)
    J = {(c, e): H(c, e) - (trH.scale(Fraction(1, 2)) if c == e else Zero()) for c in range(2) for e in range(2)}
    return I, J


def g0_basis(I: dict, J: dict, Z):
    keys_I = [(k, l) for k in range(3) for l in range(3) if k != l] + [(0, 0), (1, 1)]
    keys_J = [(0, 1), (1, 0), (0, 0)]
    fields = [I[k] for k in keys_I] + [J[k] for k in keys_J] + [Z]
    labels = [f"I{k + 1}{l + 1}" for k, l in keys_I] + [f"J{c + 1}{e + 1}" for c, e in keys_J] + ["Z"]
    return fields, labels


def mb38_generators(convention: Mb38Convention | None = None) -> Mb38Generators:
    conv = convention or pinned_convention()
    C = mb38_coords()
    R = _RAISE[conv.theta_raise]
    Qm = _RAISE[conv.eth_raise]
    Zero = lambda: SuperVectorField(C)
    th = lambda i, a: C.var(f"th{i + 1}{a + 1}")
    u = lambda i: C.var(f"u{i + 1}")
    d = lambda i, a: SuperVectorField.partial(C, f"th{i + 1}{a + 1}")
    du = lambda i: SuperVectorField.partial(C, f"u{i + 1}")
    eth = lambda a: SuperVectorField.partial(C, f"vt{a + 1}")

    def th_up(a, i):
        out = C.zero()
        for b in range(2):
            if R[a][b]:
                out = out + th(i, b).scale(R[a][b])
        return out

    def eth_up(a):
        out = Zero()
        for b in range(2):
            if Qm[a][b]:
                out = out + eth(b).scale(Qm[a][b])
        return out

    def e3(i, j, k):
        return conv.eps3_sign * levi_civita(i, j, k)

    F = [eth(a) for a in range(2)]
    E = []
    for i in range(3):
        X = du(i)
        for a in range(2):
            X = X + eth(a).lmul(th_up(a, i))
        E.append(X)

    def dfield(i, a, s_lin, s_u):
        X = d(i, a)
        for j, k in itertools.product(range(3), repeat=2):
            e = e3(i, j, k)
            if not e:
                continue
            X = X + du(k).lmul(th_up(a, j)).scale(3 * e * s_lin)
            for b in range(2):
                X = X + eth(b).lmul(th_up(a, j) * th_up(b, k)).scale(e)
        return X + eth_up(a).lmul(u(i)).scale(s_u)

    D = [dfield(i, a, 1, 1) for i in range(3) for a in range(2)]
    Dt = [dfield(i, a, -1, -1) for i in range(3) for a in range(2)]
    I, J = _g0_sl3_sl2(C, with_vt=True)
    Z = grading_operator(C)
    g0, labels = g0_basis(I, J, Z)
    return Mb38Generators(C, conv, F, E, D, I, J, Z, Dt, g0, labels)


@dataclass
class ConventionResult:
    convention: Mb38Convention
    grading_errors: int
    closure_errors: int
    preserved: int

    @property
    def ok(self) -> bool:
        return self.grading_errors == 0 and self.closure_errors == 0 and self.preserved == 23


def evaluate_convention(conv: Mb38Convention) -> ConventionResult:
    g = mb38_generators(conv)
    span = g.span()
    s = StructureSpec(DUAL, fields=g.Dtilde)
    pres = sum(1 for _, _, X in g.labelled() if certify(s, X).residual_zero)
    return ConventionResult(conv, len(span.grading_errors()), len(closure_errors(span)), pres)


def search_conventions() -> list:
    return [evaluate_convention(c) for c in candidate_conventions()]


# First candidate (in ``candidate_conventions`` order) passing every check;
# pinned by tests/test_catalog.py::test_pinned_convention_is_first_passing.
PINNED = Mb38Convention("eps", "eps", 1)


def pinned_convention() -> Mb38Convention:
    return PINNED


# ---------------------------------------------------------------------------
# building and verifying
# ---------------------------------------------------------------------------


def build(name: str, kmax: int = 0):
    """``(descriptor, span)`` with ``span`` holding degrees ``-depth..kmax``."""
    desc = _descriptor(name)
    if desc.name == "mb(3|8)":
        span = mb38_generators().span()
        if kmax > 0:
            res = prolong_recursive(GradedSpan(span.coords, {k: v for k, v in span.pieces.items() if k < 0}), span.pieces[0], kmax)
            span = res.span
        return desc, span
    res = prolong_preserver(desc.structures, desc.coords, kmax)
    return desc, res.span


def labels_for(name: str, span: GradedSpan) -> dict:
    if canonical_name(name) == "mb(3|8)":
        g = mb38_generators()
        out: dict = {}
        for lab, k, _ in g.labelled():
            out.setdefault(k, []).append(lab)
        return out
    return {k: [f"g{k}_{i}" for i in range(len(v))] for k, v in span.pieces.items()}


@dataclass
class PreservationEntry:
    generator: str
    structure: str
    passed: bool
    certificate: dict


@dataclass
class PreservationReport:
    name: str
    entries: list
    expected_negative: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries) and all(not e.passed for e in self.expected_negative)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "checked": len(self.entries),
            "failures": [
                {"generator": e.generator, "structure": e.structure} for e in self.entries if not e.passed
            ],
            "expected_negative": [
                {"generator": e.generator, "structure": e.structure, "preserved": e.passed} for e in self.expected_negative
            ],
            "certificates": {f"{e.generator}|{e.structure}": e.certificate for e in self.entries},
        }


def verify_preservation(name: str, span: GradedSpan | None = None) -> PreservationReport:
    desc = _descriptor(name)
    if span is None:
        _, span = build(name)
    labels = labels_for(name, span)
    entries = []
    for k in span.degrees():
        for lab, X in zip(labels[k], span.pieces[k]):
            for s in desc.structures:
                cert = certify(s, X)
                entries.append(PreservationEntry(lab, s.label or s.kind, cert.residual_zero, cert.describe()))
    negatives = []
    if desc.name == "mb(3|8)":
        du1 = SuperVectorField.partial(desc.coords, "u1")
        cert = certify(desc.structures[0], du1)
        negatives.append(PreservationEntry("d/du1", "Dtilde", cert.residual_zero, cert.describe()))
    return PreservationReport(desc.name, entries, negatives)


def verify_grading(span: GradedSpan) -> dict:
    errs = span.grading_errors()
    cl = closure_errors(span)
    return {"grading_errors": len(errs), "closure_errors": len(cl), "passed": not errs and not cl}


def consistency_check(name_or_span) -> str:
    """``consistent`` iff even degrees are purely even fields and odd degrees purely odd."""
    span = build(name_or_span)[1] if isinstance(name_or_span, str) else name_or_span
    for k in span.degrees():
        for X in span.pieces[k]:
            if not X.is_parity_homogeneous() or X.parity() != (k & 1):
                return "inconsistent"
    return "consistent"


@dataclass
class G0Report:
    name: str
    relations_checked: int
    failures: list
    table: dict
    membership_ok: bool

    @property
    def passed(self) -> bool:
        return not self.failures and self.membership_ok

    def describe(self) -> dict:
        return {
            "name": self.name,
            "relations_checked": self.relations_checked,
            "failures": self.failures,
            "membership_ok": self.membership_ok,
            "structure_constants": self.table,
        }


def _g0_explicit(name: str):
    cname = canonical_name(name)
    if cname == "mb(3|8)":
        g = mb38_generators()
        return g.coords, g.I, g.J, g.Z
    if cname == "vle(3|6)":
        desc = _vle_descriptor()
        I, J = _g0_sl3_sl2(desc.coords, with_vt=False)
        return desc.coords, I, J, grading_operator(desc.coords)
    raise ValueError("g_0 structure check is defined for mb(3|8) and vle(3|6)")


def verify_g0_structure(name: str) -> G0Report:
    """Check sl(3)+sl(2)+gl(1) relations on the explicit degree-0 basis."""
    C, I, J, Z = _g0_explicit(name)
    fails = []
    count = 0

    def delta(a, b):
        return 1 if a == b else 0

    def expect(label, got, want):
        nonlocal count
        count += 1
        if got != want:
            fails.append(label)

    for (k, l), (m, n) in itertools.product(I, repeat=2):
        want = I[(k, n)].scale(delta(m, l)) - I[(m, l)].scale(delta(k, n))
        expect(f"[I{k + 1}{l + 1},I{m + 1}{n + 1}]", bracket(I[(k, l)], I[(m, n)]), want)
    for (a, b), (c, e) in itertools.product(J, repeat=2):
        want = J[(a, e)].scale(delta(c, b)) - J[(c, b)].scale(delta(a, e))
        expect(f"[J{a + 1}{b + 1},J{c + 1}{e + 1}]", bracket(J[(a, b)], J[(c, e)]), want)
    zero = SuperVectorField(C)
    for key, X in list(I.items()) + list(J.items()):
        expect(f"[I/J,I/J]-free", bracket(Z, X), zero)
    for X, Y in itertools.product(I.values(), J.values()):
        expect("[I,J]", bracket(X, Y), zero)
    trace_I = I[(0, 0)] + I[(1, 1)] + I[(2, 2)]
    expect("tr I", trace_I, zero)
    expect("tr J", J[(0, 0)] + J[(1, 1)], zero)

    basis, labels = g0_basis(I, J, Z)
    table = {}
    for (la, X), (lb, Y) in itertools.combinations(zip(labels, basis), 2):
        B = bracket(X, Y)
        if not B:
            continue
        coeffs = linalg.express(B.vector(), [b.vector() for b in basis])
        if coeffs is None:
            fails.append(f"[{la},{lb}] leaves g_0")
            continue
        table[f"[{la},{lb}]"] = {lab: _q(c) for lab, c in zip(labels, coeffs) if c}

    if canonical_name(name) == "mb(3|8)":
        membership = True
    else:
        _, span = build(name)
        have = linalg.span_basis(X.vector() for X in span.pieces[0])
        membership = have.rank == len(basis) and all(have.contains(X.vector()) for X in basis)
    return G0Report(canonical_name(name), count, fails, table, membership)


def _q(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def jacobi_basis_failures(fields) -> tuple[int, list]:
    """Super-Jacobi on every unordered triple (with repetition) of ``fields``."""
    n = len(fields)
    checked = 0
    bad = []
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                checked += 1
                if jacobiator(fields[i], fields[j], fields[k]):
                    bad.append((i, j, k))
    return checked, bad


def mb38_negative_table() -> dict:
    """Brackets among negative generators expressed in the target piece's basis."""
    g = mb38_generators()
    labelled = [(lab, k, X) for lab, k, X in g.labelled() if k < 0]
    pieces = g.span().pieces
    out = {}
    for (la, ka, X), (lb, kb, Y) in itertools.combinations_with_replacement(labelled, 2):
        B = bracket(X, Y)
        s = ka + kb
        if not B:
            out[f"[{la},{lb}]"] = {}
            continue
        basis = pieces.get(s, [])
        labs = [lab for lab, k, _ in g.labelled() if k == s]
        coeffs = linalg.express(B.vector(), [b.vector() for b in basis]) if basis else None
        if coeffs is None:
            out[f"[{la},{lb}]"] = {"outside": B.to_text()}
        else:
            out[f"[{la},{lb}]"] = {lab: _q(c) for lab, c in zip(labs, coeffs) if c}
    return out


# ---------------------------------------------------------------------------
# regradings
# ---------------------------------------------------------------------------

REGRADINGS = (
    ("vle", (4, 3), 1),
    ("vle", (5, 4), 2),
    ("vle", (3, 6), 2),
    ("vas", (4, 4), 1),
    ("kas", (1, 6), 2),
    ("kas", (5, 5), 2),
    ("kas", (4, 4), 1),
    ("kas", (4, 3), 1),
    ("mb", (4, 5), 2),
    ("mb", (5, 6), 2),
    ("mb", (3, 8), 3),
    ("ksle", (9, 6), 2),
    ("ksle", (11, 9), 2),
    ("ksle", (5, 10), 2),
    ("ksle", (11, 9, "CK"), 3),
)


def regrading_table() -> list[dict]:
    out = []
    for fam, sd, depth in REGRADINGS:
        tag = f"{sd[0]}|{sd[1]}" + (f";{sd[2]}" if len(sd) > 2 else "")
        out.append({"name": fam, "superdim": tag, "depth": depth})
    return out


def regrading_lookup(family: str) -> dict:
    return {r["superdim"]: r["depth"] for r in regrading_table() if r["name"] == family}


CONSISTENT = ("mb(3|8)", "vle(3|6)", "ksle(5|10)")
