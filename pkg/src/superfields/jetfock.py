"""vect(N) acting on tensor-valued p-jets along a trajectory, and a small
Koszul-Tate complex.

A jet is the collection ``phi_{,m} = d_m phi(q)`` for multi-indices
``|m| <= p``.  Under a vector field ``xi`` the base point moves as
``[L_xi, q^mu] = xi^mu(q)`` and

    [L_xi, phi_{,m}] = d_m([L_xi, phi])(q) + xi^mu(q) d_mu d_m phi(q)
                     = -sum_{|n| <= |m|} T^n_m(xi)(q) phi_{,n}

with ``[L_xi, phi] = -xi^mu d_mu phi - d_nu xi^mu T^nu_mu phi``.  Everything
is pointwise in the trajectory parameter, so the checks below are exact
polynomial identities in ``q``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from . import linalg
from .superpoly import Coords, SuperPoly, key_exponents, monomials_of_weight
from .svf import SuperVectorField, bracket


class JetCancellationError(RuntimeError):
    """The order |m|+1 terms failed to cancel (a sign bug, never user error)."""


# ---- multi-indices ---------------------------------------------------------


def multi_indices(N: int, p: int) -> list[tuple[int, ...]]:
    """All ``m`` with ``|m| <= p``, by order then reverse-lexicographic."""
    out = []
    for k in range(p + 1):
        level = [m for m in itertools.product(range(k + 1), repeat=N) if sum(m) == k]
        out.extend(sorted(level, reverse=True))
    return out


def _mi_text(m) -> str:
    return "(" + ",".join(str(x) for x in m) + ")"


def _binom(m, k) -> int:
    out = 1
    for a, b in zip(m, k):
        out *= comb(a, b)
    return out


def _sub_indices(m):
    return itertools.product(*(range(a + 1) for a in m))


def _dmulti(f: SuperPoly, k) -> SuperPoly:
    for i, e in enumerate(k):
        for _ in range(e):
            f = f.partial(i)
    return f


# ---- tensor representations ------------------------------------------------


def _mat_mul(a, b):
    n, m, r = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(m)), Fraction(0)) for j in range(r)] for i in range(n)]


def _mat_comm(a, b):
    ab, ba = _mat_mul(a, b), _mat_mul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


def _unit(d, i, j, c=1):
    return [[Fraction(c) if (r, s) == (i, j) else Fraction(0) for s in range(d)] for r in range(d)]


@dataclass(frozen=True)
class TensorRep:
    """Matrices ``T^mu_nu`` on a ``dim``-dimensional space obeying gl(N).

    ``matrices[(mu, nu)]`` is ``T^mu_nu``.  The relations
    ``[T^mu_nu, T^rho_sigma] = delta^rho_nu T^mu_sigma - delta^mu_sigma T^rho_nu``
    are checked on construction.
    """

    N: int
    dim: int
    matrices: Mapping
    label: str = "custom"

    def __post_init__(self):
        zero = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        mats = {}
        for mu, nu in itertools.product(range(self.N), repeat=2):
            M = self.matrices.get((mu, nu), zero)
            if len(M) != self.dim or any(len(r) != self.dim for r in M):
                raise ValueError(f"T^{mu}_{nu} is not {self.dim}x{self.dim}")
            mats[(mu, nu)] = [[Fraction(x) for x in r] for r in M]
        object.__setattr__(self, "matrices", mats)
        for (mu, nu), (rho, sig) in itertools.product(mats, repeat=2):
            lhs = _mat_comm(mats[(mu, nu)], mats[(rho, sig)])
            rhs = [[Fraction(0)] * self.dim for _ in range(self.dim)]
            for i, j in itertools.product(range(self.dim), repeat=2):
                rhs[i][j] = (rho == nu) * mats[(mu, sig)][i][j] - (mu == sig) * mats[(rho, nu)][i][j]
            if lhs != rhs:
                raise ValueError(f"gl({self.N}) relation fails for T^{mu}_{nu}, T^{rho}_{sig}")

    def T(self, mu, nu):
        return self.matrices[(mu, nu)]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "N": self.N,
            "dim": self.dim,
            "T": {f"{mu},{nu}": [[_q(x) for x in r] for r in M] for (mu, nu), M in sorted(self.matrices.items())},
        }


def _q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def scalar_density(N: int, weight=0) -> TensorRep:
    w = Fraction(weight)
    return TensorRep(N, 1, {(mu, mu): [[w]] for mu in range(N)}, f"density[{_q(w)}]")


def vector_rep(N: int, weight=0) -> TensorRep:
    # contravariant index: T^nu_mu = -E_{mu nu} (+ weight)
    w = Fraction(weight)
    mats = {}
    for mu, nu in itertools.product(range(N), repeat=2):
        M = _unit(N, nu, mu, -1)
        if mu == nu:
            for i in range(N):
                M[i][i] += w
        mats[(mu, nu)] = M
    return TensorRep(N, N, mats, f"vector[{_q(w)}]")


def covector_rep(N: int, weight=0) -> TensorRep:
    w = Fraction(weight)
    mats = {}
    for mu, nu in itertools.product(range(N), repeat=2):
        M = _unit(N, mu, nu)
        if mu == nu:
            for i in range(N):
                M[i][i] += w
        mats[(mu, nu)] = M
    return TensorRep(N, N, mats, f"covector[{_q(w)}]")


# ---- jet action matrices ---------------------------------------------------


def base_coords(N: int) -> Coords:
    return Coords.build([(f"x{i + 1}", 0, 1) for i in range(N)])


@dataclass
class JetActionMatrix:
    """Blocks ``T^n_m(xi)(x)``; ``blocks[(n, m)][a][b]`` is a polynomial in x."""

    N: int
    p: int
    rep: TensorRep
    coords: Coords
    indices: list
    blocks: dict = field(default_factory=dict)

    def block(self, n, m):
        b = self.blocks.get((tuple(n), tuple(m)))
        if b is None:
            return [[self.coords.zero()] * self.rep.dim for _ in range(self.rep.dim)]
        return b

    def is_block_triangular(self) -> bool:
        return all(sum(n) <= sum(m) for n, m in self.blocks)

    def is_x_independent(self) -> bool:
        return all(e.is_constant() for b in self.blocks.values() for r in b for e in r)

    def to_json(self) -> dict:
        d = self.rep.dim
        rows = []
        for m in self.indices:
            for n in self.indices:
                b = self.blocks.get((n, m))
                if b is None:
                    continue
                rows.append(
                    {"n": list(n), "m": list(m), "matrix": [[b[i][j].to_text() for j in range(d)] for i in range(d)]}
                )
        return {"N": self.N, "p": self.p, "rep": self.rep.label, "variables": self.coords.names(), "blocks": rows}


def _add_block(acc: dict, key, a, b, val: SuperPoly):
    if not val:
        return
    blk = acc.setdefault(key, {})
    cur = blk.get((a, b))
    new = val if cur is None else cur + val
    if new:
        blk[(a, b)] = new
    else:
        blk.pop((a, b), None)
        if not blk:
            acc.pop(key)


def jet_matrices(xi: SuperVectorField, p: int, rep: TensorRep) -> JetActionMatrix:
    """Expand ``[L_xi, phi_{,m}]`` symbolically and read off ``T^n_m(xi)``."""
    C = xi.coords
    N = len(C)
    if any(C.parities) or N != rep.N:
        raise ValueError("xi must live on N even coordinates matching the representation")
    if p < 0:
        raise ValueError("jet order must be nonnegative")
    d = rep.dim
    comps = [xi.comps.get(mu, C.zero()) for mu in range(N)]
    unit = [tuple(int(i == mu) for i in range(N)) for mu in range(N)]
    idx = multi_indices(N, p)
    # acc[(n, m)][(a, b)]: coefficient of phi_{,n}^b in [L_xi, phi_{,m}^a]
    acc: dict = {}
    for m in idx:
        for k in _sub_indices(m):
            c = _binom(m, k)
            rest = tuple(a - b for a, b in zip(m, k))
            for mu in range(N):
                dk = _dmulti(comps[mu], k)
                if dk:
                    n = tuple(a + b for a, b in zip(rest, unit[mu]))
                    for a in range(d):
                        _add_block(acc, (n, m), a, a, dk.scale(-c))
                for nu in range(N):
                    dkn = _dmulti(comps[mu], tuple(a + b for a, b in zip(k, unit[nu])))
                    if not dkn:
                        continue
                    Tm = rep.T(nu, mu)
                    for a, b in itertools.product(range(d), repeat=2):
                        if Tm[a][b]:
                            _add_block(acc, (rest, m), a, b, dkn.scale(-c * Tm[a][b]))
        # trajectory transport
        for mu in range(N):
            if comps[mu]:
                n = tuple(a + b for a, b in zip(m, unit[mu]))
                for a in range(d):
                    _add_block(acc, (n, m), a, a, comps[mu])
    bad = [key for key in acc if sum(key[0]) > sum(key[1])]
    if bad:
        raise JetCancellationError(f"order |m|+1 terms survive at {bad[:3]}")
    blocks = {}
    for (n, m), blk in acc.items():
        M = [[C.zero()] * d for _ in range(d)]
        for (a, b), v in blk.items():
            M[a][b] = -v
        blocks[(n, m)] = M
    return JetActionMatrix(N, p, rep, C, idx, blocks)


# ---- representation property -----------------------------------------------


@dataclass
class RepCheckReport:
    passed: bool
    transport_ok: bool
    blocks_checked: int
    residual: dict

    def describe(self) -> str:
        if self.passed:
            return f"representation property holds ({self.blocks_checked} blocks)"
        keys = ", ".join(f"{_mi_text(n)}<-{_mi_text(m)}" for n, m in list(self.residual)[:4])
        return f"representation property FAILS; residual blocks {keys}"


def _poly_mat_mul(A, B, d, zero):
    return [[sum((A[i][k] * B[k][j] for k in range(d)), zero) for j in range(d)] for i in range(d)]


def rep_property_check(xi: SuperVectorField, eta: SuperVectorField, p: int, rep: TensorRep) -> RepCheckReport:
    """Check ``[D_xi, D_eta] = D_[xi,eta]`` on ``(q, phi_{,m})``.

    With ``D_xi phi_{,m} = -sum_n A(xi)_{mn} phi_{,n}`` and ``A(xi)_{mn} = T^n_m(xi)``,
    the commutator on jets is ``-xi(A(eta)) + eta(A(xi)) + A(eta)A(xi) - A(xi)A(eta)``,
    which must equal ``-A([xi, eta])``.
    """
    C = xi.coords
    d = rep.dim
    zero = C.zero()
    A, B = jet_matrices(xi, p, rep), jet_matrices(eta, p, rep)
    AB = jet_matrices(bracket(xi, eta), p, rep)
    idx = A.indices
    # composite blocks indexed (m, k): sum over intermediate n
    resid = {}
    for m, k in itertools.product(idx, repeat=2):
        if sum(k) > sum(m):
            continue
        R = [[zero] * d for _ in range(d)]
        a_blk, b_blk, ab_blk = A.block(k, m), B.block(k, m), AB.block(k, m)
        for i, j in itertools.product(range(d), repeat=2):
            R[i][j] = -xi.apply(b_blk[i][j]) + eta.apply(a_blk[i][j]) + ab_blk[i][j]
        for n in idx:
            if not (sum(k) <= sum(n) <= sum(m)):
                continue
            ba = _poly_mat_mul(B.block(n, m), A.block(k, n), d, zero)
            ab = _poly_mat_mul(A.block(n, m), B.block(k, n), d, zero)
            for i, j in itertools.product(range(d), repeat=2):
                R[i][j] = R[i][j] + ba[i][j] - ab[i][j]
        if any(e for r in R for e in r):
            resid[(k, m)] = [[e.to_text() for e in r] for r in R]
    # q^mu transport: xi(eta^mu) - eta(xi^mu) = [xi, eta]^mu
    br = bracket(xi, eta)
    transport_ok = all(
        xi.apply(eta.comps.get(mu, zero)) - eta.apply(xi.comps.get(mu, zero)) == br.comps.get(mu, zero)
        for mu in range(len(C))
    )
    return RepCheckReport(not resid and transport_ok, transport_ok, len(idx) ** 2, resid)


# ---- classical realization -------------------------------------------------


JET_SIGN = -1


@dataclass
class ClassicalExpression:
    """``int dt { xi^mu(q) p_mu + sign * pi^{,m} T^n_m(xi(q)) phi_{,n} }``.

    ``sign`` is -1 by default: with ``{p_nu, q^mu} = delta`` and
    ``{pi^{,m}, phi_{,n}} = delta`` this is the sign that makes the bracket
    with ``phi_{,m}`` reproduce ``-T^n_m phi_{,n}``.
    """

    N: int
    p: int
    rep: TensorRep
    transport: list
    jets: JetActionMatrix
    sign: int = JET_SIGN

    def to_json(self) -> dict:
        d = self.rep.dim
        return {
            "schema": 1,
            "kind": "classical_realization",
            "N": self.N,
            "p": self.p,
            "rep": self.rep.label,
            "jet_sign": self.sign,
            "transport": [f.to_text() for f in self.transport],
            "jet_terms": [
                {
                    "pi": list(m),
                    "phi": list(n),
                    "matrix": [[self.jets.blocks[(n, m)][i][j].to_text() for j in range(d)] for i in range(d)],
                }
                for m in self.jets.indices
                for n in self.jets.indices
                if (n, m) in self.jets.blocks
            ],
        }

    def to_text(self) -> str:
        parts = []
        for mu, f in enumerate(self.transport):
            if f:
                parts.append(f"({f.to_text()})(q)*p{mu + 1}")
        for m in self.jets.indices:
            for n in self.jets.indices:
                b = self.jets.blocks.get((n, m))
                if b is None:
                    continue
                mat = "[" + "; ".join(", ".join(e.to_text() for e in r) for r in b) + "]"
                sgn = "-" if self.sign < 0 else "+"
                parts.append(f"{sgn} pi{_mi_text(m)} {mat}(q) phi{_mi_text(n)}")
        body = " + ".join(p for p in parts if not p.startswith(("-", "+")))
        tail = " ".join(p for p in parts if p.startswith(("-", "+")))
        return "int dt { " + " ".join(x for x in (body, tail) if x).strip() + " }"

    # -- phase space --

    def phase_coords(self) -> Coords:
        return _phase_coords(self.N, self.p, self.rep.dim)

    def hamiltonian(self) -> SuperPoly:
        P = self.phase_coords()
        ren = {f"x{i + 1}": f"q{i + 1}" for i in range(self.N)}
        H = P.zero()
        for mu, f in enumerate(self.transport):
            if f:
                H = H + f.embed(P, ren) * P.var(f"p{mu + 1}")
        for (n, m), blk in self.jets.blocks.items():
            for a, b in itertools.product(range(self.rep.dim), repeat=2):
                e = blk[a][b]
                if e:
                    H = H + (e.embed(P, ren) * P.var(_pi(m, a)) * P.var(_phi(n, b))).scale(self.sign)
        return H


def _phi(n, a) -> str:
    return "phi_" + "".join(map(str, n)) + f"_{a}"


def _pi(n, a) -> str:
    return "pi_" + "".join(map(str, n)) + f"_{a}"


def _phase_coords(N, p, d) -> Coords:
    spec = [(f"q{i + 1}", 0, 1) for i in range(N)] + [(f"p{i + 1}", 0, 1) for i in range(N)]
    for n in multi_indices(N, p):
        for a in range(d):
            spec += [(_phi(n, a), 0, 1), (_pi(n, a), 0, 1)]
    return Coords.build(spec)


def poisson_bracket(A: SuperPoly, B: SuperPoly, N: int, p: int, d: int) -> SuperPoly:
    """Canonical bracket with ``{p_mu, q^nu} = delta`` and ``{pi^{,m}, phi_{,n}} = delta``."""
    P = A.coords
    pairs = [(f"p{i + 1}", f"q{i + 1}") for i in range(N)]
    pairs += [(_pi(n, a), _phi(n, a)) for n in multi_indices(N, p) for a in range(d)]
    out = P.zero()
    for mom, pos in pairs:
        out = out + A.partial(mom) * B.partial(pos) - A.partial(pos) * B.partial(mom)
    return out


def classical_realization(xi: SuperVectorField, p: int, rep: TensorRep, sign: int = JET_SIGN) -> ClassicalExpression:
    J = jet_matrices(xi, p, rep)
    comps = [xi.comps.get(mu, xi.coords.zero()) for mu in range(len(xi.coords))]
    return ClassicalExpression(len(xi.coords), p, rep, comps, J, sign)


def realization_bracket_check(
    xi: SuperVectorField, eta: SuperVectorField, p: int, rep: TensorRep, sign: int = JET_SIGN
) -> bool:
    """``{L_xi, L_eta} = L_[xi,eta]`` for the classical phase-space expressions."""
    N, d = len(xi.coords), rep.dim
    Hx = classical_realization(xi, p, rep, sign).hamiltonian()
    He = classical_realization(eta, p, rep, sign).hamiltonian()
    Hb = classical_realization(bracket(xi, eta), p, rep, sign).hamiltonian()
    return poisson_bracket(Hx, He, N, p, d) == Hb


# ---- Koszul-Tate ----------------------------------------------------------


@dataclass
class KTSetup:
    """Fields ``(name, parity)``, one equation per antifield, and a degree cutoff."""

    fields: Sequence
    equations: Sequence
    cutoff: int
    coords: Coords = None
    antifields: list = None
    weighted: bool = True

    def __post_init__(self):
        names = [f for f, _ in self.fields]
        par = [int(p) for _, p in self.fields]
        base = Coords.build([(n, p, 1) for n, p in zip(names, par)])
        eqs = [e if isinstance(e, SuperPoly) else SuperPoly.constant(base, e) for e in self.equations]
        if any(e.coords != base for e in eqs):
            raise ValueError("equations must be polynomials in the fields")
        # antifield weight = degree of its equation, so delta is homogeneous
        weights = []
        for e in eqs:
            deg = e.weighted_degree()
            if not e:
                weights.append(1)
            elif isinstance(deg, int) and deg > 0:
                weights.append(deg)
            else:
                weights.append(1)
                self.weighted = False
        if len(eqs) != len(names):
            raise ValueError("one equation per field")
        star_par = [q ^ 1 for q in par]
        self.antifields = [f"{n}_star" for n in names]
        self.coords = Coords.build(
            [(n, p, 1) for n, p in zip(names, par)] + [(a, q, w) for a, q, w in zip(self.antifields, star_par, weights)]
        )
        self.equations = [e.embed(self.coords) for e in eqs]

    def delta(self) -> SuperVectorField:
        C = self.coords
        comps = {C.index(a): e for a, e in zip(self.antifields, self.equations) if e}
        return SuperVectorField(C, comps)

    def antifield_number(self, key) -> int:
        exps = key_exponents(self.coords, key)
        k = len(self.fields)
        return sum(exps[k:])


@dataclass
class KTReport:
    per_degree: dict
    dims: dict
    delta_squared_zero: bool
    exact: bool

    def to_json(self) -> dict:
        return {
            "H": {str(g): {str(w): v for w, v in sorted(row.items())} for g, row in sorted(self.per_degree.items())},
            "dims": {str(g): v for g, v in sorted(self.dims.items())},
            "delta_squared_zero": self.delta_squared_zero,
            "per_degree_exact": self.exact,
        }


def kt_cohomology(setup: KTSetup, gmax: int) -> KTReport:
    """``H^g(delta)`` for ``g <= gmax`` per weighted degree up to the cutoff.

    With homogeneous equations delta preserves degree and the result is
    exact degree by degree.  Otherwise the kernel is computed inside the
    truncation and only images of truncated chains are quotiented out.
    """
    C = setup.coords
    D = setup.delta()
    by_deg = {w: monomials_of_weight(C, w) for w in range(setup.cutoff + 1)}

    def chains(g, ws):
        return [(w, k) for w in ws for k in by_deg[w] if setup.antifield_number(k) == g]

    def rank_of(g, ws):
        return linalg.rank(D.apply(SuperPoly.monomial(C, k)).terms for _, k in chains(g, ws))

    sq_zero = all(not D.apply(D.apply(SuperPoly.monomial(C, k))) for w in by_deg for k in by_deg[w])
    per_degree: dict = {}
    ranks: dict = {}
    degrees = [[w] for w in by_deg] if setup.weighted else [list(by_deg)]
    for ws in degrees:
        for g in range(gmax + 2):
            ranks[(g, tuple(ws))] = rank_of(g, ws) if g > 0 else 0
        for g in range(gmax + 1):
            n = len(chains(g, ws))
            h = n - ranks[(g, tuple(ws))] - ranks[(g + 1, tuple(ws))]
            per_degree.setdefault(g, {})[ws[-1] if setup.weighted else setup.cutoff] = h
    dims = {g: sum(row.values()) for g, row in per_degree.items()}
    return KTReport(per_degree, dims, sq_zero, setup.weighted)


def kt_toys() -> dict:
    """The three small setups used as oracles."""
    B1 = Coords.build([("phi", 0, 1)])
    B2 = Coords.build([("phi1", 0, 1), ("phi2", 0, 1)])
    return {
        "regular_one": KTSetup([("phi", 0)], [B1.var("phi")], 4),
        "regular_two": KTSetup([("phi1", 0), ("phi2", 0)], [B2.var("phi1"), B2.var("phi2")], 4),
        "trivial": KTSetup([("phi", 0)], [B1.zero()], 3),
    }
