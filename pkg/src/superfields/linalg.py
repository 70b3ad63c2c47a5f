"""Exact sparse linear algebra over the rationals.

Vectors are dicts ``{column: Fraction}`` with hashable, orderable columns.
Elimination pivots on the smallest column of each incoming row, so results
depend only on the input order and are bit-reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence


def _clean(v: Mapping) -> dict:
    return {k: Fraction(c) for k, c in v.items() if c}


def axpy(y: dict, a, x: Mapping) -> None:
    """In place ``y += a * x``."""
    for k, c in x.items():
        v = y.get(k, 0) + a * c
        if v:
            y[k] = v
        else:
            y.pop(k, None)


class Echelon:
    """Incrementally maintained reduced row echelon form of a span.

    ``order`` fixes the column order used for pivot choice; by default
    columns are compared directly.
    """

    def __init__(self, order=None):
        self.rows: dict = {}  # pivot column -> row with pivot coefficient 1
        self._key = order or (lambda c: c)

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Mapping) -> dict:
        """Remainder of ``v`` after eliminating every pivot column."""
        r = dict(v)
        # rows are kept fully reduced, so one pass over pivot columns suffices
        for col in [c for c in r if c in self.rows]:
            a = r.get(col)
            if a:
                axpy(r, -a, self.rows[col])
        return r

    def add(self, v: Mapping) -> dict | None:
        """Insert ``v``; returns the new normalized row or None if dependent."""
        r = self.reduce(_clean(v))
        if not r:
            return None
        piv = min(r, key=self._key)
        inv = 1 / r[piv]
        r = {k: c * inv for k, c in r.items()}
        for col, row in self.rows.items():
            a = row.get(piv)
            if a:
                axpy(row, -a, r)
        self.rows[piv] = r
        return r

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(_clean(v))


def rank(vectors: Iterable[Mapping]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


def independent_subset(vectors: Sequence[Mapping]) -> list[int]:
    """Indices of a maximal independent subset, greedy in input order."""
    e = Echelon()
    keep = []
    for i, v in enumerate(vectors):
        if e.add(v) is not None:
            keep.append(i)
    return keep


def nullspace(equations: Iterable[Mapping], unknowns: Sequence[Hashable]) -> list[dict]:
    """Basis of ``{x : sum_j eq[j] x_j = 0 for every eq}``.

    ``unknowns`` fixes the variable order; the returned vectors are keyed by
    unknown and have a 1 at their free variable.
    """
    pos = {u: i for i, u in enumerate(unknowns)}
    e = Echelon(order=lambda u: pos[u])
    for eq in equations:
        e.add(eq)
    pivots = e.rows
    out = []
    for u in unknowns:
        if u in pivots:
            continue
        vec = {u: Fraction(1)}
        for p, row in pivots.items():
            a = row.get(u)
            if a:
                vec[p] = -a
        out.append(vec)
    return out


def solve(equations: Sequence[tuple[Mapping, object]], unknowns: Sequence[Hashable]) -> dict | None:
    """One solution of ``sum_j eq[j] x_j = rhs`` (free variables set to 0), or None."""
    rhs_col = object()
    pos = {u: i for i, u in enumerate(unknowns)}
    pos[rhs_col] = len(unknowns)
    e = Echelon(order=lambda u: pos[u])
    for eq, rhs in equations:
        row = dict(eq)
        if rhs:
            row[rhs_col] = -Fraction(rhs)
        e.add(row)
    if rhs_col in e.rows:
        return None
    sol = {}
    for p, row in e.rows.items():
        c = row.get(rhs_col, 0)
        if c:
            sol[p] = -c
    return sol


def span_basis(vectors: Iterable[Mapping]) -> Echelon:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e


def same_span(a: Iterable[Mapping], b: Iterable[Mapping]) -> bool:
    a, b = list(a), list(b)
    ea, eb = span_basis(a), span_basis(b)
    return ea.rank == eb.rank and all(ea.contains(v) for v in b)


def express(target: Mapping, basis: Sequence[Mapping]) -> list | None:
    """Coefficients ``c`` with ``sum c_i basis[i] = target``, or None."""
    cols = set(target)
    for v in basis:
        cols |= set(v)
    eqs = []
    for col in sorted(cols, key=repr):
        eqs.append(({i: v.get(col, 0) for i, v in enumerate(basis) if v.get(col, 0)}, target.get(col, 0)))
    sol = solve(eqs, list(range(len(basis))))
    if sol is None:
        return None
    return [sol.get(i, Fraction(0)) for i in range(len(basis))]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def dense_rank(rows: Sequence[Sequence]) -> int:
    return rank({j: c for j, c in enumerate(r) if c} for r in rows)
