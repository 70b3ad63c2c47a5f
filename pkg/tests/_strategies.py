"""Hypothesis strategies and small random builders shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from superfields.superpoly import Coords, SuperPoly, key_from_exponents, monomials_of_weight
from superfields.svf import SuperVectorField

MIXED = Coords.build([("u", 0, 1), ("v", 0, 2), ("th1", 1, 1), ("th2", 1, 1), ("th3", 1, 2)])

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, coords=MIXED, max_terms=4, max_exp=2):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = []
        for i, p in enumerate(coords.parities):
            exps.append(draw(st.integers(0, 1 if p else max_exp)))
        key = key_from_exponents(coords, exps)
        terms[key] = terms.get(key, 0) + draw(coeffs)
    return SuperPoly(coords, terms)


@st.composite
def homogeneous_polys(draw, coords=MIXED, parity=None, max_terms=4):
    p = draw(st.integers(0, 1)) if parity is None else parity
    f = draw(polys(coords, max_terms))
    return f.parity_part(p), p


@st.composite
def fields(draw, coords=MIXED, parity=None, max_terms=2):
    p = draw(st.integers(0, 1)) if parity is None else parity
    comps = {}
    for i, vp in enumerate(coords.parities):
        f = draw(polys(coords, max_terms)).parity_part((p + vp) & 1)
        if f:
            comps[i] = f
    return SuperVectorField(coords, comps), p


def random_homogeneous_field(rng: random.Random, basis_by_parity: dict, max_terms=3):
    """Random rational combination of same-parity basis fields."""
    p = rng.randrange(2)
    pool = basis_by_parity.get(p) or basis_by_parity[1 - p]
    k = rng.randint(1, max_terms)
    X = None
    for B in rng.sample(pool, min(k, len(pool))):
        c = Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 3))
        X = B.scale(c) if X is None else X + B.scale(c)
    return X


def random_poly(rng: random.Random, coords: Coords, degree: int, parity=None, terms=3):
    keys = monomials_of_weight(coords, degree, parity)
    f = SuperPoly(coords)
    if not keys:
        return f
    for key in rng.sample(keys, min(terms, len(keys))):
        f = f + SuperPoly.monomial(coords, key, Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    return f
