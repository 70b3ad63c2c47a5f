import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from superfields import toroidal as T
from superfields.toroidal import (
    DimensionMismatch,
    GaugeField,
    ToroidalElement as E,
    c1,
    c2,
    cocycle_gain,
    gauge_shift,
    jacobi_sweep,
    jacobiator,
    near_central_report,
    near_central_value,
    random_element,
    reduce_to_virasoro,
    tbracket,
)


def test_ll_example_n2():
    got = tbracket(E.Lgen(2, 0, (1, 0)), E.Lgen(2, 1, (0, 1)))
    assert got == E(2, S={(0, (1, 1)): c2})
    # canonical form eliminates S^1 at mode (1,1)
    assert got.S == {(1, (1, 1)): -c2}


def test_s_zero_is_central():
    for N in (1, 2, 3):
        for mu, nu in itertools.product(range(N), repeat=2):
            for m in itertools.product(range(-1, 2), repeat=N):
                assert not tbracket(E.Lgen(N, mu, m), E.Sgen(N, nu, (0,) * N))


def test_1d_example():
    assert tbracket(E.Lgen(1, 0, (2,)), E.Lgen(1, 0, (-1,))) == E.Lgen(1, 0, (1,)).scale(-3)


def test_jacobi_examples():
    x, y, z = E.Lgen(2, 0, (1, 0)), E.Lgen(2, 1, (0, 1)), E.Lgen(2, 0, (-1, -1))
    assert not jacobiator(x, y, z)
    s = E.Sgen(2, 1, (1, 2))
    assert not jacobiator(s, s, x)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        tbracket(E.Lgen(2, 0, (1, 0)), E.Lgen(3, 0, (1, 0, 0)))
    with pytest.raises(DimensionMismatch):
        E.Lgen(2, 0, (1, 0, 0))


def test_closedness_relation_is_zero():
    for m in itertools.product(range(-2, 3), repeat=3):
        rel = E(3, S={(mu, m): m[mu] for mu in range(3)})
        assert not rel


@pytest.mark.parametrize("N", [1, 2, 3])
def test_antisymmetry_and_idempotence(N):
    rng = random.Random(N)
    for _ in range(40):
        x, y = random_element(N, rng), random_element(N, rng)
        assert tbracket(x, y) == -tbracket(y, x)
        assert x.canon() == x and x.canon().canon() == x.canon()


@pytest.mark.parametrize("N", [1, 2, 3])
def test_object_jacobi_random(N):
    rng = random.Random(10 + N)
    for _ in range(25):
        x, y, z = (random_element(N, rng) for _ in range(3))
        assert not jacobiator(x, y, z)


@pytest.mark.parametrize("N", [1, 2])
def test_sweep_small(N):
    rep = jacobi_sweep(N)
    assert rep.passed and rep.triples_checked > 0


def test_sweep_detects_a_broken_bracket(monkeypatch):
    good = T._ls

    def broken(mu, m, lam, p):
        # drop the delta term of [L, S]
        return good(mu, m, lam, p) - (mu == lam)[:, None] * m

    monkeypatch.setattr(T, "_ls", broken)
    assert not jacobi_sweep(2, -1, 1).passed


@pytest.mark.parametrize("N", [2, 3])
def test_vectorized_kernels_match_object_brackets(N):
    rng = random.Random(7 * N)
    modes = T._all_modes(N, -2, 2)
    for _ in range(60):
        mu, nu, la = (rng.randrange(N) for _ in range(3))
        m, n, p = (modes[rng.randrange(len(modes))] for _ in range(3))
        # [L, L]
        a, s1, s2 = T._ll(np.array([mu]), m[None], np.array([nu]), n[None])
        obj = tbracket(E.Lgen(N, mu, tuple(m)), E.Lgen(N, nu, tuple(n)))
        raw = E(N, L={(r, tuple(m + n)): int(a[0, r]) for r in range(N)},
                S={(r, tuple(m + n)): c1.scale(int(s1[0, r])) + c2.scale(int(s2[0, r])) for r in range(N)})
        assert raw == obj
        # [L, [L, L]]
        Lo, t1, t2 = T._l_on(np.array([la]), p[None], a, s1, s2, (m + n)[None])
        obj2 = tbracket(E.Lgen(N, la, tuple(p)), obj)
        q = tuple(p + m + n)
        raw2 = E(N, L={(r, q): int(Lo[0, r]) for r in range(N)},
                 S={(r, q): c1.scale(int(t1[0, r])) + c2.scale(int(t2[0, r])) for r in range(N)})
        assert raw2 == obj2
        # [L, S]
        s = T._ls(np.array([mu]), m[None], np.array([la]), p[None])
        obj3 = tbracket(E.Lgen(N, mu, tuple(m)), E.Sgen(N, la, tuple(p)))
        assert E(N, S={(r, tuple(m + p)): int(s[0, r]) for r in range(N)}) == obj3


def test_generic_vectorized_path_agrees():
    rng = random.Random(3)
    N = 3
    for _ in range(40):
        kinds = [rng.choice("LS") for _ in range(3)]
        idx = [rng.randrange(N) for _ in range(3)]
        modes = [tuple(rng.randint(-2, 2) for _ in range(N)) for _ in range(3)]
        _, _, zero = T.vectorized_jacobiator(kinds, idx, modes, N)
        gens = [(E.Lgen if k == "L" else E.Sgen)(N, i, m) for k, i, m in zip(kinds, idx, modes)]
        assert zero and not jacobiator(*gens)


def test_gauge_gain_example():
    g = GaugeField(2, {(0, 1, (1, 1)): 1})
    assert cocycle_gain(g, 0, (1, 0), 1, (0, 1)) == c2


def test_gauge_zero_field_is_identity():
    g = GaugeField(2, {})
    rep = gauge_shift(g)
    assert rep.passed and not rep.gains
    x = E.Sgen(2, 0, (0, 0))
    assert T.shift(x) == x


def test_gauge_field_antisymmetry():
    g = GaugeField(3, {(2, 0, (1, 0, 0)): Fraction(1, 2)})
    assert g(0, 2, (1, 0, 0)) == Fraction(-1, 2)
    assert g(2, 0, (1, 0, 0)) == Fraction(1, 2)
    assert g(1, 1, (1, 0, 0)) == 0


@pytest.mark.parametrize("N", [2, 3])
def test_gauge_shift_random(N):
    rng = random.Random(100 + N)
    for _ in range(50):
        rep = gauge_shift(GaugeField.random(N, rng, entries=2), probe_modes=[(1,) + (0,) * (N - 1), (0,) * N])
        assert rep.passed, rep.describe()


def test_f_module_jacobi():
    rng = random.Random(5)
    N = 3
    for _ in range(30):
        x = E.Lgen(N, rng.randrange(N), tuple(rng.randint(-2, 2) for _ in range(N)))
        y = E.Lgen(N, rng.randrange(N), tuple(rng.randint(-2, 2) for _ in range(N)))
        nu, rho = rng.sample(range(N), 2)
        f = E.Fgen(N, nu, rho, tuple(rng.randint(-2, 2) for _ in range(N)))
        assert not jacobiator(x, y, f)


def test_near_central_examples():
    # the direct bracket gives n_mu S^nu(0) - delta n.S(0); for mu = nu = 1, n = (1,0) this is 0
    assert not near_central_value(2, 0, 0, (1, 0))
    assert not near_central_value(2, 1, 0, (1, 0))
    assert not near_central_value(2, 0, 0, (0, 0))
    assert near_central_value(2, 0, 1, (1, 0)) == E.Sgen(2, 1, (0, 0))


def test_near_central_report_flags_printed_formula():
    rep = near_central_report(2)
    assert rep.identity_holds
    assert rep.residual_nonzero
    assert rep.printed_formula_mismatches
    with pytest.raises(ValueError):
        near_central_report(1)


def test_virasoro_reduction():
    rep = reduce_to_virasoro()
    assert rep.s_content_only_at_zero
    assert rep.match
    c = -(c1 + c2)
    assert rep.lam == c.scale(Fraction(-1, 2)).to_text()
    two = tbracket(E.Lgen(1, 0, (2,)), E.Lgen(1, 0, (-2,)))
    assert two == E(1, L={(0, (0,)): -4}, S={(0, (0,)): c.scale(8)})


def test_mobius_subalgebra_after_shift():
    # with L_0 -> L_0 + lambda S_0, [L_1, L_-1] has no S_0 term
    c = -(c1 + c2)
    lam = c.scale(Fraction(-1, 2))
    raw = tbracket(E.Lgen(1, 0, (1,)), E.Lgen(1, 0, (-1,)))
    # raw = -2 L_0 + c S_0 = -2 (L_0 + lam S_0) + (c + 2 lam) S_0
    assert raw.L == {(0, (0,)): -2 * T.ONE}
    assert raw.S[(0, (0,))] + lam.scale(2) == T.C12.zero()


@pytest.mark.parametrize("N", [1, 2, 3])
def test_witt_quotient_matches_vector_fields(N):
    assert all(T.witt_cross_check(N, random.Random(N), triples=3))
