from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _strategies import MIXED, fields, polys
from superfields.superpoly import Coords, CoordinateMismatch, SuperPoly
from superfields.svf import (
    Forms,
    ParityError,
    SuperVectorField,
    bracket,
    div_beta,
    divergence,
    grading_operator,
    jacobiator,
    supercommutator_on,
)

P = SuperVectorField.partial


def test_simple_brackets():
    C = Coords.build([("u", 0, 1), ("th1", 1, 1), ("th2", 1, 1)])
    du = P(C, "u")
    assert bracket(du, du.lmul(C.var("u"))) == du
    assert bracket(P(C, "th1"), P(C, "th2")) == SuperVectorField(C)
    # odd field squared: {th1 d_th2, th1 d_th2} = 0 but {d_th1, th1 d_th2} = d_th2
    X = P(C, "th2").lmul(C.var("th1"))
    assert bracket(P(C, "th1"), X) == P(C, "th2")


def test_inhomogeneous_bracket_rejected():
    C = Coords.build([("u", 0, 1), ("th", 1, 1)])
    X = P(C, "u") + P(C, "th")
    with pytest.raises(ParityError):
        bracket(X, P(C, "u"))


def test_divergence_examples():
    C = Coords.build([("x1", 0, 1), ("x2", 0, 1), ("u", 0, 1), ("th1", 1, 1), ("th2", 1, 1)])
    assert divergence(P(C, "x2").lmul(C.var("x1"))) == C.zero()
    assert divergence(P(C, "u").lmul(C.var("u"))) == C.one()
    assert divergence(P(C, "th2").lmul(C.var("th1"))) == C.zero()
    # odd directions contribute with a minus sign for even fields
    assert divergence(P(C, "th1").lmul(C.var("th1"))) == -C.one()


def test_div_beta_examples():
    n = 2
    C = Coords.build([("tau", 1, 2), ("u1", 0, 1), ("u2", 0, 1), ("th1", 1, 1), ("th2", 1, 1)])
    b = Fraction(3, 5)
    assert div_beta(C.one(), b, n) == C.zero()
    assert div_beta(C.var("tau"), b, n) == SuperPoly.constant(C, -2 * n * b)
    assert div_beta(C.var("u1") * C.var("th1"), b, n) == SuperPoly.constant(C, 2)
    with pytest.raises(CoordinateMismatch):
        div_beta(Coords.build([("u", 0, 1)]).one(), b, 1)


def test_grading_operator_on_mb_weights():
    C = Coords.build([("th11", 1, 1), ("u1", 0, 2), ("vt1", 1, 3)])
    Z = grading_operator(C)
    assert Z.to_text() == "(th11)*d[th11] + (2*u1)*d[u1] + (3*vt1)*d[vt1]"
    assert bracket(Z, P(C, "vt1")) == P(C, "vt1").scale(-3)


def test_lie_derivative_examples():
    C = Coords.build([("t", 0, 2), ("u", 0, 1), ("th1", 1, 1), ("th2", 1, 1)])
    F = Forms(C)
    alpha = F.dx("t") + F.x("th1") * F.dx("th1") + F.x("th2") * F.dx("th2")
    assert F.lie_derivative(P(C, "t"), alpha) == F.coords.zero()
    assert F.lie_derivative(P(C, "u").lmul(C.var("u")), F.dx("u")) == F.dx("u")
    assert F.lie_derivative(P(C, "u"), F.x("u") * F.dx("u")) == F.dx("u")


def test_cartan_formula_both_parities():
    C = Coords.build([("u", 0, 1), ("th", 1, 1)])
    F = Forms(C)
    om = F.x("th") * F.dx("u") + F.x("u") * F.dx("th")
    u2 = C.var("u") * C.var("u")
    for X, px in ((P(C, "th").lmul(u2), 1), (P(C, "u").lmul(u2), 0)):
        ix = F.contraction(X)
        # [i_X, d] with |i_X| = |X| + 1 and d odd
        sign = -((-1) ** (px + 1))
        rhs = ix.apply(F.d(om)) + F.d(ix.apply(om)).scale(sign)
        assert F.lie_derivative(X, om) == rhs


@settings(max_examples=40, deadline=None)
@given(fields(), fields(), fields())
def test_super_jacobi(a, b, c):
    X, Y, Z = a[0], b[0], c[0]
    assert not jacobiator(X, Y, Z)


@settings(max_examples=40, deadline=None)
@given(fields(), fields(), polys())
def test_bracket_matches_operator_commutator(a, b, f):
    X, Y = a[0], b[0]
    assert bracket(X, Y).apply(f) == supercommutator_on(X, Y, f)


@settings(max_examples=40, deadline=None)
@given(fields(), fields())
def test_super_antisymmetry(a, b):
    (X, px), (Y, py) = a, b
    assert bracket(X, Y) == bracket(Y, X).scale(-((-1) ** (px * py)))


@settings(max_examples=40, deadline=None)
@given(fields(), fields())
def test_divergence_is_a_cocycle(a, b):
    (X, px), (Y, py) = a, b
    lhs = divergence(bracket(X, Y))
    rhs = X.apply(divergence(Y)) - Y.apply(divergence(X)).scale((-1) ** (px * py))
    assert lhs == rhs


FORM_COORDS = Coords.build([("u", 0, 1), ("th1", 1, 1), ("th2", 1, 1)])
FORMS = Forms(FORM_COORDS)


@st.composite
def forms(draw):
    return draw(polys(FORMS.coords, max_terms=3, max_exp=1))


@settings(max_examples=40, deadline=None)
@given(forms())
def test_d_squared_zero(om):
    assert not FORMS.d(FORMS.d(om))


@settings(max_examples=30, deadline=None)
@given(fields(FORM_COORDS), fields(FORM_COORDS), forms())
def test_lie_derivative_respects_brackets(a, b, om):
    (X, px), (Y, py) = a, b
    lhs = FORMS.lie_derivative(bracket(X, Y), om)
    rhs = FORMS.lie_derivative(X, FORMS.lie_derivative(Y, om)) - FORMS.lie_derivative(
        Y, FORMS.lie_derivative(X, om)
    ).scale((-1) ** (px * py))
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(fields())
def test_grading_operator_eigenvalues(a):
    X, _ = a
    Z = grading_operator(MIXED)
    for k in range(-2, 5):
        part = X.degree_part(k)
        assert bracket(Z, part) == part.scale(k)
