import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cuspidal.errors import (
    NonPositiveConstantTerm,
    NonvanishingConstant,
    NotDivisible,
    OrderMismatch,
    ZeroConstantTerm,
)
from cuspidal.jet import Curve3, Jet1, Jet2, MapGerm3, VectorField2, align, cross, det3, dot

ORDER = 5
coef = st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False)


def jet1s(order=ORDER):
    return st.lists(coef, min_size=order + 1, max_size=order + 1).map(lambda c: Jet1(c, order))


def jet2s(order=ORDER):
    n = (order + 1) * (order + 2) // 2
    return st.lists(coef, min_size=n, max_size=n).map(lambda v: _tri(v, order))


def _tri(values, order):
    c = np.zeros((order + 1, order + 1))
    k = 0
    for i in range(order + 1):
        for j in range(order + 1 - i):
            c[i, j] = values[k]
            k += 1
    return Jet2(c, order)


def _units(strategy):
    return strategy.filter(lambda j: abs(j.const) > 0.3)


def _positive(strategy):
    return strategy.filter(lambda j: j.const > 0.3)


def _to_sympy2(j):
    x, y = sp.symbols("x y")
    n = j.order
    return sum(sp.Float(j.coeffs[i, k]) * x**i * y**k
               for i in range(n + 1) for k in range(n + 1 - i)), x, y


# -- ring axioms -------------------------------------------------------------

@given(jet2s(), jet2s(), jet2s())
def test_ring_axioms_jet2(a, b, c):
    assert ((a * b) * c).allclose(a * (b * c), atol=1e-9)
    assert (a * (b + c)).allclose(a * b + a * c, atol=1e-9)
    assert (a * b).allclose(b * a, atol=1e-12)
    assert (a + 0).allclose(a) and (a * 1).allclose(a)


@given(jet1s(), jet1s())
def test_ring_axioms_jet1(a, b):
    assert (a * b).allclose(b * a, atol=1e-12)
    assert (a - a).is_zero()


@given(_units(jet2s()))
def test_recip_remultiplies_to_one(a):
    assert (a * a.recip()).allclose(Jet2.constant(1.0, ORDER), atol=1e-8)


@given(_positive(jet1s()), st.sampled_from([(1, 2), (-3, 2), (3, 4), (-5, 4), (2, 3)]))
def test_pow_rational_remultiplies(a, pq):
    p, q = pq
    r = a.pow_rational(p, q)
    assert (r ** q).allclose(a ** p, atol=1e-7 * max(1.0, (a ** p).max_abs()))


@given(jet2s())
def test_mixed_partials_commute(a):
    assert a.dx().dy().allclose(a.dy().dx(), atol=1e-12)


@given(jet2s(), st.floats(-0.3, 0.3), st.floats(-0.3, 0.3))
def test_compose_with_polynomials_evaluates(a, s, t):
    # substituting (s*u, t*u) and evaluating at u = 1 equals a(s, t) for a polynomial jet
    u = Jet1.var(ORDER)
    out = a.compose(u * s, u * t)
    assert out.order == ORDER
    assert np.isclose(out(1.0), a(s, t), atol=1e-10)


# -- independent oracle: sympy series ---------------------------------------

def test_recip_against_sympy():
    x, y = sp.symbols("x y")
    expr = 2 + x - 3 * y + x * y**2 - x**3
    j = Jet2.from_dict({(0, 0): 2, (1, 0): 1, (0, 1): -3, (1, 2): 1, (3, 0): -1}, 4)
    r = j.recip()
    tt = sp.symbols("tt")
    ser = sp.series((1 / expr).subs({x: tt * x, y: tt * y}), tt, 0, 5).removeO()
    poly = sp.Poly(sp.expand(ser.subs(tt, 1)), x, y)
    for (i, k), v in poly.terms():
        assert r[i, k] == pytest.approx(float(v), rel=1e-12, abs=1e-12)


def test_pow_rational_against_sympy():
    t = sp.symbols("t")
    expr = 4 + t - 2 * t**2 + t**5
    j = Jet1([4, 1, -2, 0, 0, 1], 6)
    got = j.pow_rational(-3, 4)
    ser = sp.series(expr ** sp.Rational(-3, 4), t, 0, 7).removeO()
    for k in range(7):
        assert got[k] == pytest.approx(float(ser.coeff(t, k)), rel=1e-12, abs=1e-14)


def test_compose_jet1_against_sympy():
    t = sp.symbols("t")
    f = Jet1([1, 2, -1, 0.5], 5)
    g = Jet1([0, 1, 3, 0, -2, 1], 5)
    out = f.compose(g)
    fs = 1 + 2 * t - t**2 + sp.Rational(1, 2) * t**3
    gs = t + 3 * t**2 - 2 * t**4 + t**5
    ser = sp.expand(fs.subs(t, gs))
    for k in range(out.order + 1):
        assert out[k] == pytest.approx(float(ser.coeff(t, k)), abs=1e-12)


# -- determined orders ------------------------------------------------------

def test_compose_order_grows_with_valuation():
    f = Jet2.from_dict({(0, 2): 1.0, (1, 1): 2.0}, 3)
    t = Jet1.var(9)
    out = f.compose(t * t, t * t * t)
    # tail of f starts at degree 4, so terms below 4 * 2 = 8 are determined
    assert out.order == 7
    assert out[6] == pytest.approx(1.0) and out[5] == pytest.approx(2.0)


def test_compose_rejects_nonvanishing_inner():
    f = Jet2.var("x", 3)
    with pytest.raises(NonvanishingConstant):
        f.compose(Jet1([1, 1], 3), Jet1.var(3))


# -- errors -----------------------------------------------------------------

def test_order_mismatch_and_align():
    a, b = Jet1.var(3), Jet1.var(5)
    with pytest.raises(OrderMismatch):
        a + b
    a2, b2 = align(a, b)
    assert a2.order == b2.order == 3


def test_recip_of_nonunit():
    with pytest.raises(ZeroConstantTerm):
        Jet1.var(3).recip()


def test_pow_rational_needs_positive_constant():
    with pytest.raises(NonPositiveConstantTerm):
        Jet1([-1.0, 1.0], 3).pow_rational(1, 2)


def test_divide_by_monomial():
    j = Jet2.from_dict({(1, 2): 3.0, (0, 3): 1.0}, 5)
    q = j.divide_by_monomial(0, 2)
    assert q[1, 0] == 3.0 and q[0, 1] == 1.0 and q.order == 3
    with pytest.raises(NotDivisible):
        j.divide_by_monomial(1, 0)


# -- vector jets ------------------------------------------------------------

def test_vector_identities():
    rng = np.random.default_rng(0)
    vs = [Curve3(*(Jet1(rng.normal(size=5), 4) for _ in range(3))) for _ in range(3)]
    a, b, c = vs
    triple = dot(cross(a, b), c)
    assert triple.allclose(det3(a, b, c), atol=1e-12)
    assert dot(cross(a, b), a).is_zero(1e-12)


def test_vector_field_leibniz():
    n = 4
    x, y = Jet2.var("x", n), Jet2.var("y", n)
    field = VectorField2(1 + y, x * y)
    f, g = x * x + y, y * y * y - x
    lhs = field.apply(f * g)
    df, dg, f3, g3 = align(field.apply(f), field.apply(g), f, g)
    rhs = df * g3 + f3 * dg
    lhs, rhs = align(lhs, rhs)
    assert lhs.allclose(rhs, atol=1e-12)


def test_map_germ_derivatives_at_zero():
    n = 5
    x, y = Jet2.var("x", n), Jet2.var("y", n)
    f = MapGerm3(x, y * y / 2, x * y ** 3)
    assert np.allclose(f.derivative_at_zero(1, 3), [0, 0, 6])
    assert np.allclose(f.derivative_at_zero(0, 2), [0, 1, 0])
