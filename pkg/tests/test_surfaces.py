import numpy as np
import pytest

from cuspidal.errors import ConstraintViolation, NotFirstKind
from cuspidal.jet import Jet1, Jet2, dot
from cuspidal.surfaces import (
    EdgeCoefficients,
    classify_Sk,
    fold,
    frontal_structure,
    model_cross_cap,
    model_Sk,
    normal_form,
    normal_form_values,
    sigma_osculating_normal,
    tangent_developable,
)

N = 6


def _coeffs(**kw):
    return EdgeCoefficients.from_taylor(N, **kw)


def test_normal_form_cuspidal_edge_model():
    f = normal_form(_coeffs(b2={0: 1.0}), mode="prefold")
    assert f.y.allclose(Jet2.from_dict({(0, 2): 0.5}, N))
    assert f.z.allclose(Jet2.from_dict({(0, 3): 1.0}, N))


def test_normal_form_with_a_and_b0():
    f = normal_form(_coeffs(a={2: 1.0}, b0={1: 1.0}), mode="folded")
    assert f.y.allclose(Jet2.from_dict({(2, 0): 1.0, (0, 2): 0.5}, N))
    assert f.z.allclose(Jet2.var("x", N))


def test_prefold_constraints_enforced():
    with pytest.raises(ConstraintViolation):
        normal_form(_coeffs(b0={1: 1.0}), mode="prefold")
    with pytest.raises(ConstraintViolation):
        normal_form(_coeffs(a={1: 0.3}), mode="folded")


def test_fold_squares_third_component():
    x, y = Jet2.var("x", N), Jet2.var("y", N)
    from cuspidal.jet import MapGerm3
    g = fold(MapGerm3(x, y * y / 2, x))
    assert g.z.allclose(x * x)


def test_fold_restricted_to_edge(folded_samples):
    for c in folded_samples:
        sigma = fold(normal_form(c)).restrict_x()
        assert sigma.x.allclose(Jet1.var(c.order), atol=1e-12)
        assert sigma.y.allclose(c.a, atol=1e-12)
        assert sigma.z.allclose(c.b0 * c.b0, atol=1e-12)


@pytest.mark.parametrize("terms, mode, expected", [
    ({"b2": {0: 1.0}}, "prefold", ("cuspidal_edge", None)),
    ({"b2": {1: 1.0}}, "prefold", ("Sk", 0)),
    ({"b2": {2: 1.0}}, "prefold", ("Sk", 1)),
    ({"b0": {1: 1.0}, "b2": {0: 1.0}}, "folded", ("Sk", 0)),
    ({"b0": {2: 1.0}, "b2": {0: 1.0}}, "folded", ("Sk", 1)),
])
def test_classify_Sk(terms, mode, expected):
    res = classify_Sk(_coeffs(**terms), mode)
    assert (res.kind, res.k) == expected


def test_cross_cap_criterion_from_b2():
    c = _coeffs(b0={1: 1.0}, b2={1: 1.0})
    assert classify_Sk(c, "prefold").k == 0


def test_model_germs():
    x, y = Jet2.var("x", N), Jet2.var("y", N)
    f = model_cross_cap(N)
    assert f.y.allclose(y * y) and f.z.allclose(x * y ** 3)
    assert model_Sk(1, 1, N).z.allclose(x * x * y ** 3 + y ** 5)
    assert model_Sk(0, -1, N).z.allclose(x * y ** 3 - y ** 5)


def test_model_cross_cap_frontal_structure():
    fd = frontal_structure(model_cross_cap(N))
    assert np.allclose(fd.nu.const(), [0, 0, 1])
    assert np.allclose(fd.lam.coeffs[:, 0], 0.0)


def test_frontal_structure_properties(prefold_samples, folded_samples):
    for c, mode in [(c, "prefold") for c in prefold_samples] + [(c, "folded") for c in folded_samples]:
        f = normal_form(c, mode)
        fd = frontal_structure(f)
        assert np.max(np.abs(fd.lam.coeffs[:, 0])) <= 1e-12
        assert fd.eta_lambda0 > 0
        fx = f.dx()
        fy_y = f.dy().divide_by_monomial(0, 1)
        assert dot(*_aligned(fx, fd.nu)).is_zero(1e-10)
        assert dot(*_aligned(fy_y, fd.nu)).is_zero(1e-10)
        nn = fd.nu.norm_sq()
        assert nn.allclose(Jet2.constant(1.0, nn.order), atol=1e-10)


def _aligned(a, b):
    n = min(a.order, b.order)
    return a.truncate(n), b.truncate(n)


def test_first_kind_flag():
    fd = frontal_structure(normal_form(_coeffs(b2={0: 1.0}), mode="prefold"))
    assert fd.first_kind


def test_sigma_osculating_normal_is_orthogonal(folded_samples):
    for c in folded_samples:
        sigma = fold(normal_form(c)).restrict_x()
        n = sigma_osculating_normal(c)
        assert abs(n @ sigma.derivative_at_zero(1)) < 1e-12
        assert abs(n @ sigma.derivative_at_zero(2)) < 1e-12


def test_normal_form_values_match_direct(prefold_samples):
    from cuspidal.invariants import direct_report
    for c in prefold_samples:
        c0 = c.replace(b2=Jet1(np.r_[0.0, c.b2.coeffs[1:]], c.order))
        rep = direct_report(frontal_structure(normal_form(c0, "prefold")))
        for name, value in normal_form_values(c0).items():
            assert rep.value(name) == pytest.approx(value, rel=1e-9, abs=1e-12)


# -- tangent developables ---------------------------------------------------

def test_tangent_developable_substitution():
    u = Jet1.var(N)
    td = tangent_developable(u * u / 2, u ** 3 / 6)
    x, y = Jet2.var("x", N), Jet2.var("y", N)
    assert td.f.x.allclose(x + y)
    assert td.f.y.allclose(x * x / 2 + x * y)
    assert td.f.z.allclose(x ** 3 / 6 + x * x * y / 2)
    assert td.lam.allclose(y)


def test_tangent_developable_needs_curvature():
    u = Jet1.var(N)
    with pytest.raises(NotFirstKind):
        tangent_developable(u * 0.5, Jet1.constant(0.0, N))


def test_planar_curve_has_vanishing_projected_determinant():
    # |gamma' x gamma''| != 0 although det(g~', g~'') = 0
    u = Jet1.var(N)
    td = tangent_developable(u * u, Jet1.constant(0.0, N))
    assert td.gamma_det == 0.0 and td.first_kind_det > 0


def test_tangent_developable_zero_torsion_has_kappa_c_zero():
    from cuspidal.invariants import kappa_c, kappa_nu, kappa_t
    u = Jet1.var(N)
    td = tangent_developable(u * u / 2, u ** 4)
    fd = frontal_structure(td.adapted)
    assert abs(kappa_c(fd)[0]) < 1e-12
    assert abs(kappa_t(fd)[0]) < 1e-12
    assert kappa_nu(fd).is_zero(1e-12)
