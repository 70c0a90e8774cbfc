import numpy as np
import pytest

from cuspidal.folded import (
    closed_form_invariants,
    closed_form_values,
    double_point_curve,
    dpc_closed_forms,
    dpc_derivatives,
    dpc_limits,
    folded_surface,
    richardson_limit,
    sigma_curve_closed,
    sigma_relations,
    with_tau_sing_zero,
)
from cuspidal.errors import DegenerateDPC
from cuspidal.invariants import (
    curve_invariants_regular,
    curve_invariants_singular,
    kappa_c,
    kappa_nu,
    kappa_s,
    kappa_t,
)
from cuspidal.jet import Jet1
from cuspidal.surfaces import EdgeCoefficients, frontal_structure, normal_form
from cuspidal.tolerance import rel_err

DIRECT = {"kappa_s": kappa_s, "kappa_nu": kappa_nu, "kappa_t": kappa_t, "kappa_c": kappa_c}


def _direct(c):
    fd = frontal_structure(folded_surface(c))
    return {name: fn(fd) for name, fn in DIRECT.items()}


def test_closed_values_match_direct(folded_samples):
    for c in folded_samples:
        direct = _direct(c)
        for key, value in closed_form_values(c).items():
            name, k = key.rstrip("'"), key.count("'")
            assert rel_err(value, direct[name].derivative_at_zero(k)) <= 1e-9, key


def test_x_dependent_displays_through_degree_two(folded_samples):
    for c in folded_samples:
        direct = _direct(c)
        rep = closed_form_invariants(c)
        for name in DIRECT:
            got = getattr(rep, name).coeffs[:3]
            want = direct[name].coeffs[:3]
            assert np.allclose(got, want, rtol=1e-9, atol=1e-12), name


def test_closed_values_specific_entries(folded_samples):
    for c in folded_samples:
        v = closed_form_values(c)
        p1, q0, a2, a3 = c.d("b0", 1), c.d("b1", 0), c.d("a", 2), c.d("a", 3)
        p2 = c.d("b0", 2)
        assert v["kappa_s'"] == pytest.approx(8 * q0 * p1**3 + a3, rel=1e-12)
        assert v["kappa_nu'"] == pytest.approx(2 * p1 * (-2 * q0 * a2 + 3 * p2), rel=1e-12, abs=1e-14)


def test_zero_higher_coefficients():
    c = EdgeCoefficients.from_taylor(8, b0={1: 0.9}, b2={0: 0.4})
    v = closed_form_values(c)
    for key in ("kappa_s'", "kappa_nu'", "kappa_t'", "kappa_s''", "kappa_t''"):
        assert v[key] == 0.0


def test_sigma_relations(folded_samples):
    for c in folded_samples:
        direct = {f"{n}{chr(39) * k}": j.derivative_at_zero(k)
                  for n, j in _direct(c).items() for k in range(2)}
        ksq, tau = sigma_relations(direct)
        kappa, tsig = curve_invariants_regular(folded_surface(c).restrict_x())
        assert rel_err(kappa**2, ksq) <= 1e-9
        assert rel_err(tsig, tau) <= 1e-9
        assert sigma_curve_closed(c) == pytest.approx((kappa, tsig), rel=1e-9)


# -- double point curve -----------------------------------------------------

def test_dpc_structure(folded_samples):
    for c in folded_samples:
        dpc = double_point_curve(c)
        assert np.all(np.abs(dpc.d.coeffs[1::2]) <= 1e-11)
        assert dpc.d[0] == 0.0
        assert np.allclose(dpc.d_hat.derivative_at_zero(1), 0.0, atol=1e-12)
        assert np.allclose(dpc.d_hat.derivative_at_zero(3), 0.0, atol=1e-10)
        t = Jet1.var(dpc.d.order)
        phi, f = folded_surface(c), normal_form(c)
        assert np.max(np.abs(phi.z.compose(dpc.d, t).coeffs - phi.z.compose(dpc.d, -t).coeffs)) <= 1e-11
        # before folding the two sheets meet with opposite heights
        assert np.max(np.abs(f.z.compose(dpc.d, t).coeffs + f.z.compose(dpc.d, -t).coeffs)) <= 1e-11


def test_dpc_closed_forms(folded_samples):
    for c in folded_samples:
        dpc = double_point_curve(c)
        closed = dpc_closed_forms(c)
        der = dpc_derivatives(dpc)
        assert rel_err(dpc.d2, closed["d2"]) <= 1e-9
        assert rel_err(dpc.d4, closed["d4"]) <= 1e-9
        assert np.allclose(der.d_hat_2, closed["d_hat_2"], rtol=1e-9, atol=1e-12)
        assert np.allclose(der.d_tilde_2, closed["d_tilde_2"], rtol=1e-9, atol=1e-12)
        assert np.allclose(der.d_tilde_3, closed["d_tilde_3"], rtol=1e-9, atol=1e-12)
        assert np.allclose(der.d_tilde_4, closed["d_tilde_4"], rtol=1e-9, atol=1e-10)
        assert der.d_hat_6[2] == pytest.approx(closed["d_hat_6_z"], rel=1e-9)


def test_dhat4_is_twelve_times_reference_vector(folded_samples):
    # the fourth derivative equals the reference vector scaled by 12 = 4!/2
    for c in folded_samples:
        der = dpc_derivatives(double_point_curve(c))
        closed = dpc_closed_forms(c)
        assert np.allclose(der.d_hat_4, closed["d_hat_4"], rtol=1e-9, atol=1e-10)
        assert np.allclose(der.d_hat_4, 12 * closed["d_hat_4_printed"], rtol=1e-9, atol=1e-10)
        assert np.allclose(der.d_hat_4, der.d_tilde_4, rtol=1e-12, atol=1e-12)


def test_dpc_trivial_cases():
    c = EdgeCoefficients.from_taylor(8, a={2: 0.5}, b0={1: 0.8}, b2={0: 0.6})
    dpc = double_point_curve(c)
    assert dpc.d.is_zero(1e-14)
    c = EdgeCoefficients.from_taylor(8, a={2: 0.5}, b0={1: 0.8}, b1={1: 0.3}, b2={0: 0.6},
                                     b3={(0, 0): 0.2})
    der = dpc_derivatives(double_point_curve(c))
    assert np.allclose(der.d_hat_2, [0, 1, 0])


def test_limits_against_exact_constants(folded_samples):
    for c in folded_samples[:6]:
        lim = dpc_limits(double_point_curve(c), c)
        assert rel_err(lim.kappa_sq_numeric, lim.kappa_sq_limit) <= 1e-4
        assert rel_err(lim.tau_numeric, lim.tau_limit) <= 1e-4
        # the reference quotients differ by constant factors only
        assert lim.kappa_sq_quotient * 4 == pytest.approx(lim.kappa_sq_limit, rel=1e-12)
        assert lim.tau_quotient / 4 == pytest.approx(lim.tau_limit, rel=1e-12)


def test_tau_display_matches_reference_quotient_when_a2_vanishes(folded_samples):
    for c in folded_samples[:4]:
        coeffs = c.a.coeffs.copy()
        coeffs[2] = 0.0
        c0 = c.replace(a=Jet1(coeffs, c.order))
        lim = dpc_limits(double_point_curve(c0), c0)
        assert lim.tau_display == pytest.approx(lim.tau_quotient, rel=1e-9)


def test_lim_kappa_zero_without_b1_b3():
    c = EdgeCoefficients.from_taylor(8, a={2: 0.5, 3: 0.2}, b0={1: 0.8, 2: 0.1}, b2={0: 0.6})
    dpc = double_point_curve(c)
    # the fourth derivative of d_hat vanishes, so the curvature quotient is zero
    assert dpc.d_hat.derivative_at_zero(4) == pytest.approx([0, 0, 0], abs=1e-12)


def test_richardson_limit_on_known_function():
    assert richardson_limit(lambda h: np.sin(h) / h) == pytest.approx(1.0, abs=1e-12)


def test_tau_sing_zero_construction(folded_samples):
    for c in folded_samples[:4]:
        c0 = with_tau_sing_zero(c)
        assert abs(dpc_closed_forms(c0)["tau_sing"]) < 1e-12
        dpc = double_point_curve(c0)
        assert abs(curve_invariants_singular(dpc.d_tilde).tau_sing) < 1e-9
        # tau_sing = 0 exactly when the second and fourth derivatives of d_hat are parallel
        with pytest.raises(DegenerateDPC):
            dpc_derivatives(dpc)


def test_tau_display_pole_is_nan():
    c = EdgeCoefficients.from_taylor(8, a={2: 0.6}, b0={1: 0.8}, b1={0: 0.5}, b2={0: 0.7})
    assert dpc_closed_forms(c)["N"] == 0.0
    lim = dpc_limits(double_point_curve(c), c)
    assert np.isnan(lim.tau_display)
    assert rel_err(lim.tau_numeric, lim.tau_limit) <= 1e-4
