import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cuspidal.folded import folded_surface, with_tau_sing_zero
from cuspidal.heights import (
    STRATA,
    Direction3,
    classify_along_dpc,
    classify_along_edge,
    classify_folded_height,
    classify_height,
    detect_Ak_1d,
    height_function,
    normal_form_table,
    splitting_reduce,
    stratum_direction,
    verify_theta_generators,
)
from cuspidal.jet import Jet1, Jet2
from cuspidal.surfaces import EdgeCoefficients, sigma_osculating_normal

N = 8


def _poly1(terms, order=N):
    c = np.zeros(order + 1)
    for k, v in terms.items():
        c[k] = v
    return Jet1(c, order)


@pytest.mark.parametrize("terms, label", [
    ({2: 1.0}, "A1+"),
    ({4: -1.0, 6: 1.0}, "A3-"),
    ({6: 1.0}, "A5+"),
    ({3: 2.0}, "A2"),
    ({1: 0.5, 2: 3.0}, "A0"),
])
def test_detect_Ak_1d(terms, label):
    assert detect_Ak_1d(_poly1(terms)).label == label


def test_detect_flat_and_band():
    assert detect_Ak_1d(_poly1({})).label == f"FlatToOrder({N})"
    assert detect_Ak_1d(_poly1({2: 5e-7, 4: 1.0})).label == "Unresolved"
    assert detect_Ak_1d(_poly1({2: 1e-8, 4: 1.0})).label == "A3+"


@given(st.integers(2, 7), st.floats(0.1, 5.0), st.sampled_from([1, -1]),
       st.lists(st.floats(-3, 3), min_size=N + 1, max_size=N + 1))
def test_detect_leading_order(m, scale, sign, tail):
    c = np.zeros(N + 1)
    c[m] = sign * scale
    c[m + 1:] = tail[m + 1:]
    res = detect_Ak_1d(Jet1(c, N))
    assert res.k == m - 1
    if m % 2 == 0:
        assert res.sign == sign


def _poly2(terms, order=N):
    return Jet2.from_dict(terms, order)


def test_splitting_reduce_simple():
    res = detect_Ak_1d(splitting_reduce(_poly2({(2, 0): 1.0, (0, 4): 1.0})))
    assert res.label == "A3+"
    assert classify_height(_poly2({(2, 0): 1.0})).kind == "Unresolved"


@pytest.mark.parametrize("b, c", [(0.5, 1.0), (1.0, 0.1), (-2.0, 0.5), (0.3, -0.4)])
def test_splitting_reduce_against_completing_the_square(b, c):
    # x^2 + b x y^2 + c y^4 + x y^3: residual leads with (c - b^2/4) y^4
    h = _poly2({(2, 0): 1.0, (1, 2): b, (0, 4): c, (1, 3): 1.0})
    r = splitting_reduce(h)
    assert r[4] == pytest.approx(c - b * b / 4, rel=1e-12)
    want = "A3+" if c - b * b / 4 > 0 else "A3-"
    assert classify_height(h).kind == want


def test_classify_height_basic():
    assert classify_height(_poly2({(1, 0): 1.0})).kind == "A0"
    assert classify_height(_poly2({(2, 0): 1.0, (0, 2): 2.0})).kind == "A1+"
    assert classify_height(_poly2({(2, 0): 1.0, (0, 2): -2.0})).kind == "A1-"
    res = classify_height(_poly2({(3, 0): 1.0, (0, 3): 1.0}))
    assert res.kind == "Unresolved" and res.reason["corank"] == 2


# -- folded germs -----------------------------------------------------------

def test_gradient_vanishes_iff_v1_zero(folded_samples):
    rng = np.random.default_rng(7)
    for c in folded_samples:
        phi = folded_surface(c)
        for _ in range(5):
            v = rng.normal(size=3)
            g = height_function(phi, Direction3.normalized(*v)).gradient_at_zero()
            assert not np.all(g == 0.0)
            v[0] = 0.0
            g = height_function(phi, Direction3.normalized(*v)).gradient_at_zero()
            assert np.all(g == 0.0)


def test_height_in_first_direction_is_x(folded_samples):
    h = height_function(folded_surface(folded_samples[0]), Direction3(1.0, 0.0, 0.0))
    assert h.allclose(Jet2.var("x", h.order))


def test_tangent_cone_direction_is_degenerate(folded_samples):
    for c in folded_samples:
        assert classify_folded_height(c, Direction3(0.0, 0.0, 1.0)).kind == "TangentConeDegenerate"
        h = height_function(folded_surface(c), Direction3(0.0, 0.0, 1.0))
        assert h.allclose(folded_surface(c).z)


def test_strata(folded_samples):
    for c in folded_samples:
        gen = classify_along_dpc(c, stratum_direction(c, "generic"))
        assert gen.kind in ("A1+", "A1-") and gen.agree
        tan = classify_along_dpc(c, stratum_direction(c, "dpc-tangent"))
        assert tan.kind in ("A3+", "A3-")
        osc = classify_along_dpc(c, stratum_direction(c, "dpc-osculating"))
        assert osc.kind == "A5+"
        edge = classify_along_edge(c, stratum_direction(c, "edge-osculating"))
        assert edge.kind == "A2" and edge.reason["tau_sigma_nonzero"]
        assert classify_folded_height(c, stratum_direction(c, "edge-osculating")).kind == "A2"


def test_edge_osculating_direction(folded_samples):
    for c in folded_samples:
        v = stratum_direction(c, "edge-osculating").as_array()
        n = sigma_osculating_normal(c)
        assert np.allclose(v, n / np.linalg.norm(n))


def test_vanishing_tau_sing_moves_A5_into_tangent_plane(folded_samples):
    for c in folded_samples[:4]:
        c0 = with_tau_sing_zero(c)
        res = classify_along_dpc(c0, stratum_direction(c0, "dpc-tangent"))
        assert res.kind in ("A5+", "A5-") and res.agree


def test_dual_path_agreement_random(folded_samples):
    rng = np.random.default_rng(11)
    for c in folded_samples:
        for _ in range(10):
            v = rng.normal(size=3)
            v[0] = 0.0 if rng.random() < 0.5 else v[0]
            v = Direction3.normalized(*v)
            for res in (classify_along_dpc(c, v), classify_along_edge(c, v)):
                if res.kind != "Unresolved":
                    assert res.agree


def test_unknown_stratum(folded_samples):
    with pytest.raises(ValueError):
        stratum_direction(folded_samples[0], "nowhere")
    assert "tangent-cone" in STRATA


def test_direction_must_be_unit():
    with pytest.raises(ValueError):
        Direction3(1.0, 1.0, 0.0)


# -- model cross-cap --------------------------------------------------------

def test_theta_generators():
    lam = verify_theta_generators()
    assert lam == {"xi1": 0, "xi2": 6, "xi3": 0, "xi4": 0, "xi_e": 8}


def test_normal_form_table():
    rows = {r.id: r for r in normal_form_table()}
    assert rows["u+-v2"].codim == 1 and rows["u+-v2"].deformation == "u ± v^2 + a1 v"
    assert rows["v+u3"].deformation == "±v + u^3 + a1 u + a2 u^2"
    assert "moduli" in rows["w"].note
