import numpy as np
import pytest

from cuspidal.discriminants import (
    LABELS,
    NORMAL_FORM_IDS,
    Branch,
    DiscriminantSheet,
    back_substitute,
    containment_residual,
    dpc_is_even,
    export_ply,
    export_point_cloud,
    read_point_cloud,
    sheet,
)
from cuspidal.errors import InvalidModuli

SIGNS = [{"s": s, "sigma": g} for s in (1, -1) for g in (1, -1)]


@pytest.mark.parametrize("nf", NORMAL_FORM_IDS)
@pytest.mark.parametrize("label", LABELS)
@pytest.mark.parametrize("signs", SIGNS)
def test_back_substitution(nf, label, signs):
    sh = sheet(nf, label, signs, grid=16)
    res = back_substitute(sh)
    assert res.size == len(sh.samples)
    if res.size:
        assert res.max() <= 1e-10


def test_regular_rows_have_empty_pd_and_ce():
    for label in ("PD", "CE"):
        sh = sheet("u+-v", label)
        assert not sh.branches and sh.empty_reason
    dpc = sheet("u+-v", "DPC", grid=5)
    assert np.allclose(dpc.samples[:, 2], 0.0)


def test_fold_row_sample():
    # P(x) = x^2 + a1 x + a2 y^2 at y = 0 with P' = 0 at x = 0.5
    sh = sheet("v+-u2", "PD", grid=5)
    i = np.flatnonzero(np.isclose(sh.witnesses[:, 0], 0.5))[0]
    a1, a2, value = sh.samples[i]
    assert (a1, value) == pytest.approx((-1.0, -0.25))
    assert a2 == pytest.approx(sh.witnesses[i, 3])


def test_numeric_critical_points_for_w_row():
    # central differences of F(x, y) = G(x, y^2, x y^3) at each PD witness
    s, b, c = 1, 0.5, 1.0
    sh = sheet("w", "PD", {"s": s, "b": b, "c": c}, grid=9)

    def F(x, y, a1, a2):
        u, v, w = x, y * y, x * y**3
        return w + s * u * u + b * u * v + c * v * v + a1 * u + a2 * v

    h = 1e-6
    for (x, y, a1, a2), (_, _, value) in zip(sh.witnesses, sh.samples):
        fx = (F(x + h, y, a1, a2) - F(x - h, y, a1, a2)) / (2 * h)
        fy = (F(x, y + h, a1, a2) - F(x, y - h, a1, a2)) / (2 * h)
        assert abs(fx) < 1e-8 and abs(fy) < 1e-8
        assert F(x, y, a1, a2) == pytest.approx(value, abs=1e-12)


@pytest.mark.parametrize("signs", SIGNS)
def test_ce_contained_in_pd(signs):
    ce = sheet("w", "CE", dict(signs, b=0.3, c=-0.7), grid=12)
    assert containment_residual(ce, "PD").max() <= 1e-12


def test_dpc_evenness():
    assert all(dpc_is_even(nf) for nf in NORMAL_FORM_IDS)
    for nf in ("u+-v2", "u+-v3"):
        sh = sheet(nf, "DPC", grid=8)
        branches = []
        for br in sh.branches:
            wit = br.witnesses.copy()
            wit[:, 1] *= -1
            branches.append(Branch(br.id, br.samples, wit, br.shape))
        flipped = DiscriminantSheet("DPC", nf, sh.params, branches)
        assert back_substitute(flipped).max() <= 1e-12


@pytest.mark.parametrize("c", [0.0, 0.0625])
def test_invalid_moduli(c):
    with pytest.raises(InvalidModuli):
        sheet("w", "PD", {"b": 0.5, "c": c})


def test_negative_sign_moduli_curve():
    with pytest.raises(InvalidModuli):
        sheet("w", "PD", {"s": -1, "b": 0.5, "c": -0.0625})
    sheet("w", "PD", {"s": -1, "b": 0.5, "c": 0.0625}, grid=4)


def test_point_cloud_round_trip(tmp_path):
    sh = sheet("v+u3", "CE", grid=10)
    path = export_point_cloud(sh, tmp_path / "ce.txt")
    lines = path.read_text().splitlines()
    assert lines[0] == "# discriminant CE v+u3" and len(lines) == 101
    label, nf, samples = read_point_cloud(path)
    assert (label, nf) == ("CE", "v+u3")
    assert np.allclose(samples, sh.samples, rtol=1e-11, atol=1e-12)


def test_empty_sheet_file(tmp_path):
    path = export_point_cloud(sheet("u+-v", "PD"), tmp_path / "empty.txt")
    assert path.read_text() == "# discriminant PD u+-v\n"
    assert read_point_cloud(path)[2].shape == (0, 3)


def test_ply_mesh(tmp_path):
    sh = sheet("w", "PD", grid=6)
    text = export_ply(sh, tmp_path / "pd.ply").read_text().splitlines()
    assert text[0] == "ply"
    n_faces = sum(2 * (br.shape[0] - 1) * (br.shape[1] - 1) for br in sh.branches)
    assert f"element face {n_faces}" in text
    assert f"element vertex {len(sh.samples)}" in text
