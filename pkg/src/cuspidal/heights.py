"""Height functions on folded cuspidal edges and their contact classes.

Two routes classify every case: a *condition* route that evaluates the
coefficient conditions in closed form from the normal-form data, and a
*detector* route that runs :func:`detect_Ak_1d` (or a splitting reduction)
on the height function jets. Classifiers return :class:`ContactClass`
records that carry both outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import sympy as sp

from .errors import FactorizationFailure, HessianRankNotOne
from .folded import _jet_newton_root, double_point_curve, dpc_closed_forms, folded_surface
from .jet import Jet1, Jet2, MapGerm3
from .surfaces import EdgeCoefficients
from .tolerance import ZERO_RTOL, zero_status

__all__ = [
    "Direction3",
    "Ak1D",
    "ContactClass",
    "height_function",
    "detect_Ak_1d",
    "classify_along_dpc",
    "classify_along_edge",
    "splitting_reduce",
    "classify_height",
    "classify_folded_height",
    "stratum_direction",
    "STRATA",
    "verify_theta_generators",
    "NormalFormRow",
    "normal_form_table",
]


@dataclass(frozen=True)
class Direction3:
    """Unit vector ``v``; the plane through the origin orthogonal to it is ``pi_v``."""

    v1: float
    v2: float
    v3: float

    def __post_init__(self):
        n = self.v1**2 + self.v2**2 + self.v3**2
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"direction must be a unit vector (|v|^2 = {n!r})")

    @classmethod
    def normalized(cls, v1: float, v2: float, v3: float) -> "Direction3":
        v = np.array([v1, v2, v3], dtype=float)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise ValueError("zero vector has no direction")
        v = v / n
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.v1, self.v2, self.v3])


@dataclass(frozen=True)
class Ak1D:
    """Result of :func:`detect_Ak_1d`.

    ``k`` is set for an ``A_k`` singularity; ``flat_order`` when no coefficient
    up to the truncation order is nonzero; ``unresolved`` when a coefficient
    before the first clearly nonzero one sits in the tolerance band.
    """

    k: Optional[int] = None
    sign: int = 0
    flat_order: Optional[int] = None
    unresolved: bool = False
    leading: float = 0.0

    @property
    def label(self) -> str:
        if self.unresolved:
            return "Unresolved"
        if self.k is None:
            return f"FlatToOrder({self.flat_order})"
        return ak_label(self.k, self.sign)


def ak_label(k: int, sign: int) -> str:
    if k == 0:
        return "A0"
    if k % 2 == 0:
        return f"A{k}"
    return f"A{k}{'+' if sign > 0 else '-'}"


@dataclass
class ContactClass:
    """Contact of a plane with the surface, as seen by one height-function restriction.

    ``kind`` is one of ``A0`` (regular), ``A1+``, ``A1-``, ``A2``, ``A3+``,
    ``A3-``, ``A5+``, ``A5-``, ``TangentConeDegenerate`` or ``Unresolved``;
    ``order`` is the truncation order reached for an unresolved flat jet.
    ``reason`` records the geometric conditions that fired, ``condition`` and
    ``detector`` the labels produced by the two routes.
    """

    kind: str
    reason: dict = field(default_factory=dict)
    condition: Optional[str] = None
    detector: Optional[str] = None
    order: Optional[int] = None

    @property
    def agree(self) -> bool:
        return self.condition is None or self.detector is None or self.condition == self.detector

    def __str__(self) -> str:
        return self.kind


def height_function(phi: MapGerm3, v: Direction3) -> Jet2:
    """``H_v = phi . v``."""
    return phi.x * v.v1 + phi.y * v.v2 + phi.z * v.v3


def detect_Ak_1d(h: Jet1, tol: float = ZERO_RTOL, scale: Optional[float] = None) -> Ak1D:
    """``A_{m-1}`` for the first coefficient ``c[m]``, ``m >= 2``, that is clearly nonzero.

    A nonzero linear term gives ``A0``. ``scale`` defaults to the largest
    coefficient magnitude (at least 1).
    """
    c = h.coeffs
    if scale is None:
        scale = max(1.0, float(np.max(np.abs(c))) if c.size else 1.0)
    band = False
    for m in range(1, h.order + 1):
        status = zero_status(c[m], scale, tol)
        if status == "nonzero":
            if band:
                return Ak1D(unresolved=True, leading=float(c[m]))
            return Ak1D(k=m - 1, sign=1 if c[m] > 0 else -1, leading=float(c[m]))
        if status == "unresolved":
            band = True
    if band:
        return Ak1D(unresolved=True)
    return Ak1D(flat_order=h.order)


def _tier(value: float, terms) -> str:
    scale = max([abs(t) for t in terms] + [1e-300])
    return zero_status(value, scale)


def _merge(cond: Optional[str], det: Ak1D, reason: dict) -> ContactClass:
    dl = det.label
    if cond is None:
        kind = dl if det.k is not None else "Unresolved"
    elif cond == "Unresolved" or det.unresolved or cond != dl:
        kind = "Unresolved"
    else:
        kind = cond
    order = det.flat_order if kind == "Unresolved" else None
    return ContactClass(kind, reason, cond, dl, order)


def classify_along_dpc(c: EdgeCoefficients, v: Direction3) -> ContactClass:
    """Contact class of ``H_v`` restricted to the double point curve ``y -> (d(y), y)``.

    The condition route evaluates three tiers in order, on the coefficients of
    ``y^2, y^4, y^6`` of ``d_hat(y) . v``: ``-b1/b0' v1 + v2/2`` (tangent
    plane), ``d_hat''''(0) . v`` (osculating plane) and
    ``d_hat^(6)(0) . v`` whose third component is ``720 b2(0)^2``.
    """
    dpc = double_point_curve(c)
    closed = dpc_closed_forms(c)
    p1, q0, r0 = c.d("b0", 1), c.d("b1", 0), c.d("b2", 0)
    v1, v2, v3 = v.v1, v.v2, v.v3
    h4 = closed["d_hat_4"]
    h6 = dpc.d_hat.derivative_at_zero(6)
    h6[2] = 720.0 * r0**2

    t1_terms = (q0 / p1 * v1, 0.5 * v2)
    t1 = -t1_terms[0] + t1_terms[1]
    t2_terms = (h4[0] * v1, h4[1] * v2)
    t2 = sum(t2_terms)
    t3_terms = (h6[0] * v1, h6[1] * v2, h6[2] * v3)
    t3 = sum(t3_terms)
    tn = closed["tau_numerator"]
    tau_status = _tier(tn, (2 * c.b3.const * p1**2, 2 * p1 * c.d("b1", 1) * q0,
                            2 * q0**3 * c.d("a", 2), q0**2 * c.d("b0", 2)))
    reason = {
        "tangent_plane": _tier(t1, t1_terms),
        "osculating_plane": None,
        "tau_sing_nonzero": tau_status,
        "tiers": (float(t1), float(t2 / 24.0), float(t3 / 720.0)),
    }
    s1 = reason["tangent_plane"]
    if s1 == "nonzero":
        cond = ak_label(1, np.sign(t1))
        reason["tangent_plane"] = False
    elif s1 == "unresolved":
        cond = "Unresolved"
    else:
        reason["tangent_plane"] = True
        s2 = _tier(t2, t2_terms)
        if s2 == "nonzero":
            cond = ak_label(3, np.sign(t2))
            reason["osculating_plane"] = False
        elif s2 == "unresolved":
            cond = "Unresolved"
        else:
            reason["osculating_plane"] = True
            s3 = _tier(t3, t3_terms)
            cond = ak_label(5, np.sign(t3)) if s3 == "nonzero" else "Unresolved"
    h = dpc.d_hat.x * v1 + dpc.d_hat.y * v2 + dpc.d_hat.z * v3
    return _merge(cond, detect_Ak_1d(h), reason)


def classify_along_edge(c: EdgeCoefficients, v: Direction3) -> ContactClass:
    """Contact class of ``H_v(x, 0)`` along the folded cuspidal edge.

    With ``v1 != 0`` the restriction is regular (``A0``). Otherwise the tiers
    are ``a''/2 v2 + b0'^2 v3`` (osculating plane of the edge) and
    ``a'''/6 v2 + b0' b0'' v3``; beyond ``A2`` the conditions say nothing and
    only the detector speaks.
    """
    a2, a3 = c.d("a", 2), c.d("a", 3)
    p1, p2 = c.d("b0", 1), c.d("b0", 2)
    v1, v2, v3 = v.v1, v.v2, v.v3
    phi = folded_surface(c)
    h = (phi.x * v1 + phi.y * v2 + phi.z * v3).restrict_x()
    d1 = _tier(v1, (v1, v2, v3))
    t1_terms = (a2 / 2 * v2, p1**2 * v3)
    t2_terms = (a3 / 6 * v2, p1 * p2 * v3)
    t1, t2 = sum(t1_terms), sum(t2_terms)
    reason = {"osculating_plane": None, "tau_sigma_nonzero": None, "tiers": (float(v1), float(t1), float(t2))}
    if d1 == "nonzero":
        cond = "A0"
    elif d1 == "unresolved":
        cond = "Unresolved"
    else:
        s1 = _tier(t1, t1_terms)
        if s1 == "nonzero":
            cond = ak_label(1, np.sign(t1))
            reason["osculating_plane"] = False
        elif s1 == "unresolved":
            cond = "Unresolved"
        else:
            reason["osculating_plane"] = True
            s2 = _tier(t2, t2_terms)
            reason["tau_sigma_nonzero"] = s2 == "nonzero"
            if s2 == "nonzero":
                cond = "A2"
            elif s2 == "unresolved":
                cond = "Unresolved"
            else:
                cond = None
    return _merge(cond, detect_Ak_1d(h), reason)


def _rank(eigs: np.ndarray, scale: float, tol: float) -> int:
    return int(np.sum(np.abs(eigs) > tol * scale))


def splitting_reduce(h: Jet2, tol: float = ZERO_RTOL) -> Jet1:
    """Residual one-variable jet of a function with a rank-one Hessian.

    Coordinates are rotated so that the nondegenerate Hessian direction is
    ``x``; ``x = psi(y)`` solving ``dh/dx = 0`` is found by Newton iteration on
    jets, and ``h(psi(y), y)`` is returned.
    """
    H = h.hessian_at_zero()
    eigs, vecs = np.linalg.eigh(H)
    scale = max(1.0, h.max_abs())
    if _rank(eigs, scale, tol) != 1:
        raise HessianRankNotOne(f"Hessian eigenvalues {eigs}")
    i = int(np.argmax(np.abs(eigs)))
    e = vecs[:, i]
    f = np.array([-e[1], e[0]])
    n = h.order
    X, Y = Jet2.var("x", n), Jet2.var("y", n)
    g = h.compose2(e[0] * X + f[0] * Y, e[1] * X + f[1] * Y)
    psi, _ = _jet_newton_root(g.dx(), n)
    t = Jet1.var(psi.order)
    return g.compose(psi, t)


def classify_height(h: Jet2, tol: float = ZERO_RTOL) -> ContactClass:
    """Contact class of a two-variable function germ from its jet.

    Nonzero gradient: ``A0``. Rank-two Hessian: ``A1+`` (definite) or
    ``A1-`` (indefinite). Rank one: the splitting residual decides ``A_k``;
    a flat residual is ``Unresolved`` with the order reached. Rank zero is
    ``Unresolved`` (corank two).
    """
    scale = max(1.0, h.max_abs())
    grad = h.gradient_at_zero()
    if np.max(np.abs(grad)) > tol * scale:
        return ContactClass("A0", {"gradient": grad.tolist()}, detector="A0")
    eigs = np.linalg.eigvalsh(h.hessian_at_zero())
    rank = _rank(eigs, scale, tol)
    reason = {"hessian_eigenvalues": eigs.tolist(), "corank": 2 - rank}
    if rank == 2:
        kind = "A1+" if eigs[0] * eigs[1] > 0 else "A1-"
        return ContactClass(kind, reason, detector=kind)
    if rank == 0:
        return ContactClass("Unresolved", reason, order=2)
    det = detect_Ak_1d(splitting_reduce(h, tol), tol, scale)
    reason["residual"] = det.label
    if det.k is None:
        return ContactClass("Unresolved", reason, detector=det.label, order=det.flat_order)
    return ContactClass(det.label, reason, detector=det.label)


def classify_folded_height(c: EdgeCoefficients, v: Direction3) -> ContactClass:
    """Two-variable contact class of ``H_v`` on the folded germ.

    For ``v = (0, 0, +-1)`` the height function is a square and the
    splitting residual is flat: reported as ``TangentConeDegenerate``.
    """
    h = height_function(folded_surface(c), v)
    res = classify_height(h)
    cone = abs(v.v1) <= 1e-12 and abs(v.v2) <= 1e-12
    res.condition = "TangentConeDegenerate" if cone else None
    if cone and res.kind == "Unresolved" and res.reason.get("corank") == 1:
        # a flat corank-one residual is what the detector sees on the cone
        res.kind = res.detector = "TangentConeDegenerate"
    elif cone:
        res.kind = "Unresolved"
    return res


STRATA = ("generic", "dpc-tangent", "dpc-osculating", "edge-osculating", "tangent-cone")


def stratum_direction(c: EdgeCoefficients, stratum: str) -> Direction3:
    """The direction selecting ``stratum``, built from closed forms.

    ``dpc-tangent`` contains the limiting tangent ``d_hat''(0)``,
    ``dpc-osculating`` and ``tangent-cone`` use the normal ``(0, 0, 1)`` of the
    plane spanned by ``d_hat''(0)`` and ``d_hat''''(0)``, and
    ``edge-osculating`` the normal ``(0, -2 b0'(0)^2, a''(0))``.
    """
    p1, q0, a2 = c.d("b0", 1), c.d("b1", 0), c.d("a", 2)
    if stratum == "generic":
        return Direction3.normalized(0.0, 1.0, 1.0)
    if stratum == "dpc-tangent":
        return Direction3.normalized(1.0, 2.0 * q0 / p1, 0.0)
    if stratum in ("dpc-osculating", "tangent-cone"):
        return Direction3(0.0, 0.0, 1.0)
    if stratum == "edge-osculating":
        return Direction3.normalized(0.0, -2.0 * p1**2, a2)
    raise ValueError(f"unknown stratum {stratum!r}; choose from {', '.join(STRATA)}")


# -- tangency to the model cuspidal cross-cap -------------------------------

_u, _v, _w = sp.symbols("u v w")
MODEL_EQUATION = _w**2 - _u**2 * _v**3

GENERATORS = {
    "xi1": (3 * _u, -2 * _v, sp.Integer(0)),
    "xi2": (sp.Integer(0), 2 * _v, 3 * _w),
    "xi3": (sp.Integer(0), 2 * _w, 3 * _u**2 * _v**2),
    "xi4": (_w, sp.Integer(0), _u * _v**3),
}


def _apply(field_, h):
    return sp.expand(sum(c * sp.diff(h, x) for c, x in zip(field_, (_u, _v, _w))))


def verify_theta_generators() -> dict:
    """Exact check that each generator ``xi`` satisfies ``xi h = lambda h``.

    Returns ``{name: lambda}`` including the Euler field ``xi_e``, which must
    equal ``(xi1 + 4 xi2) / 3 = u d/du + 2v d/dv + 4w d/dw`` with
    ``lambda = 8``. Raises :class:`FactorizationFailure` on any remainder.
    """
    h = MODEL_EQUATION
    out = {}
    fields_ = dict(GENERATORS)
    euler = tuple(sp.expand((a + 4 * b) / 3) for a, b in zip(GENERATORS["xi1"], GENERATORS["xi2"]))
    if euler != (_u, 2 * _v, 4 * _w):
        raise FactorizationFailure(f"(xi1 + 4 xi2)/3 = {euler}, not the Euler field")
    fields_["xi_e"] = euler
    for name, fld in fields_.items():
        q, r = sp.div(_apply(fld, h), h, _u, _v, _w)
        if r != 0:
            raise FactorizationFailure(f"{name} h leaves remainder {r}")
        out[name] = sp.simplify(q)
    if out["xi_e"] != 8:
        raise FactorizationFailure(f"Euler field gives lambda = {out['xi_e']}")
    return out


@dataclass(frozen=True)
class NormalFormRow:
    id: str
    normal_form: str
    codim: int
    deformation: str
    note: str = ""


def normal_form_table() -> list:
    """Submersion germs on the model cross-cap of codimension at most two."""
    return [
        NormalFormRow("u+-v", "u ± v", 0, "u ± v"),
        NormalFormRow("u+-v2", "u ± v^2", 1, "u ± v^2 + a1 v"),
        NormalFormRow("u+-v3", "u ± v^3", 2, "u ± v^3 + a1 v + a2 v^2"),
        NormalFormRow("v+-u2", "±v ± u^2", 1, "±v ± u^2 + a1 u"),
        NormalFormRow("v+u3", "±v + u^3", 2, "±v + u^3 + a1 u + a2 u^2"),
        NormalFormRow(
            "w", "w ± u^2 + buv + cv^2, c != 0, b^2/4", 2,
            "w ± u^2 + buv + cv^2 + a1 u + a2 v",
            "b, c are moduli; the codimension is that of the stratum",
        ),
    ]
