"""Direct evaluation of the differential-geometric invariants from jets.

All invariants along the singular curve are returned as :class:`Jet1` in the
parameter ``t`` of ``t -> (t, 0)``; their derivatives at the origin are read
off the coefficients (``k! * c[k]``), never finite-differenced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NotApplicable, RegularityViolation
from .jet import Curve3, Jet1, Jet2, VectorField2, align, cross, det3, directional_derivative, dot
from .surfaces import FrontalData

__all__ = [
    "InvariantReport",
    "BiasResult",
    "SingularCurveInvariants",
    "kappa_s",
    "kappa_nu",
    "kappa_c",
    "kappa_t",
    "bias_and_secondary",
    "curve_invariants_regular",
    "frenet_jets",
    "curve_invariants_singular",
    "direct_report",
]

INVARIANT_NAMES = ("kappa_s", "kappa_nu", "kappa_t", "kappa_c")


def _singular_curve(fd: FrontalData):
    g = fd.f.restrict_x()
    g1 = g.derivative()
    g2 = g1.derivative()
    nu = fd.nu.restrict_x()
    return align(g1, g2, nu)


def kappa_s(fd: FrontalData) -> Jet1:
    """Singular curvature along the x-axis.

    The sign factor ``sgn(d lam(eta))`` is +1 for germs produced by
    :func:`~cuspidal.surfaces.frontal_structure`.
    """
    g1, g2, nu = _singular_curve(fd)
    sign = 1.0 if fd.eta_lambda0 >= 0 else -1.0
    return det3(g1, g2, nu) * g1.norm_sq().pow_rational(-3, 2) * sign


def kappa_nu(fd: FrontalData) -> Jet1:
    """Limiting normal curvature along the x-axis."""
    g1, g2, nu = _singular_curve(fd)
    return dot(g2, nu) / g1.norm_sq()


def _adapted_derivatives(fd: FrontalData):
    f = fd.f
    xf = fd.xi.apply(f)
    e2 = directional_derivative(f, fd.eta, 2)
    e3 = fd.eta.apply(e2)
    xe2 = fd.xi.apply(e2)
    x2 = fd.xi.apply(xf)
    vecs = [v.restrict_x() for v in (xf, e2, e3, xe2, x2)]
    return align(*vecs)


def kappa_c(fd: FrontalData) -> Jet1:
    """Cuspidal curvature ``|xi f|^(3/2) det(xi f, eta^2 f, eta^3 f) / |xi f x eta^2 f|^(5/2)``."""
    xf, e2, e3, _, _ = _adapted_derivatives(fd)
    cr = cross(xf, e2).norm_sq()
    return (
        xf.norm_sq().pow_rational(3, 4)
        * det3(xf, e2, e3)
        * cr.pow_rational(-5, 4)
    )


def kappa_t(fd: FrontalData) -> Jet1:
    """Cusp-directional torsion along the x-axis.

    ``det(xi f, eta^2 f, xi eta^2 f) / |xi f x eta^2 f|^2
    - det(xi f, eta^2 f, xi^2 f) <xi f, eta^2 f> / (|xi f|^2 |xi f x eta^2 f|^2)``
    """
    xf, e2, _, xe2, x2 = _adapted_derivatives(fd)
    cr = cross(xf, e2).norm_sq().recip()
    return det3(xf, e2, xe2) * cr - det3(xf, e2, x2) * dot(xf, e2) * cr / xf.norm_sq()


@dataclass(frozen=True)
class BiasResult:
    """Bias ``B``, secondary cuspidal curvature ``kappa_c_r`` and the ratio ``l``.

    ``alpha``, ``beta`` are the coefficients of the null-vector correction
    ``eta~ = eta + (alpha y + beta y^2 + extra) xi`` that was used.
    """

    B: float
    kappa_c_r: float
    l: float
    alpha: float
    beta: float
    parallel_residual: float


def _modified_null_field(fd: FrontalData, corr: Jet2) -> VectorField2:
    xi, eta = fd.xi, fd.eta
    u, v, cu, cv, corr = align(eta.u_comp, eta.v_comp, xi.u_comp, xi.v_comp, corr)
    return VectorField2(u + corr * cu, v + corr * cv)


def bias_and_secondary(
    fd: FrontalData,
    extra: Optional[Jet2] = None,
    gate_tol: float = 1e-8,
) -> BiasResult:
    """Bias and secondary cuspidal curvature at the origin.

    The null field is corrected to ``eta~ = eta + (alpha y + beta y^2 + extra) xi``
    with ``alpha, beta`` fixed by ``xi f . eta~^2 f = xi f . eta~^3 f = 0`` at 0.
    ``extra`` adds further terms (of y-order >= 3, or divisible by ``x y``)
    that leave those constraints solvable; the result must not depend on it.
    Only defined where the cuspidal curvature vanishes at the origin.
    """
    kc = kappa_c(fd)
    if abs(kc[0]) > gate_tol * (1.0 + abs(kc.derivative_at_zero(1) if kc.order else 0.0)):
        raise NotApplicable(
            f"cuspidal curvature is {kc[0]:.3e} at the origin; bias needs it to vanish"
        )
    f = fd.f
    n = f.order
    y = Jet2.var("y", n)
    base = extra.truncate(n) if extra is not None else Jet2.constant(0.0, n)
    xf0 = fd.xi.apply(f).const()

    def field(alpha, beta):
        return _modified_null_field(fd, base + alpha * y + beta * y * y)

    def constraint(k, alpha, beta):
        ek = directional_derivative(f, field(alpha, beta), k)
        return float(np.dot(xf0, ek.const()))

    # each constraint is affine in the coefficient it determines
    c0, c1 = constraint(2, 0.0, 0.0), constraint(2, 1.0, 0.0)
    alpha = -c0 / (c1 - c0)
    c0, c1 = constraint(3, alpha, 0.0), constraint(3, alpha, 1.0)
    beta = -c0 / (c1 - c0)

    et = field(alpha, beta)
    e = {}
    g = f
    for k in range(1, 6):
        g = et.apply(g)
        e[k] = g.const()
    e2, e3, e4, e5 = e[2], e[3], e[4], e[5]
    l = float(np.dot(e3, e2) / np.dot(e2, e2))
    resid = float(np.linalg.norm(e3 - l * e2))
    xe2 = float(np.linalg.norm(np.cross(xf0, e2)))
    nx = float(np.linalg.norm(xf0))
    B = nx**2 * np.linalg.det(np.array([xf0, e2, e4])) / xe2**3
    kcr = (
        nx**2.5
        * np.linalg.det(np.array([xf0, e2, 3.0 * e5 - 10.0 * l * e4]))
        / xe2**3.5
    )
    return BiasResult(float(B), float(kcr), l, alpha, beta, resid)


def curve_invariants_regular(gamma: Curve3, tol: float = 1e-12):
    """Curvature and torsion at 0 of a regular space curve."""
    d1, d2, d3 = (gamma.derivative_at_zero(k) for k in (1, 2, 3))
    n1 = np.linalg.norm(d1)
    if n1 <= tol:
        raise RegularityViolation("curve is singular at the origin")
    c = np.cross(d1, d2)
    nc = np.linalg.norm(c)
    kappa = nc / n1**3
    tau = float(np.dot(c, d3) / nc**2) if nc > tol else float("nan")
    return float(kappa), tau


def frenet_jets(gamma: Curve3):
    """Curvature and torsion of a regular curve as series in its parameter."""
    d1 = gamma.derivative()
    d2 = d1.derivative()
    d3 = d2.derivative()
    d1, d2, d3 = (v.truncate(d3.order) for v in (d1, d2, d3))
    c = cross(d1, d2)
    csq = c.norm_sq()
    kappa = csq.sqrt() * d1.norm_sq().pow_rational(-3, 2)
    tau = dot(c, d3) / csq
    return kappa, tau


@dataclass(frozen=True)
class SingularCurveInvariants:
    """Invariants of a singular space curve; ``kind`` is ``A``, ``(2,3)`` or ``degenerate``."""

    kind: str
    kappa_sing: float = float("nan")
    tau_sing: float = float("nan")
    sigma_sing: float = float("nan")


def curve_invariants_singular(gamma: Curve3, tol: float = 1e-12) -> SingularCurveInvariants:
    d1 = gamma.derivative_at_zero(1)
    if np.linalg.norm(d1) > tol:
        raise RegularityViolation("curve is regular at the origin")
    d2, d3, d4 = (gamma.derivative_at_zero(k) for k in (2, 3, 4))
    n2sq = float(np.dot(d2, d2))
    if n2sq <= tol**2:
        return SingularCurveInvariants("degenerate")
    c23 = np.cross(d2, d3)
    nc = float(np.linalg.norm(c23))
    kappa = nc / n2sq**1.25
    if nc <= tol:
        return SingularCurveInvariants("A", kappa)
    tau = np.sqrt(np.sqrt(n2sq)) * np.linalg.det(np.array([d2, d3, d4])) / nc**2
    sigma = (
        np.dot(c23, np.cross(d2, d4)) - 2.0 * nc**2 * np.dot(d2, d3) / n2sq
    ) / n2sq**2.75
    return SingularCurveInvariants("(2,3)", kappa, float(tau), float(sigma))


@dataclass
class InvariantReport:
    """Invariants of a frontal germ at the origin, tagged by how they were obtained.

    ``kappa_*`` are series along the singular curve; the remaining entries are
    numbers at the origin. ``provenance`` maps entry names to ``direct`` or
    ``closed-form``.
    """

    kappa_s: Optional[Jet1] = None
    kappa_nu: Optional[Jet1] = None
    kappa_t: Optional[Jet1] = None
    kappa_c: Optional[Jet1] = None
    B: Optional[float] = None
    kappa_c_r: Optional[float] = None
    l: Optional[float] = None
    curve_kappa: Optional[float] = None
    curve_tau: Optional[float] = None
    sing_kappa: Optional[float] = None
    sing_tau: Optional[float] = None
    sing_sigma: Optional[float] = None
    provenance: dict = field(default_factory=dict)

    def value(self, name: str, k: int = 0) -> float:
        """``k``-th derivative at 0 of a series entry, or the scalar entry itself."""
        entry = getattr(self, name)
        if isinstance(entry, Jet1):
            return entry.derivative_at_zero(k)
        if k:
            raise ValueError(f"{name} is a scalar")
        return entry

    def scalars(self, max_derivative: int = 2) -> dict:
        """Flat ``{"kappa_s''": value, "B": value, ...}`` view."""
        out = {}
        for name in INVARIANT_NAMES:
            j = getattr(self, name)
            if j is None:
                continue
            for k in range(min(max_derivative, j.order) + 1):
                out[name + "'" * k] = j.derivative_at_zero(k)
        for name in ("B", "kappa_c_r", "l", "curve_kappa", "curve_tau",
                     "sing_kappa", "sing_tau", "sing_sigma"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        return out


def direct_report(fd: FrontalData, bias: bool = True) -> InvariantReport:
    """All jet-evaluated invariants of ``fd``; bias entries only when applicable."""
    rep = InvariantReport(
        kappa_s=kappa_s(fd),
        kappa_nu=kappa_nu(fd),
        kappa_t=kappa_t(fd),
        kappa_c=kappa_c(fd),
    )
    rep.curve_kappa, rep.curve_tau = curve_invariants_regular(fd.f.restrict_x())
    if bias:
        try:
            b = bias_and_secondary(fd)
        except NotApplicable:
            pass
        else:
            rep.B, rep.kappa_c_r, rep.l = b.B, b.kappa_c_r, b.l
    rep.provenance = {k: "direct" for k, v in vars(rep).items()
                      if k != "provenance" and v is not None}
    return rep
