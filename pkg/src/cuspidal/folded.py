"""The folded cuspidal edge ``phi = (X, Y, Z^2) o f`` and its double point curve.

Closed-form values are expressed through the derivatives at 0 of the
normal-form functions ``a, b0, b1, b2`` and the value ``b3(0, 0)``; they are
meant to be checked against :mod:`cuspidal.invariants`, which evaluates the
same quantities directly from jets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDPC, NotCrossCap
from .invariants import (
    InvariantReport,
    SingularCurveInvariants,
    curve_invariants_singular,
)
from .jet import Curve3, Jet1, Jet2, align
from .surfaces import EdgeCoefficients, fold, normal_form

__all__ = [
    "folded_surface",
    "closed_form_values",
    "closed_form_invariants",
    "sigma_curve_closed",
    "sigma_relations",
    "DoublePointCurve",
    "double_point_curve",
    "dpc_closed_forms",
    "DPCDerivatives",
    "dpc_derivatives",
    "DPCLimits",
    "dpc_limits",
    "richardson_limit",
    "with_tau_sing_zero",
]


def folded_surface(c: EdgeCoefficients) -> "MapGerm3":  # noqa: F821
    return fold(normal_form(c, mode="folded"))


def _derivs(c: EdgeCoefficients):
    """Short names for the derivatives at 0 used throughout the closed forms."""
    D = c.d
    return dict(
        a2=D("a", 2), a3=D("a", 3), a4=D("a", 4),
        p1=D("b0", 1), p2=D("b0", 2), p3=D("b0", 3),
        q0=D("b1", 0), q1=D("b1", 1), q2=D("b1", 2),
        r0=D("b2", 0), r1=D("b2", 1),
        s0=c.b3.const,
    )


def closed_form_values(c: EdgeCoefficients) -> dict:
    """The fifteen values at 0 of the folded-germ invariants and their derivatives.

    Keys are ``kappa_s``, ``kappa_s'``, ``kappa_s''`` and likewise for
    ``kappa_nu``, ``kappa_t``, ``kappa_c``.
    """
    c.validate("folded")
    g = _derivs(c)
    a2, a3, a4 = g["a2"], g["a3"], g["a4"]
    p1, p2, p3 = g["p1"], g["p2"], g["p3"]
    q0, q1, q2 = g["q0"], g["q1"], g["q2"]
    r0, r1 = g["r0"], g["r1"]
    return {
        "kappa_s": a2,
        "kappa_s'": 8 * q0 * p1**3 + a3,
        "kappa_s''": 16 * p1**3 * q1 - 16 * p1**4 * a2 - 3 * a2**3 + a4
        - 8 * q0 * p1**2 * (2 * q0 * a2 - 7 * p2),
        "kappa_nu": 2 * p1**2,
        "kappa_nu'": 2 * p1 * (-2 * q0 * a2 + 3 * p2),
        "kappa_nu''": -32 * q0**2 * p1**4 - 24 * p1**6 - 4 * p1**2 * a2**2
        + 6 * p2**2 - 4 * q0 * (a2 * p2 + 2 * p1 * a3)
        + p1 * (-8 * q1 * a2 + 8 * p3),
        "kappa_t": 4 * q0 * p1,
        "kappa_t'": -2 * p1**2 * a2 + 8 * p1 * q1 + 4 * q0 * p2,
        "kappa_t''": -2 * (
            64 * q0**3 * p1**3 - 6 * q1 * p2
            + p1 * (6 * a2 * p2 - 6 * q2 + p1 * a3)
            + q0 * (32 * p1**5 - 4 * p1 * a2**2 - 2 * p3)
        ),
        "kappa_c": 0.0,
        "kappa_c'": 12 * r0 * p1,
        "kappa_c''": 12 * (2 * p1 * r1 + r0 * p2),
    }


def closed_form_invariants(c: EdgeCoefficients) -> InvariantReport:
    """Invariants of the folded germ as functions of ``x`` from the closed expressions.

    The series are built with jet arithmetic from the formulas in terms of
    ``a(x), b0(x), b1(x), b2(x)`` and the auxiliary quantities
    ``A = 1 + a'^2 + 4 b0^2 b0'^2`` and
    ``B = 1 + 16 b0^2 b1^2 + 4 b0^2 (-2 b1 a' + b0')^2``.
    The scalar entries (bias, curve invariants) are the closed values at 0.
    """
    c.validate("folded")
    n = c.order - 2
    a, b0, b1, b2 = (j.truncate(n) for j in (c.a, c.b0, c.b1, c.b2))
    a1 = c.a.derivative().truncate(n)
    a2 = c.a.derivative().derivative().truncate(n)
    p1 = c.b0.derivative().truncate(n)
    p2 = c.b0.derivative().derivative().truncate(n)
    q1 = c.b1.derivative().truncate(n)

    A = 1 + a1 * a1 + 4 * b0 * b0 * p1 * p1
    B = 1 + 16 * b0 * b0 * b1 * b1 + 4 * b0 * b0 * (-2 * b1 * a1 + p1) ** 2

    ks = (
        4 * b0 * b0 * (
            p1 * (p1 * a2 - a1 * p2)
            + 2 * b1 * (-a1 * p1 * a2 + p2 + a1 * a1 * p2)
        )
        + 4 * b0 * p1 * p1 * (2 * b1 * (1 + a1 * a1) - a1 * p1)
        + a2
    ) * A.pow_rational(-3, 2) * B.pow_rational(-1, 2)
    kn = 2 * (p1 * p1 + b0 * (-2 * b1 * a2 + p2)) / A * B.pow_rational(-1, 2)
    kt = 2 / (A * B) * (
        2 * b0 * a1 * a1 * q1
        + 2 * b0 * q1
        + 8 * b0**3 * p1 * p1 * q1
        + 16 * b0**3 * b1 * b1 * p1 * a2
        - a1 * p1 * p1
        - a1 * b0 * p2
        + 2 * b1 * (b0 * a1 * a2 + p1 + a1 * a1 * p1 - 4 * b0**3 * p2 * p1)
    )
    kc = 12 * b0 * b2 * A.pow_rational(3, 4) * B.pow_rational(-5, 4)

    g = _derivs(c)
    ksig, tsig = sigma_curve_closed(c)
    rep = InvariantReport(
        kappa_s=ks, kappa_nu=kn, kappa_t=kt, kappa_c=kc,
        B=24 * g["q0"] ** 2,
        kappa_c_r=720 * g["q0"] * g["r0"],
        l=0.0,
        curve_kappa=ksig,
        curve_tau=tsig,
    )
    dp = dpc_closed_forms(c)
    rep.sing_kappa = dp["kappa_sing"]
    rep.sing_tau = dp["tau_sing"]
    rep.sing_sigma = 0.0
    rep.provenance = {k: "closed-form" for k, v in vars(rep).items()
                      if k != "provenance" and v is not None}
    return rep


def sigma_curve_closed(c: EdgeCoefficients):
    """Curvature and torsion at 0 of the folded cuspidal edge ``(x, a(x), b0(x)^2)``."""
    g = _derivs(c)
    a2, a3, p1, p2 = g["a2"], g["a3"], g["p1"], g["p2"]
    den = a2**2 + 4 * p1**4
    return float(np.sqrt(den)), 2 * p1 * (3 * a2 * p2 - a3 * p1) / den


def sigma_relations(values: dict):
    """Curvature/torsion of the folded edge recovered from the invariant values.

    Returns ``(kappa_sigma^2, tau_sigma)`` computed as
    ``ks^2 + kn^2`` and ``(ks kn' - ks' kn) / (ks^2 + kn^2) + kt``.
    """
    ks, kn = values["kappa_s"], values["kappa_nu"]
    den = ks**2 + kn**2
    tau = (ks * values["kappa_nu'"] - values["kappa_s'"] * kn) / den + values["kappa_t"]
    return den, tau


# -- double point curve ------------------------------------------------------

@dataclass(frozen=True)
class DoublePointCurve:
    """Double point curve ``x = d(y)`` of the folded germ.

    ``d_tilde`` is its image under the unfolded normal form and ``d_hat``
    under the folded germ; ``d2`` and ``d4`` are ``d''(0)`` and ``d''''(0)``.
    """

    d: Jet1
    d_tilde: Curve3
    d_hat: Curve3
    d2: float
    d4: float
    newton_steps: int


def _jet_newton_root(Q: Jet2, order: int, max_steps: int = 16):
    """Solve ``Q(x(t), t) = 0`` for a series ``x(t)`` with ``x(0) = 0``."""
    Qx = Q.dx()
    d = Jet1.constant(0.0, order)
    t = Jet1.var(order)
    for step in range(1, max_steps + 1):
        val = Q.compose(d, t)
        # val vanishes at 0, so the top coefficient of 1/der never reaches the quotient
        der = Jet1(Qx.compose(d, t).coeffs, val.order)
        new = d.truncate(val.order) - val / der
        if new.order < d.order:
            new = Jet1(new.coeffs, d.order)
        done = np.max(np.abs(new.coeffs - d.coeffs)) <= 1e-15 * max(1.0, d.max_abs())
        d = new
        if done:
            return d, step
    return d, max_steps


def double_point_curve(c: EdgeCoefficients) -> DoublePointCurve:
    """Solve for the double point curve of the folded germ by Newton iteration on jets.

    Points ``(x, y)`` and ``(x, -y)`` have the same image exactly when the
    even-in-``y`` part of ``b0 + b1 y^2 + b2 y^3 + b3 y^4`` vanishes; with
    ``b0'(0) != 0`` this defines ``x = d(y)`` by the implicit function theorem.
    """
    c.validate("folded")
    if abs(c.d("b0", 1)) <= 1e-12:
        raise NotCrossCap("b0'(0) = 0: the folded germ is not a cuspidal cross-cap")
    f = normal_form(c, mode="folded")
    Q = f.z.even_in_y()
    d, steps = _jet_newton_root(Q, c.order)
    # the root is exact up to the order the composition supports
    t = Jet1.var(c.order)
    residual_order = Q.compose(d, t).order
    d = d.truncate(residual_order)
    t = Jet1.var(residual_order)
    d_tilde = f.compose(d, t)
    d_hat = fold(f).compose(d, t)
    return DoublePointCurve(
        d=d,
        d_tilde=d_tilde,
        d_hat=d_hat,
        d2=d.derivative_at_zero(2),
        d4=d.derivative_at_zero(4),
        newton_steps=steps,
    )


def dpc_closed_forms(c: EdgeCoefficients) -> dict:
    """Closed-form data of the double point curve.

    ``d_hat_4_printed`` is the vector ``(-N / b0'^3, b1^2 a'' / b0'^2, 0)`` with
    ``N = 2 b3 b0'^2 - 2 b0' b1' b1 + b1^2 b0''``; the true fourth derivative
    of ``d_hat`` (and of ``d_tilde``) is twelve times that vector, reported as
    ``d_hat_4``. ``kappa_sing`` and ``tau_sing`` of ``d_tilde`` carry the
    factor ``(1 + 4 b1^2 / b0'^2)^(-3/4)``; the ``*_printed`` variants keep
    the exponents ``+3/4`` and ``-1/2`` of the reference expressions.
    """
    g = _derivs(c)
    a2, p1, p2 = g["a2"], g["p1"], g["p2"]
    q0, q1, r0, s0 = g["q0"], g["q1"], g["r0"], g["s0"]
    N = 2 * s0 * p1**2 - 2 * p1 * q1 * q0 + q0**2 * p2
    dd2 = np.array([-2 * q0 / p1, 1.0, 0.0])
    printed4 = np.array([-N / p1**3, q0**2 * a2 / p1**2, 0.0])
    ratio = 1 + 4 * q0**2 / p1**2
    tau_num = 2 * s0 * p1**2 - 2 * p1 * q1 * q0 - 2 * q0**3 * a2 + q0**2 * p2
    return {
        "d2": -2 * q0 / p1,
        "d4": -12 / p1**3 * (2 * s0 * p1**2 + q0 * (-2 * p1 * q1 + q0 * p2)),
        "d_tilde_2": dd2,
        "d_tilde_3": np.array([0.0, 0.0, 6 * r0]),
        "d_tilde_4": 12 * printed4,
        "d_hat_2": dd2,
        "d_hat_4_printed": printed4,
        "d_hat_4": 12 * printed4,
        "d_hat_6_z": 720 * r0**2,
        "kappa_sing": 6 * abs(r0) * ratio**-0.75,
        "tau_sing": -2 * ratio**-0.75 * tau_num / (r0 * p1**3),
        "kappa_sing_printed": 6 * abs(r0) * ratio**0.75,
        "tau_sing_printed": -2 * ratio**0.5 * tau_num / (r0 * p1 * (4 * q0**2 + p1**2)),
        "N": N,
        "tau_numerator": tau_num,
        "lim_kappa_sq_display": (N / (324 * (4 * q0**2 + p1**2) ** 3)) ** 2,
        # the display has a pole at N = 0 even where the true limit is finite
        "lim_tau_display": 48 * r0**2 * p1**3 / N if N != 0.0 else float("nan"),
    }


@dataclass(frozen=True)
class DPCDerivatives:
    d_hat_2: np.ndarray
    d_hat_4: np.ndarray
    d_hat_6: np.ndarray
    d_tilde_2: np.ndarray
    d_tilde_3: np.ndarray
    d_tilde_4: np.ndarray
    tilde: SingularCurveInvariants
    osculating_normal: np.ndarray


def dpc_derivatives(dpc: DoublePointCurve, tol: float = 1e-10) -> DPCDerivatives:
    """Derivative vectors of ``d_hat`` and ``d_tilde`` at 0.

    ``d_hat''(0)`` is the limiting tangent and ``d_hat''(0), d_hat''''(0)``
    span the osculating plane; :class:`DegenerateDPC` is raised when they are
    parallel.
    """
    h2, h4, h6 = (dpc.d_hat.derivative_at_zero(k) for k in (2, 4, 6))
    t2, t3, t4 = (dpc.d_tilde.derivative_at_zero(k) for k in (2, 3, 4))
    n = np.cross(h2, h4)
    scale = max(np.linalg.norm(h2) * np.linalg.norm(h4), 1.0)
    if np.linalg.norm(n) <= tol * scale:
        raise DegenerateDPC("d_hat''(0) and d_hat''''(0) are parallel")
    return DPCDerivatives(
        h2, h4, h6, t2, t3, t4,
        curve_invariants_singular(dpc.d_tilde),
        n / np.linalg.norm(n),
    )


def richardson_limit(fn, h0: float = 1e-2, levels: int = 3) -> float:
    """Limit at 0 of an even function ``fn`` sampled at ``h0, h0/2, h0/4, ...``.

    Uses Richardson extrapolation in powers of ``h^2``.
    """
    table = [fn(h0 / 2**i) for i in range(levels)]
    for j in range(1, levels):
        factor = 4.0**j
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0)
                 for i in range(len(table) - 1)]
    return float(table[0])


def _curve_kappa_sq(curve: Curve3, y: float) -> float:
    d1 = curve.derivative()
    d2 = d1.derivative()
    v1, v2 = d1(y), d2(y)
    c = np.cross(v1, v2)
    return float(np.dot(c, c) / np.dot(v1, v1) ** 3)


def _curve_tau(curve: Curve3, y: float) -> float:
    d1 = curve.derivative()
    d2 = d1.derivative()
    d3 = d2.derivative()
    v1, v2, v3 = d1(y), d2(y), d3(y)
    c = np.cross(v1, v2)
    return float(np.dot(c, v3) / np.dot(c, c))


@dataclass(frozen=True)
class DPCLimits:
    """Limits at 0 of curvature squared and torsion of the regular curve ``d_hat``.

    ``kappa_sq_quotient`` and ``tau_quotient`` use the reference constants
    ``1/36`` and ``4/5``: ``|h2 x h4|^2 / (36 |h2|^6)`` and
    ``4 det(h2, h4, h6) / (5 |h2 x h4|^2)`` with ``hk = d_hat^(k)(0)``.
    ``kappa_sq_limit`` and ``tau_limit`` are the exact limits of the Taylor
    expansion, with constants ``1/9`` and ``1/5``. ``*_numeric`` come from
    Richardson extrapolation of the curve quantities sampled at
    ``y = 1e-2, 5e-3, 2.5e-3``; ``*_display`` are the closed expressions in
    the coefficients.
    """

    kappa_sq_quotient: float
    tau_quotient: float
    kappa_sq_limit: float
    tau_limit: float
    kappa_sq_numeric: float
    tau_numeric: float
    kappa_sq_display: float
    tau_display: float


def dpc_limits(dpc: DoublePointCurve, c: EdgeCoefficients | None = None) -> DPCLimits:
    der = dpc_derivatives(dpc)
    h2, h4, h6 = der.d_hat_2, der.d_hat_4, der.d_hat_6
    cr = np.cross(h2, h4)
    crsq = float(np.dot(cr, cr))
    det = float(np.linalg.det(np.array([h2, h4, h6])))
    n2 = float(np.dot(h2, h2))
    if c is not None:
        closed = dpc_closed_forms(c)
        kd, td = closed["lim_kappa_sq_display"], closed["lim_tau_display"]
    else:
        kd = td = float("nan")
    return DPCLimits(
        kappa_sq_quotient=crsq / (36.0 * n2**3),
        tau_quotient=4.0 * det / (5.0 * crsq),
        kappa_sq_limit=crsq / (9.0 * n2**3),
        tau_limit=det / (5.0 * crsq),
        kappa_sq_numeric=richardson_limit(lambda y: _curve_kappa_sq(dpc.d_hat, y)),
        tau_numeric=richardson_limit(lambda y: _curve_tau(dpc.d_hat, y)),
        kappa_sq_display=kd,
        tau_display=td,
    )


def with_tau_sing_zero(c: EdgeCoefficients) -> EdgeCoefficients:
    """Copy of ``c`` with ``b3(0, 0)`` chosen so that ``tau_sing`` of ``d_tilde`` vanishes.

    Solves ``2 b3 b0'^2 - 2 b0' b1' b1 - 2 b1^3 a'' + b1^2 b0'' = 0`` for ``b3(0, 0)``.
    """
    g = _derivs(c)
    p1, p2, q0, q1, a2 = g["p1"], g["p2"], g["q0"], g["q1"], g["a2"]
    s0 = (2 * p1 * q1 * q0 + 2 * q0**3 * a2 - q0**2 * p2) / (2 * p1**2)
    coeffs = c.b3.coeffs.copy()
    coeffs[0, 0] = s0
    return c.replace(b3=Jet2(coeffs, c.b3.order))
