"""Surface germs: the cuspidal-edge normal form, folding, models, tangent developables.

Every constructor returns a :class:`~cuspidal.jet.MapGerm3` in *adapted*
coordinates: the singular set is the x-axis and ``d/dy`` is a null vector
field along it, so the y-derivative of the germ is divisible by ``y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

import numpy as np

from .errors import ConstraintViolation, NormalDegenerate, NotFirstKind
from .jet import Curve3, Jet1, Jet2, MapGerm3, VectorField2, align, cross, det3, dot

DEFAULT_ORDER = 8
CONSTRAINT_TOL = 1e-12

__all__ = [
    "DEFAULT_ORDER",
    "EdgeCoefficients",
    "FrontalData",
    "SkClass",
    "TangentDevelopable",
    "normal_form",
    "fold",
    "classify_Sk",
    "frontal_structure",
    "tangent_developable",
    "model_cross_cap",
    "model_Sk",
    "sigma_osculating_normal",
    "developable_closed_forms",
    "normal_form_values",
]


def _series(terms, order: int) -> Jet1:
    if terms is None:
        return Jet1.constant(0.0, order)
    if isinstance(terms, Jet1):
        return Jet1(terms.coeffs, order)
    if isinstance(terms, Mapping):
        c = np.zeros(order + 1)
        for k, v in terms.items():
            if int(k) <= order:
                c[int(k)] = v
        return Jet1(c, order)
    return Jet1(np.asarray(terms, dtype=float), order)


@dataclass(frozen=True)
class EdgeCoefficients:
    """Taylor data of ``a, b0, b1, b2`` (functions of x) and ``b3`` (of x, y).

    These are the functions in the cuspidal-edge normal form
    ``(x, a(x) + y^2/2, b0(x) + b1(x) y^2 + b2(x) y^3 + b3(x, y) y^4)``.
    ``b3`` only matters up to total degree ``order - 4``.
    """

    a: Jet1
    b0: Jet1
    b1: Jet1
    b2: Jet1
    b3: Jet2

    @property
    def order(self) -> int:
        return self.a.order

    @classmethod
    def from_taylor(cls, order: int = DEFAULT_ORDER, *, a=None, b0=None, b1=None,
                    b2=None, b3=None) -> "EdgeCoefficients":
        """Build from Taylor coefficients.

        ``a`` .. ``b2`` accept ``{power: coefficient}`` mappings, sequences or
        :class:`Jet1`; ``b3`` accepts ``{(i, j): coefficient}`` or a :class:`Jet2`.
        """
        b3_order = max(order - 4, 0)
        if b3 is None:
            b3j = Jet2.constant(0.0, b3_order)
        elif isinstance(b3, Jet2):
            b3j = Jet2(b3.coeffs, b3_order)
        else:
            b3j = Jet2.from_dict(dict(b3), b3_order)
        return cls(
            _series(a, order), _series(b0, order), _series(b1, order),
            _series(b2, order), b3j,
        )

    @classmethod
    def random(cls, rng: np.random.Generator, order: int = DEFAULT_ORDER,
               mode: str = "folded", margin: float = 0.2) -> "EdgeCoefficients":
        """Uniform [-1, 1] Taylor coefficients obeying the constraints of ``mode``.

        ``folded``: a(0)=a'(0)=b0(0)=0 with |b0'(0)|, |b2(0)| >= margin
        (the cuspidal cross-cap stratum after folding).
        ``prefold``: the full normal-form constraints with |b2(0)| >= margin.
        """
        def draw(n):
            return rng.uniform(-1.0, 1.0, size=n)

        def away(v):
            return math.copysign(margin + (1.0 - margin) * abs(v), v)

        a, b0, b1, b2 = draw(order + 1), draw(order + 1), draw(order + 1), draw(order + 1)
        b3 = np.zeros((order + 1, order + 1))
        m = max(order - 4, 0)
        mask = np.add.outer(np.arange(m + 1), np.arange(m + 1)) <= m
        b3[: m + 1, : m + 1][mask] = draw(int(mask.sum()))
        a[:2] = 0.0
        b0[0] = 0.0
        b2[0] = away(b2[0])
        if mode == "folded":
            b0[1] = away(b0[1])
        elif mode == "prefold":
            b0[1] = 0.0
            b1[0] = 0.0
        else:
            raise ValueError(f"unknown mode {mode!r}")
        return cls.from_taylor(order, a=a, b0=b0, b1=b1, b2=b2, b3=Jet2(b3, order))

    def d(self, name: str, k: int = 0) -> float:
        """``k``-th derivative at 0 of ``a``/``b0``/``b1``/``b2``; ``b3`` gives b3(0, 0)."""
        if name == "b3":
            if k:
                raise ValueError("use b3.derivative_at_zero(i, j) for b3 derivatives")
            return self.b3.const
        return getattr(self, name).derivative_at_zero(k)

    def replace(self, **changes) -> "EdgeCoefficients":
        return replace(self, **changes)

    def validate(self, mode: str = "folded", tol: float = CONSTRAINT_TOL) -> None:
        checks = [("a(0)", self.a[0]), ("a'(0)", self.a[1]), ("b0(0)", self.b0[0])]
        if mode == "prefold":
            checks += [("b0'(0)", self.b0[1]), ("b1(0)", self.b1[0])]
        elif mode != "folded":
            raise ValueError(f"unknown mode {mode!r}")
        bad = [name for name, v in checks if abs(v) > tol]
        if bad:
            raise ConstraintViolation(
                f"{mode} normal form requires {', '.join(n + ' = 0' for n in bad)}"
            )


def normal_form(c: EdgeCoefficients, mode: Optional[str] = "folded") -> MapGerm3:
    """``(x, a(x) + y^2/2, b0(x) + b1(x) y^2 + b2(x) y^3 + b3(x, y) y^4)``.

    ``mode`` selects which constraints are validated (``None`` skips the check).
    """
    if mode is not None:
        c.validate(mode)
    n = c.order
    X = np.zeros((n + 1, n + 1))
    X[1, 0] = 1.0
    Y = np.zeros((n + 1, n + 1))
    Y[:, 0] = c.a.coeffs
    if n >= 2:
        Y[0, 2] += 0.5
    Z = np.zeros((n + 1, n + 1))
    Z[:, 0] = c.b0.coeffs
    for power, fn in ((2, c.b1), (3, c.b2)):
        if n >= power:
            Z[: n + 1 - power, power] += fn.coeffs[: n + 1 - power]
    if n >= 4:
        m = n - 4
        Z[: m + 1, 4: m + 5] += c.b3.coeffs[: m + 1, : m + 1]
    return MapGerm3(Jet2(X, n), Jet2(Y, n), Jet2(Z, n))


def fold(f: MapGerm3) -> MapGerm3:
    """Compose with the fold ``(X, Y, Z) -> (X, Y, Z^2)``."""
    return MapGerm3(f.x, f.y, f.z * f.z)


@dataclass(frozen=True)
class SkClass:
    """Outcome of :func:`classify_Sk`: ``cuspidal_edge``, ``Sk`` or ``degenerate``."""

    kind: str
    k: Optional[int] = None
    sign: Optional[int] = None

    def __str__(self) -> str:
        if self.kind == "Sk":
            name = "cuspidal cross-cap" if self.k == 0 else f"cuspidal S_{self.k}"
            return f"{name} (S_{self.k}, leading sign {self.sign:+d})"
        return self.kind.replace("_", " ")


def classify_Sk(c: EdgeCoefficients, mode: str = "prefold", tol: float = 1e-9) -> SkClass:
    """Singularity type read off the normal-form coefficients.

    ``prefold`` tests ``b2``: b2(0) != 0 is a cuspidal edge, otherwise the first
    nonvanishing ``b2^(k+1)(0)`` gives a cuspidal S_k. ``folded`` tests ``b0``
    for the folded surface: the first nonvanishing ``b0^(k+1)(0)`` gives S_k,
    provided the unfolded germ is a cuspidal edge (b2(0) != 0).
    """
    if mode == "prefold":
        series = c.b2
        if abs(series[0]) > tol:
            return SkClass("cuspidal_edge")
    elif mode == "folded":
        if abs(c.b2[0]) <= tol:
            return SkClass("degenerate")
        series = c.b0
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for k in range(series.order):
        v = series.derivative_at_zero(k + 1)
        if abs(v) > tol:
            return SkClass("Sk", k, 1 if v > 0 else -1)
    return SkClass("degenerate")


@dataclass(frozen=True)
class FrontalData:
    """A frontal germ with its unit normal, singular-set function and adapted pair."""

    f: MapGerm3
    nu: MapGerm3
    lam: Jet2
    xi: VectorField2
    eta: VectorField2
    eta_lambda0: float = 0.0

    @property
    def first_kind(self) -> bool:
        return abs(self.eta_lambda0) > 1e-12


def frontal_structure(f: MapGerm3) -> FrontalData:
    """Unit normal ``nu = f_x x (f_y / y)`` normalized, and ``lam = det(f_x, f_y, nu)``.

    Requires adapted coordinates (``f_y`` divisible by ``y``). The orientation
    makes ``det(f_x, f_y / y, nu) > 0``, hence ``d lam(d/dy) > 0`` on the
    singular set.
    """
    fx = f.dx()
    fy = f.dy()
    fy_y = fy.divide_by_monomial(0, 1)
    fx_, fy_y = align(fx, fy_y)
    n = cross(fx_, fy_y)
    nn = n.norm_sq()
    if nn.const <= 1e-24:
        raise NormalDegenerate("f_x and f_y/y are parallel at the origin")
    nu = n.scale(nn.pow_rational(-1, 2))
    fx_, fy_, nu_ = align(fx, fy, nu)
    lam = det3(fx_, fy_, nu_)
    order = lam.order
    return FrontalData(
        f=f,
        nu=nu,
        lam=lam,
        xi=VectorField2.d_x(f.order),
        eta=VectorField2.d_y(f.order),
        eta_lambda0=lam[0, 1] if order >= 1 else 0.0,
    )


def sigma_osculating_normal(c: EdgeCoefficients) -> np.ndarray:
    """Normal ``(0, -2 b0'(0)^2, a''(0))`` of the osculating plane of the folded edge."""
    return np.array([0.0, -2.0 * c.d("b0", 1) ** 2, c.d("a", 2)])


@dataclass(frozen=True)
class TangentDevelopable:
    """Tangent developable ``f(u, v) = gamma(u) + v gamma'(u)`` of ``gamma = (u, g2, g3)``.

    ``lam = v`` and ``eta = d/du - d/dv`` describe the singular set.
    ``adapted`` is the same surface in coordinates ``u = x + y``, ``v = -y``,
    where the singular set is the x-axis and ``d/dy`` is null, ready for
    :func:`frontal_structure`.
    """

    f: MapGerm3
    lam: Jet2
    eta: VectorField2
    adapted: MapGerm3
    curve: Curve3
    first_kind_det: float
    gamma_det: float = field(default=0.0)


def tangent_developable(gamma2: Jet1, gamma3: Jet1) -> TangentDevelopable:
    """Tangent developable of ``(u, gamma2(u), gamma3(u))``.

    The curve must have nonzero curvature at 0 (``gamma' x gamma'' != 0``),
    which is exactly the condition for the origin to be a singular point of
    the first kind; otherwise :class:`NotFirstKind` is raised. The value of
    ``det((g2', g3'), (g2'', g3''))`` at 0 is reported as ``gamma_det``.
    """
    gamma2, gamma3 = align(gamma2, gamma3)
    if gamma2.const != 0.0 or gamma3.const != 0.0:
        raise ValueError("curve must pass through the origin")
    n = gamma2.order
    u = Jet1.var(n)
    curve = Curve3(u, gamma2, gamma3)
    d1 = curve.derivative_at_zero(1)
    d2 = curve.derivative_at_zero(2)
    first_kind = float(np.linalg.norm(np.cross(d1, d2)))
    if first_kind <= 1e-12:
        raise NotFirstKind("tangent developable of a curve with vanishing curvature")
    gdet = d1[1] * d2[2] - d1[2] * d2[1]

    def developable_component(g: Jet1) -> Jet2:
        c = np.zeros((n + 1, n + 1))
        c[:, 0] = g.coeffs
        dg = g.derivative()
        c[:n, 1] += dg.coeffs
        return Jet2(c, n)

    f = MapGerm3(
        Jet2.var("x", n) + Jet2.var("y", n),
        developable_component(gamma2),
        developable_component(gamma3),
    )
    X, Y = Jet2.var("x", n), Jet2.var("y", n)
    adapted = f.compose2(X + Y, -Y)
    eta = VectorField2(Jet2.constant(1.0, n), Jet2.constant(-1.0, n))
    return TangentDevelopable(f, Y, eta, adapted, curve, first_kind, gdet)


def developable_closed_forms(td: TangentDevelopable) -> dict:
    """Invariants of a tangent developable at 0 in terms of ``gamma``.

    ``kappa_c`` is ``2 |g'|^(3/2) det(g', g'', g''') / |g' x g''|^(5/2)``.
    The ``*_printed`` entries evaluate the reference displays literally; they
    differ from the direct values in sign (``kappa_t``) and in the powers of
    ``|g'|`` and ``|g' x g''|`` (``kappa_c``).
    """
    d1, d2, d3 = (td.curve.derivative_at_zero(k) for k in (1, 2, 3))
    c = np.cross(d1, d2)
    csq = float(c @ c)
    n1sq = float(d1 @ d1)
    det = float(np.linalg.det(np.array([d1, d2, d3])))
    kappa = float(np.sqrt(csq) / n1sq**1.5)
    tau = det / csq
    return {
        "kappa": kappa,
        "tau": tau,
        "kappa_s": -kappa,
        "kappa_nu": 0.0,
        "kappa_t": tau,
        "kappa_c": 2.0 * n1sq**0.75 * det / csq**1.25,
        "kappa_t_printed": -det / csq,
        "kappa_c_printed": -2.0 * n1sq**1.5 * det / csq**2.5,
    }


def normal_form_values(c: EdgeCoefficients) -> dict:
    """Invariants at 0 of the unfolded normal form, read off its coefficients.

    With ``d/dy`` already a null field and ``y^2/2`` in the second slot, the
    invariants at the origin are ``kappa_s = a''``, ``kappa_nu = b0''``,
    ``kappa_t = 2 b1'`` and ``kappa_c = 6 b2``. When ``b2(0) = 0`` the
    corrected null field needs no correction, ``l = 0``, and the bias and
    secondary cuspidal curvature are ``24 b3(0, 0)`` and ``360 b3_y(0, 0)``.
    """
    c.validate("prefold")
    out = {
        "kappa_s": c.d("a", 2),
        "kappa_nu": c.d("b0", 2),
        "kappa_t": 2.0 * c.d("b1", 1),
        "kappa_c": 6.0 * c.d("b2", 0),
    }
    if abs(c.d("b2", 0)) <= CONSTRAINT_TOL:
        b3y = c.b3.coeffs[0, 1] if c.b3.order >= 1 else 0.0
        out.update(B=24.0 * c.b3.const, kappa_c_r=360.0 * b3y, l=0.0)
    return out


def model_Sk(k: int, sign: int = 1, order: int = DEFAULT_ORDER) -> MapGerm3:
    """The monomial germ ``(x, y^2, x^(k+1) y^3 + sign * y^5)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    z = Jet2.from_dict({(k + 1, 3): 1.0, (0, 5): float(sign)}, order)
    return MapGerm3(Jet2.var("x", order), Jet2.from_dict({(0, 2): 1.0}, order), z)


def model_cross_cap(order: int = DEFAULT_ORDER) -> MapGerm3:
    """The cuspidal cross-cap ``(x, y^2, x y^3)``."""
    return MapGerm3(
        Jet2.var("x", order),
        Jet2.from_dict({(0, 2): 1.0}, order),
        Jet2.from_dict({(1, 3): 1.0}, order),
    )
