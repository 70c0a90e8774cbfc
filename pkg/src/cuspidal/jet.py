"""Truncated Taylor polynomials (jets) in one and two variables.

A jet of order ``N`` stores the Taylor coefficients of a germ at the origin up
to total degree ``N``. Every arithmetic operation discards the terms of total
degree larger than ``N``, so the stored coefficients are always *exact* for the
underlying germ (up to floating point), never approximations of unknown tails.

Differentiation lowers the order by one, division by ``y`` lowers it by one,
and composition computes the largest order that is still fully determined by
its inputs. Binary operations require equal orders; use :func:`align` to
truncate a group of jets to their common order first.

>>> x = Jet2.var("x", 2); y = Jet2.var("y", 2)
>>> print((1 + x + y) ** 2)
1 + 2*x + 2*y + x^2 + 2*x*y + y^2
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real
from typing import Iterator, Sequence, Union

import numpy as np
from scipy.signal import convolve2d

from .errors import (
    NonPositiveConstantTerm,
    NonvanishingConstant,
    NotDivisible,
    OrderExhausted,
    OrderMismatch,
    ZeroConstantTerm,
)

__all__ = [
    "Jet1",
    "Jet2",
    "JetVector3",
    "MapGerm3",
    "Curve3",
    "VectorField2",
    "align",
    "compose1_into2",
    "directional_derivative",
    "cross",
    "dot",
    "det3",
    "DIVISIBILITY_TOL",
]

DIVISIBILITY_TOL = 1e-10

Scalar = Union[int, float, np.floating]


def _tri_mask(order: int) -> np.ndarray:
    idx = np.arange(order + 1)
    return np.add.outer(idx, idx) <= order


class _Jet:
    """Shared arithmetic for :class:`Jet1` and :class:`Jet2`."""

    __slots__ = ("_c", "_order")
    ndim = 0

    # subclasses implement _normalize, _mul_arrays
    def __init__(self, coeffs, order: int | None = None):
        c = np.asarray(coeffs, dtype=float)
        if order is None:
            order = self._default_order(c)
        if order < 0:
            raise OrderExhausted(f"jet order must be non-negative, got {order}")
        c = self._normalize(c, int(order))
        c.setflags(write=False)
        self._c = c
        self._order = int(order)

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only view of the coefficient table."""
        return self._c

    @property
    def const(self) -> float:
        return float(self._c.flat[0])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._c))) if self._c.size else 0.0

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol

    def allclose(self, other, atol: float = 1e-12, rtol: float = 0.0) -> bool:
        other = self._coerce(other)
        return bool(np.allclose(self._c, other._c, atol=atol, rtol=rtol))

    def truncate(self, order: int):
        if order > self._order:
            raise OrderMismatch(
                f"cannot raise the order of a jet from {self._order} to {order}"
            )
        return type(self)(self._c, order)

    # -- arithmetic -------------------------------------------------------
    def _constant(self, value: float):
        c = np.zeros_like(self._c)
        c.flat[0] = value
        return type(self)(c, self._order)

    def _coerce(self, other):
        if isinstance(other, _Jet):
            if type(other) is not type(self):
                raise TypeError(
                    f"cannot combine {type(self).__name__} with {type(other).__name__}"
                )
            if other._order != self._order:
                raise OrderMismatch(
                    f"jet orders differ ({self._order} vs {other._order}); "
                    "truncate with align() first"
                )
            return other
        if isinstance(other, Real):
            return self._constant(float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return type(self)(self._c + other._c, self._order)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return type(self)(self._c - other._c, self._order)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return type(self)(-self._c, self._order)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Real):
            return type(self)(self._c * float(other), self._order)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return type(self)(self._mul_arrays(self._c, other._c), self._order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            return type(self)(self._c / float(other), self._order)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.recip()

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return self.recip() * float(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("use pow_rational for non-integer exponents")
        if n < 0:
            return self.recip() ** (-n)
        result = self._constant(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _unit_part(self):
        """Split ``self = c0 * (1 + u)`` with ``u`` vanishing at the origin."""
        c0 = self.const
        return c0, self * (1.0 / c0) - 1.0

    def _binomial_series(self, r: float, u):
        # (1+u)^r; u is nilpotent of index order+1
        total = self._constant(1.0)
        term = self._constant(1.0)
        coef = 1.0
        for k in range(1, self._order + 1):
            term = term * u
            if term.is_zero():
                break
            coef *= (r - k + 1) / k
            total = total + term * coef
        return total

    def recip(self):
        """Multiplicative inverse; requires a nonzero constant term."""
        if self.const == 0.0:
            raise ZeroConstantTerm("reciprocal of a jet with zero constant term")
        c0, u = self._unit_part()
        return self._binomial_series(-1.0, u) * (1.0 / c0)

    def pow_rational(self, p: int, q: int = 1):
        """Positive branch of ``self ** (p/q)``; requires a positive constant term."""
        if q <= 0:
            raise ValueError("denominator q must be positive")
        c0 = self.const
        if not c0 > 0.0:
            raise NonPositiveConstantTerm(
                f"rational power needs a positive constant term, got {c0!r}"
            )
        r = p / q
        _, u = self._unit_part()
        return self._binomial_series(r, u) * (c0**r)

    def sqrt(self):
        return self.pow_rational(1, 2)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self}, order={self._order})"


def _fmt_coeff(value: float, monomial: str, first: bool) -> str:
    sign = "-" if value < 0 else "+"
    mag = abs(value)
    if monomial and math.isclose(mag, 1.0, rel_tol=0, abs_tol=1e-15):
        body = monomial
    else:
        body = f"{mag:.12g}" + (f"*{monomial}" if monomial else "")
    if first:
        return ("-" if sign == "-" else "") + body
    return f" {sign} {body}"


def _monomial(var: str, k: int) -> str:
    if k == 0:
        return ""
    return var if k == 1 else f"{var}^{k}"


class Jet1(_Jet):
    """Truncated power series ``sum_k c[k] t^k`` with ``k <= order``."""

    __slots__ = ()
    ndim = 1

    @staticmethod
    def _default_order(c):
        return max(c.shape[0] - 1, 0)

    @staticmethod
    def _normalize(c, order):
        c = np.atleast_1d(c)
        if c.ndim != 1:
            raise ValueError("Jet1 coefficients must be one-dimensional")
        out = np.zeros(order + 1)
        n = min(order + 1, c.shape[0])
        out[:n] = c[:n]
        return out

    @staticmethod
    def _mul_arrays(a, b):
        return np.convolve(a, b)[: a.shape[0]]

    @classmethod
    def var(cls, order: int) -> "Jet1":
        return cls([0.0, 1.0], order)

    @classmethod
    def constant(cls, value: float, order: int) -> "Jet1":
        return cls([value], order)

    @classmethod
    def from_derivatives(cls, derivs: Sequence[float], order: int | None = None) -> "Jet1":
        """Build from ``[f(0), f'(0), f''(0), ...]``."""
        c = [d / math.factorial(k) for k, d in enumerate(derivs)]
        return cls(c, order if order is not None else len(c) - 1)

    def __getitem__(self, k: int) -> float:
        return float(self._c[k]) if 0 <= k <= self._order else 0.0

    def derivative_at_zero(self, k: int) -> float:
        """k-th derivative at the origin; raises if beyond the truncation order."""
        if k > self._order:
            raise OrderExhausted(f"derivative {k} exceeds jet order {self._order}")
        return math.factorial(k) * float(self._c[k])

    def derivative(self) -> "Jet1":
        if self._order == 0:
            raise OrderExhausted("cannot differentiate an order-0 jet")
        k = np.arange(1, self._order + 1)
        return Jet1(self._c[1:] * k, self._order - 1)

    def valuation(self) -> int:
        nz = np.flatnonzero(self._c)
        return int(nz[0]) if nz.size else self._order + 1

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, self._c)

    def compose(self, g: "Jet1") -> "Jet1":
        """Series of ``self(g(t))``; ``g`` must vanish at the origin."""
        if g.const != 0.0:
            raise NonvanishingConstant("inner series must vanish at the origin")
        vg = max(g.valuation(), 1)
        order = min(g.order, (self._order + 1) * vg - 1)
        g = g.truncate(order)
        total = Jet1.constant(0.0, order)
        for k in range(self._order, -1, -1):  # Horner
            total = total * g + float(self._c[k])
        return total

    def compose2(self, s: "Jet2") -> "Jet2":
        """Jet of ``self(s(x, y))`` for a bivariate ``s`` vanishing at 0."""
        if s.const != 0.0:
            raise NonvanishingConstant("inner jet must vanish at the origin")
        vs = max(s.valuation(), 1)
        order = min(s.order, (self._order + 1) * vs - 1)
        s = s.truncate(order)
        total = Jet2.constant(0.0, order)
        for k in range(self._order, -1, -1):
            total = total * s + float(self._c[k])
        return total

    def __str__(self) -> str:
        terms = [
            (v, _monomial("t", k)) for k, v in enumerate(self._c) if v != 0.0
        ]
        if not terms:
            return "0"
        return "".join(_fmt_coeff(v, m, i == 0) for i, (v, m) in enumerate(terms))


class Jet2(_Jet):
    """Truncated bivariate Taylor polynomial ``sum c[i, j] x^i y^j``, ``i + j <= order``."""

    __slots__ = ()
    ndim = 2

    @staticmethod
    def _default_order(c):
        return max(c.shape[0] - 1, 0) if c.ndim == 2 else 0

    @staticmethod
    def _normalize(c, order):
        if c.ndim == 0:
            c = c.reshape(1, 1)
        if c.ndim != 2:
            raise ValueError("Jet2 coefficients must be two-dimensional")
        out = np.zeros((order + 1, order + 1))
        n0 = min(order + 1, c.shape[0])
        n1 = min(order + 1, c.shape[1])
        out[:n0, :n1] = c[:n0, :n1]
        out[~_tri_mask(order)] = 0.0
        return out

    @staticmethod
    def _mul_arrays(a, b):
        n = a.shape[0]
        out = convolve2d(a, b)[:n, :n]
        out[~_tri_mask(n - 1)] = 0.0
        return out

    @classmethod
    def var(cls, name: str, order: int) -> "Jet2":
        c = np.zeros((2, 2))
        if name == "x":
            c[1, 0] = 1.0
        elif name == "y":
            c[0, 1] = 1.0
        else:
            raise ValueError(f"unknown variable {name!r}")
        return cls(c, order)

    @classmethod
    def constant(cls, value: float, order: int) -> "Jet2":
        return cls(np.array([[value]]), order)

    @classmethod
    def from_x(cls, j: Jet1, order: int | None = None) -> "Jet2":
        """Lift a series in one variable to a jet depending on ``x`` only."""
        order = j.order if order is None else order
        c = np.zeros((order + 1, order + 1))
        n = min(order, j.order) + 1
        c[:n, 0] = j.coeffs[:n]
        return cls(c, order)

    @classmethod
    def from_y(cls, j: Jet1, order: int | None = None) -> "Jet2":
        order = j.order if order is None else order
        c = np.zeros((order + 1, order + 1))
        n = min(order, j.order) + 1
        c[0, :n] = j.coeffs[:n]
        return cls(c, order)

    @classmethod
    def from_dict(cls, terms: dict, order: int) -> "Jet2":
        """Build from ``{(i, j): coefficient}``; terms above ``order`` are dropped."""
        c = np.zeros((order + 1, order + 1))
        for (i, j), v in terms.items():
            if i + j <= order:
                c[i, j] += v
        return cls(c, order)

    def __getitem__(self, ij) -> float:
        i, j = ij
        if i < 0 or j < 0 or i + j > self._order:
            return 0.0
        return float(self._c[i, j])

    def derivative_at_zero(self, i: int, j: int) -> float:
        if i + j > self._order:
            raise OrderExhausted(f"derivative ({i},{j}) exceeds jet order {self._order}")
        return math.factorial(i) * math.factorial(j) * float(self._c[i, j])

    def valuation(self) -> int:
        nz = np.argwhere(self._c != 0.0)
        return int(nz.sum(axis=1).min()) if nz.size else self._order + 1

    def dx(self) -> "Jet2":
        if self._order == 0:
            raise OrderExhausted("cannot differentiate an order-0 jet")
        k = np.arange(1, self._order + 1)[:, None]
        return Jet2(self._c[1:, :] * k, self._order - 1)

    def dy(self) -> "Jet2":
        if self._order == 0:
            raise OrderExhausted("cannot differentiate an order-0 jet")
        k = np.arange(1, self._order + 1)[None, :]
        return Jet2(self._c[:, 1:] * k, self._order - 1)

    def divide_by_monomial(self, i: int, j: int, tol: float = DIVISIBILITY_TOL) -> "Jet2":
        """Exact quotient by ``x^i y^j``; the order drops by ``i + j``.

        Coefficients that would be lost must vanish up to ``tol`` times the
        largest coefficient magnitude, otherwise :class:`NotDivisible` is raised.
        """
        if i + j > self._order:
            raise OrderExhausted(f"x^{i} y^{j} exceeds jet order {self._order}")
        scale = self.max_abs()
        lost = self._c.copy()
        lost[i:, j:] = 0.0
        if np.max(np.abs(lost)) > tol * scale:
            raise NotDivisible(f"jet is not divisible by x^{i} y^{j}")
        return Jet2(self._c[i:, j:], self._order - i - j)

    def restrict_x(self) -> Jet1:
        """Restriction to the x-axis, ``t -> self(t, 0)``."""
        return Jet1(self._c[:, 0], self._order)

    def restrict_y(self) -> Jet1:
        """Restriction to the y-axis, ``t -> self(0, t)``."""
        return Jet1(self._c[0, :], self._order)

    def even_in_y(self) -> "Jet2":
        c = self._c.copy()
        c[:, 1::2] = 0.0
        return Jet2(c, self._order)

    def odd_in_y(self) -> "Jet2":
        c = self._c.copy()
        c[:, 0::2] = 0.0
        return Jet2(c, self._order)

    def gradient_at_zero(self) -> np.ndarray:
        return np.array([self[1, 0], self[0, 1]])

    def hessian_at_zero(self) -> np.ndarray:
        return np.array(
            [[2.0 * self[2, 0], self[1, 1]], [self[1, 1], 2.0 * self[0, 2]]]
        )

    def __call__(self, x, y):
        return np.polynomial.polynomial.polyval2d(x, y, self._c)

    def _composed_order(self, vg: int, vh: int, inner_order: int) -> int:
        n = self._order + 1
        tail = min(i * vg + (n - i) * vh for i in range(n + 1))
        return min(inner_order, tail - 1)

    def compose(self, g: Jet1, h: Jet1) -> Jet1:
        """Series of ``t -> self(g(t), h(t))`` for ``g(0) = h(0) = 0``.

        The result order is the largest one fully determined by the inputs:
        the truncated tail of ``self`` only enters at degree
        ``min(i*val(g) + j*val(h))`` over ``i + j = order + 1``.
        """
        if g.const != 0.0 or h.const != 0.0:
            raise NonvanishingConstant("substituted series must vanish at the origin")
        g, h = align(g, h)
        vg, vh = max(g.valuation(), 1), max(h.valuation(), 1)
        order = self._composed_order(vg, vh, g.order)
        g, h = g.truncate(order), h.truncate(order)
        return self._horner(g, h, Jet1.constant(0.0, order))

    def compose2(self, g: "Jet2", h: "Jet2") -> "Jet2":
        """Jet of ``self(g(x, y), h(x, y))`` for ``g(0) = h(0) = 0``."""
        if g.const != 0.0 or h.const != 0.0:
            raise NonvanishingConstant("substituted jets must vanish at the origin")
        g, h = align(g, h)
        vg, vh = max(g.valuation(), 1), max(h.valuation(), 1)
        order = self._composed_order(vg, vh, g.order)
        g, h = g.truncate(order), h.truncate(order)
        return self._horner(g, h, Jet2.constant(0.0, order))

    def _horner(self, g, h, zero):
        n = self._order
        total = zero
        for i in range(n, -1, -1):
            row = zero
            for j in range(n - i, -1, -1):
                row = row * h + float(self._c[i, j])
            total = total * g + row
        return total

    def __str__(self) -> str:
        terms = []
        for d in range(self._order + 1):
            for i in range(d, -1, -1):
                v = self._c[i, d - i]
                if v != 0.0:
                    mono = "*".join(
                        m for m in (_monomial("x", i), _monomial("y", d - i)) if m
                    )
                    terms.append((v, mono))
        if not terms:
            return "0"
        return "".join(_fmt_coeff(v, m, i == 0) for i, (v, m) in enumerate(terms))


def align(*jets):
    """Truncate jets (or jet vectors) to their common minimal order."""
    order = min(j.order for j in jets)
    return tuple(j if j.order == order else j.truncate(order) for j in jets)


def compose1_into2(f: Jet2, g: Jet1, h: Jet1) -> Jet1:
    """Substitute ``x := g(t)``, ``y := h(t)`` into ``f``."""
    return f.compose(g, h)


# -- 3-vectors over the jet rings ----------------------------------------

@dataclass(frozen=True)
class JetVector3:
    """Three jets of equal order, treated as a vector in R^3."""

    x: _Jet
    y: _Jet
    z: _Jet

    def __post_init__(self):
        if not (self.x.order == self.y.order == self.z.order):
            raise OrderMismatch(
                f"components have orders {self.x.order}, {self.y.order}, {self.z.order}"
            )

    @property
    def order(self) -> int:
        return self.x.order

    def __iter__(self) -> Iterator[_Jet]:
        return iter((self.x, self.y, self.z))

    def map(self, fn):
        return type(self)(*(fn(c) for c in self))

    def truncate(self, order: int):
        return self.map(lambda c: c.truncate(order))

    def __add__(self, other):
        return type(self)(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        return type(self)(*(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return self.map(lambda c: -c)

    def scale(self, s):
        """Multiply every component by a scalar or a scalar jet."""
        return self.map(lambda c: c * s)

    def const(self) -> np.ndarray:
        return np.array([c.const for c in self])

    def dot(self, other) -> _Jet:
        return dot(self, other)

    def cross(self, other):
        return cross(self, other)

    def norm_sq(self) -> _Jet:
        return dot(self, self)


class MapGerm3(JetVector3):
    """A germ (R^2, 0) -> (R^3, 0) stored as three :class:`Jet2`."""

    def dx(self) -> "MapGerm3":
        return self.map(Jet2.dx)

    def dy(self) -> "MapGerm3":
        return self.map(Jet2.dy)

    def divide_by_monomial(self, i: int, j: int) -> "MapGerm3":
        return self.map(lambda c: c.divide_by_monomial(i, j))

    def restrict_x(self) -> "Curve3":
        return Curve3(*(c.restrict_x() for c in self))

    def restrict_y(self) -> "Curve3":
        return Curve3(*(c.restrict_y() for c in self))

    def compose(self, g: Jet1, h: Jet1) -> "Curve3":
        return Curve3(*align(*(c.compose(g, h) for c in self)))

    def compose2(self, g: Jet2, h: Jet2) -> "MapGerm3":
        return MapGerm3(*align(*(c.compose2(g, h) for c in self)))

    def derivative_at_zero(self, i: int, j: int) -> np.ndarray:
        return np.array([c.derivative_at_zero(i, j) for c in self])

    def __call__(self, x, y):
        return np.array([c(x, y) for c in self])

    def __str__(self) -> str:
        return f"({self.x}, {self.y}, {self.z})"


class Curve3(JetVector3):
    """A curve germ (R, 0) -> R^3 stored as three :class:`Jet1`."""

    def derivative(self) -> "Curve3":
        return self.map(Jet1.derivative)

    def derivative_at_zero(self, k: int) -> np.ndarray:
        return np.array([c.derivative_at_zero(k) for c in self])

    def __call__(self, t):
        return np.array([c(t) for c in self])

    def __str__(self) -> str:
        return f"({self.x}, {self.y}, {self.z})"


def dot(a: JetVector3, b: JetVector3) -> _Jet:
    if a.order != b.order:
        raise OrderMismatch(f"vector orders differ ({a.order} vs {b.order})")
    return a.x * b.x + a.y * b.y + a.z * b.z


def cross(a: JetVector3, b: JetVector3) -> JetVector3:
    if a.order != b.order:
        raise OrderMismatch(f"vector orders differ ({a.order} vs {b.order})")
    return type(a)(
        a.y * b.z - a.z * b.y,
        a.z * b.x - a.x * b.z,
        a.x * b.y - a.y * b.x,
    )


def det3(a: JetVector3, b: JetVector3, c: JetVector3) -> _Jet:
    return dot(a, cross(b, c))


@dataclass(frozen=True)
class VectorField2:
    """The vector field ``u_comp * d/dx + v_comp * d/dy`` with jet coefficients."""

    u_comp: Jet2
    v_comp: Jet2

    @classmethod
    def d_x(cls, order: int) -> "VectorField2":
        return cls(Jet2.constant(1.0, order), Jet2.constant(0.0, order))

    @classmethod
    def d_y(cls, order: int) -> "VectorField2":
        return cls(Jet2.constant(0.0, order), Jet2.constant(1.0, order))

    @property
    def order(self) -> int:
        return min(self.u_comp.order, self.v_comp.order)

    def apply(self, f):
        """One application of the field to a :class:`Jet2` or :class:`MapGerm3`."""
        if isinstance(f, MapGerm3):
            return f.map(self.apply)
        if f.order == 0:
            raise OrderExhausted("cannot differentiate an order-0 jet")
        fx, fy = f.dx(), f.dy()
        u, v, fx, fy = align(self.u_comp, self.v_comp, fx, fy)
        return u * fx + v * fy


def directional_derivative(f, zeta: VectorField2, times: int = 1):
    """``zeta`` applied ``times`` times to ``f`` (componentwise for germs)."""
    if times < 1:
        raise ValueError("times must be positive")
    if times > f.order:
        raise OrderExhausted(
            f"{times} derivatives exhaust a jet of order {f.order}"
        )
    for _ in range(times):
        f = zeta.apply(f)
    return f
