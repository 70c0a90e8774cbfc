"""Degree-5 jets of folded cuspidal edges and the invariants that fix them.

The 5-jet of ``phi`` is written as
``(x, sum f_i x^i + y^2/2, sum g_ij x^i y^j)`` and every coefficient is tied
to the sixteen invariants listed in :data:`SIXTEEN`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

from .folded import double_point_curve, dpc_derivatives, folded_surface
from .invariants import bias_and_secondary, kappa_c, kappa_nu, kappa_s, kappa_t
from .surfaces import EdgeCoefficients, frontal_structure
from .tolerance import close, rel_err

__all__ = [
    "Jet5Coefficients",
    "expand_to_5jet",
    "printed_expansion",
    "SIXTEEN",
    "sixteen_invariants",
    "Relation",
    "invariant_dictionary",
    "DeterminationResult",
    "determination_check",
    "perturb_beyond_5jet",
    "LOW_DEGREE_SLOTS",
    "HIGH_DEGREE_SLOTS",
    "perturb_slot",
    "sensitivity_grid",
    "relations_hold",
]

SIXTEEN = (
    "kappa_s", "kappa_nu", "kappa_t",
    "kappa_s'", "kappa_nu'", "kappa_t'", "kappa_c'",
    "kappa_s''", "kappa_nu''", "kappa_t''", "kappa_c''",
    "kappa_s'''", "kappa_nu'''",
    "B", "kappa_c_r", "tau_sing",
)


@dataclass(frozen=True)
class Jet5Coefficients:
    """Coefficients ``f_i`` (second component) and ``g_ij`` (third component) of ``j^5 phi``."""

    f2: float
    f3: float
    f4: float
    f5: float
    g20: float
    g30: float
    g40: float
    g50: float
    g12: float
    g22: float
    g32: float
    g13: float
    g23: float
    g04: float
    g05: float
    g14: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def max_rel_diff(self, other: "Jet5Coefficients") -> dict:
        a, b = self.as_dict(), other.as_dict()
        return {k: rel_err(a[k], b[k]) for k in a}


def expand_to_5jet(c: EdgeCoefficients) -> Jet5Coefficients:
    """Read the degree-5 coefficients off the jet of the folded germ."""
    c.validate("folded")
    phi = folded_surface(c)
    y, z = phi.y, phi.z
    kw = {f"f{i}": y[(i, 0)] for i in range(2, 6)}
    for name in ("g20", "g30", "g40", "g50", "g12", "g22", "g32",
                 "g13", "g23", "g04", "g05", "g14"):
        kw[name] = z[(int(name[1]), int(name[2]))]
    return Jet5Coefficients(**kw)


def printed_expansion(c: EdgeCoefficients, x5_factor: float = 1.0 / 3.0) -> Jet5Coefficients:
    """The monomial coefficients as closed expressions in the derivatives at 0.

    ``x5_factor`` multiplies ``b0'' b0'''`` in the ``x^5`` coefficient of the
    third component. The reference expansion prints ``1/3``; squaring
    ``b0`` gives ``1/6``.
    """
    D = c.d
    a = [D("a", k) for k in range(6)]
    p = [D("b0", k) for k in range(5)]
    q = [D("b1", k) for k in range(3)]
    r = [D("b2", k) for k in range(2)]
    s0 = c.b3.const
    return Jet5Coefficients(
        f2=a[2] / 2, f3=a[3] / 6, f4=a[4] / 24, f5=a[5] / 120,
        g20=p[1] ** 2,
        g30=p[1] * p[2],
        g40=p[1] * p[3] / 3 + p[2] ** 2 / 4,
        g50=p[1] * p[4] / 12 + x5_factor * p[2] * p[3],
        g12=2 * p[1] * q[0],
        g22=2 * p[1] * q[1] + p[2] * q[0],
        g32=p[1] * q[2] + p[2] * q[1] + p[3] * q[0] / 3,
        g13=2 * p[1] * r[0],
        g23=2 * p[1] * r[1] + p[2] * r[0],
        g04=q[0] ** 2,
        g05=2 * q[0] * r[0],
        g14=2 * (q[0] * q[1] + p[1] * s0),
    )


def sixteen_invariants(c: EdgeCoefficients) -> dict:
    """The sixteen invariants of the folded germ, all evaluated from jets."""
    fd = frontal_structure(folded_surface(c))
    out = {}
    for name, fn, top in (("kappa_s", kappa_s, 3), ("kappa_nu", kappa_nu, 3),
                          ("kappa_t", kappa_t, 2), ("kappa_c", kappa_c, 2)):
        j = fn(fd)
        for k in range(top + 1):
            out[name + "'" * k] = j.derivative_at_zero(k)
    out.pop("kappa_c")
    bias = bias_and_secondary(fd)
    out["B"] = bias.B
    out["kappa_c_r"] = bias.kappa_c_r
    out["tau_sing"] = dpc_derivatives(double_point_curve(c)).tilde.tau_sing
    return {k: out[k] for k in SIXTEEN}


@dataclass(frozen=True)
class Relation:
    name: str
    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return rel_err(self.lhs, self.rhs)


def _relation_rhs(v: dict, corrected: bool = False) -> dict:
    ks, kn, kt = v["kappa_s"], v["kappa_nu"], v["kappa_t"]
    ks1, kn1, kt1 = v["kappa_s'"], v["kappa_nu'"], v["kappa_t'"]
    ks2, kn2, kt2 = v["kappa_s''"], v["kappa_nu''"], v["kappa_t''"]
    out = {
        "f2": ks / 2,
        "f3": (ks1 - kn * kt) / 6,
        "f4": (ks2 - kn * kt1 - 2 * kn1 * kt + 3 * kn**2 * ks + 3 * ks**3) / 24,
        "g20": kn / 2,
        "g30": (kn1 + kt * ks) / 6,
        "g40": (kn2 + kt1 * ks + 2 * kt * ks1 + 3 * kn * ks**2 + kn**3
                - 3 * kt**2 * kn) / 24,
        "g12": kt / 2,
        "g22": (kt1 + ks * kn) / 4,
        "g32": (kt2 + ks1 * kn + 2 * ks * kn1 + 2 * kt**3 + 4 * kt * kn**2) / 12,
        "g13": v["kappa_c'"] / 6,
        "g23": v["kappa_c''"] / 12,
        "g04": v["B"] / 24,
        "g05": v["kappa_c_r"] / 360,
    }
    if corrected:
        # terms missing from the reference versions of these three relations
        out["f4"] -= ks * kt**2 / 24
        out["g40"] += (2 * kn**3 + 2 * kt**2 * kn) / 24
        out["g32"] -= kt * kn**2 / 12
    return out


def invariant_dictionary(c: EdgeCoefficients, invariants: dict | None = None,
                         corrected: bool = False) -> list:
    """The thirteen explicit coefficient/invariant relations with both sides evaluated.

    Left sides come from :func:`expand_to_5jet`, right sides from the
    directly evaluated invariants. With ``corrected=False`` the right sides
    are the reference expressions, three of which (``f4``, ``g40``, ``g32``)
    drop a cubic term; ``corrected=True`` restores ``-ks kt^2`` in ``24 f4``,
    uses ``3 kn^3 - kt^2 kn`` in ``24 g40`` and ``3 kt kn^2`` in ``12 g32``.
    """
    coeffs = expand_to_5jet(c).as_dict()
    inv = invariants if invariants is not None else sixteen_invariants(c)
    return [Relation(k, coeffs[k], rhs)
            for k, rhs in _relation_rhs(inv, corrected).items()]


@dataclass
class DeterminationResult:
    """Outcome of comparing two germs through their sixteen invariants.

    ``status`` is ``Determined`` (invariants and 5-jets agree),
    ``Mismatch`` (some invariant differs) or ``Counterexample`` (invariants
    agree but the 5-jets do not).
    """

    status: str
    invariant_diffs: dict = field(default_factory=dict)
    coefficient_diffs: dict = field(default_factory=dict)
    coefficient_tol: float = 0.0

    @property
    def determined(self) -> bool:
        return self.status == "Determined"

    def mismatched_invariants(self, tol: float) -> dict:
        return {k: d for k, d in self.invariant_diffs.items() if d > tol}


def determination_check(c1: EdgeCoefficients, c2: EdgeCoefficients,
                        tol: float = 1e-9) -> DeterminationResult:
    """Compare two folded germs given in the normal-form frame.

    When the sixteen invariants agree within ``tol`` the 5-jets are required
    to agree within ``tol * 10 * (1 + M)^3``, ``M`` the largest invariant in
    absolute value: the coefficients are polynomials of degree at most three
    in the invariants, apart from the ``xy^4`` slot.
    """
    v1, v2 = sixteen_invariants(c1), sixteen_invariants(c2)
    inv_diffs = {k: rel_err(v1[k], v2[k]) for k in SIXTEEN}
    j1, j2 = expand_to_5jet(c1), expand_to_5jet(c2)
    co_diffs = j1.max_rel_diff(j2)
    m = max(abs(x) for x in v1.values())
    ctol = tol * 10.0 * (1.0 + m) ** 3
    if max(inv_diffs.values()) > tol:
        return DeterminationResult("Mismatch", inv_diffs, co_diffs, ctol)
    if max(co_diffs.values()) > ctol:
        return DeterminationResult("Counterexample", inv_diffs, co_diffs, ctol)
    return DeterminationResult("Determined", inv_diffs, co_diffs, ctol)


# Taylor slots of the normal-form functions, split by the lowest degree they
# reach in phi. ``("b3", (i, j))`` is the coefficient of x^i y^j in b3.
LOW_DEGREE_SLOTS = (
    [("a", k) for k in range(2, 6)]
    + [("b0", k) for k in range(1, 5)]
    + [("b1", k) for k in range(0, 3)]
    + [("b2", k) for k in range(0, 2)]
    + [("b3", (0, 0))]
)


def HIGH_DEGREE_SLOTS(order: int) -> list:
    """Slots that only enter monomials of degree >= 6 of ``phi``."""
    out = [("a", k) for k in range(6, order + 1)]
    out += [("b0", k) for k in range(5, order + 1)]
    out += [("b1", k) for k in range(3, order + 1)]
    out += [("b2", k) for k in range(2, order + 1)]
    m = order - 4
    out += [("b3", (i, j)) for i in range(m + 1) for j in range(m + 1 - i) if i + j >= 1]
    return out


def perturb_slot(c: EdgeCoefficients, slot, eps: float) -> EdgeCoefficients:
    """Add ``eps`` to one Taylor coefficient (not derivative) of ``c``."""
    name, idx = slot
    jet = getattr(c, name)
    coeffs = jet.coeffs.copy()
    coeffs[idx] += eps
    return c.replace(**{name: type(jet)(coeffs, jet.order)})


def perturb_beyond_5jet(c: EdgeCoefficients, rng: np.random.Generator,
                        scale: float = 0.1) -> EdgeCoefficients:
    """Randomly change every slot that only reaches degree >= 6 of ``phi``."""
    for slot in HIGH_DEGREE_SLOTS(c.order):
        c = perturb_slot(c, slot, scale * rng.uniform(-1.0, 1.0))
    return c


def sensitivity_grid(c: EdgeCoefficients, eps: float = 1e-3,
                     threshold: float = 1e-6) -> dict:
    """Largest change of the sixteen invariants when each low-degree slot moves by ``eps``.

    Returns ``{slot: (max_change, detected)}``.
    """
    base = sixteen_invariants(c)
    out = {}
    for slot in LOW_DEGREE_SLOTS:
        moved = sixteen_invariants(perturb_slot(c, slot, eps))
        change = max(abs(moved[k] - base[k]) for k in SIXTEEN)
        out[slot] = (change, change > threshold)
    return out


def relations_hold(c: EdgeCoefficients, rtol: float = 1e-9, corrected: bool = False) -> bool:
    return all(close(r.lhs, r.rhs, rtol)
               for r in invariant_dictionary(c, corrected=corrected))
