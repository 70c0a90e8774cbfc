"""Sampled discriminants of the versal families of submersions on the model cross-cap.

For a family ``G(u, v, w, a1, a2)`` let ``F(x, y, a) = G(x, y^2, x y^3, a)``,
``H(y, a) = F(0, y, a)`` and ``P(x, a) = F(x, 0, a)``. The sets

* ``PD``: ``(a, F)`` with ``F_x = F_y = 0``,
* ``DPC``: ``(a, H)`` with ``H_y = 0``,
* ``CE``: ``(a, P)`` with ``P_x = 0``

are sampled from explicit parametrizations. Each sample carries the critical
point it came from, and :func:`back_substitute` re-evaluates the critical
equations there with functions generated independently from ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import sympy as sp

from .errors import InvalidModuli

__all__ = [
    "LABELS",
    "NORMAL_FORM_IDS",
    "Branch",
    "DiscriminantSheet",
    "sheet",
    "back_substitute",
    "containment_residual",
    "dpc_is_even",
    "family",
    "export_point_cloud",
    "read_point_cloud",
    "export_ply",
    "DEFAULT_GRID",
]

LABELS = ("PD", "DPC", "CE")
NORMAL_FORM_IDS = ("u+-v", "u+-v2", "u+-v3", "v+-u2", "v+u3", "w")
DEFAULT_GRID = 64

_u, _v, _w, _x, _y, _a1, _a2, _b, _c, _s, _sig = sp.symbols("u v w x y a1 a2 b c s sigma")


def family(normal_form_id: str):
    """The versal family ``G`` as a sympy expression in ``u, v, w, a1, a2``.

    ``s`` is the sign of the term written with ``±`` in the leading slot,
    ``sigma`` the sign of ``v`` for the rows ``±v ± u^k``; ``b, c`` are the
    moduli of the ``w`` row.
    """
    forms = {
        "u+-v": _u + _s * _v,
        "u+-v2": _u + _s * _v**2 + _a1 * _v,
        "u+-v3": _u + _s * _v**3 + _a1 * _v + _a2 * _v**2,
        "v+-u2": _sig * _v + _s * _u**2 + _a1 * _u,
        "v+u3": _sig * _v + _s * _u**3 + _a1 * _u + _a2 * _u**2,
        "w": _w + _s * _u**2 + _b * _u * _v + _c * _v**2 + _a1 * _u + _a2 * _v,
    }
    if normal_form_id not in forms:
        raise ValueError(f"unknown normal form {normal_form_id!r}; choose from {NORMAL_FORM_IDS}")
    return forms[normal_form_id]


@lru_cache(maxsize=None)
def _equations(normal_form_id: str, label: str) -> Callable:
    """Numeric ``(value, *partials)`` of ``F``, ``H`` or ``P`` for one row."""
    G = family(normal_form_id)
    F = G.subs({_u: _x, _v: _y**2, _w: _x * _y**3}, simultaneous=True)
    args = (_x, _y, _a1, _a2, _s, _sig, _b, _c)
    if label == "PD":
        exprs = [F, sp.diff(F, _x), sp.diff(F, _y)]
    elif label == "DPC":
        H = F.subs(_x, 0)
        exprs = [H, sp.diff(H, _y)]
    elif label == "CE":
        P = F.subs(_y, 0)
        exprs = [P, sp.diff(P, _x)]
    else:
        raise ValueError(f"unknown label {label!r}")
    return sp.lambdify(args, exprs, "numpy")


@dataclass
class Branch:
    """One parametrized component; ``samples[k] = (a1, a2, value)`` came from ``witnesses[k] = (x, y, a1, a2)``.

    ``shape`` is the parameter grid shape, used for meshing.
    """

    id: str
    samples: np.ndarray
    witnesses: np.ndarray
    shape: tuple


@dataclass
class DiscriminantSheet:
    label: str
    normal_form_id: str
    params: dict
    branches: list = field(default_factory=list)
    empty_reason: Optional[str] = None

    @property
    def samples(self) -> np.ndarray:
        if not self.branches:
            return np.zeros((0, 3))
        return np.vstack([br.samples for br in self.branches])

    @property
    def witnesses(self) -> np.ndarray:
        if not self.branches:
            return np.zeros((0, 4))
        return np.vstack([br.witnesses for br in self.branches])

    @property
    def parametrization_id(self) -> tuple:
        return tuple(br.id for br in self.branches)


def _grid(n: int, box=(-1.0, 1.0)):
    t = np.linspace(box[0], box[1], n)
    return np.meshgrid(t, t, indexing="ij")


def _branch(bid, a1, a2, value, x, y) -> Branch:
    shape = np.shape(a1)
    cols = [np.broadcast_to(np.asarray(c, dtype=float), shape).ravel() for c in (a1, a2, value)]
    wit = [np.broadcast_to(np.asarray(c, dtype=float), shape).ravel() for c in (x, y, a1, a2)]
    return Branch(bid, np.column_stack(cols), np.column_stack(wit), shape)


def _check_moduli(nf: str, s: int, b: float, c: float) -> None:
    if nf != "w":
        return
    if abs(c) <= 1e-12 or abs(c - s * b * b / 4.0) <= 1e-12:
        raise InvalidModuli(f"the w row needs c != 0 and c != {s:+d} b^2/4 (got b={b}, c={c})")


def sheet(normal_form_id: str, label: str, params: Optional[dict] = None,
          grid: int = DEFAULT_GRID, box=(-1.0, 1.0)) -> DiscriminantSheet:
    """Sample one discriminant of one normal form over a ``grid x grid`` parameter box.

    ``params`` may set ``s`` and ``sigma`` (signs, default +1) and ``b``, ``c``
    (moduli of the ``w`` row, default 0.5 and 1.0).
    """
    p = {"s": 1, "sigma": 1, "b": 0.5, "c": 1.0}
    p.update(params or {})
    s, b, c = int(p["s"]), float(p["b"]), float(p["c"])
    if s not in (1, -1) or int(p["sigma"]) not in (1, -1):
        raise ValueError("signs must be +1 or -1")
    _check_moduli(normal_form_id, s, b, c)
    family(normal_form_id)
    if label not in LABELS:
        raise ValueError(f"unknown label {label!r}")
    out = DiscriminantSheet(label, normal_form_id, p)
    P, Q = _grid(grid, box)
    zero = np.zeros_like(P)
    nf = normal_form_id

    if nf in ("u+-v", "u+-v2", "u+-v3"):
        if label in ("PD", "CE"):
            out.empty_reason = "dF/dx = 1 never vanishes"
            return out
        out.branches.append(_branch("plane", P, Q, zero, zero, zero))
        if nf == "u+-v2":
            # dH/dy = 4 s y^3 + 2 a1 y
            y, a2 = P, Q
            out.branches.append(_branch("B2", -2 * s * y**2, a2, -s * y**4, zero, y))
        elif nf == "u+-v3":
            # dH/dy = 6 s y^5 + 2 a1 y + 4 a2 y^3
            y, a2 = P, Q
            out.branches.append(_branch(
                "B3", -3 * s * y**4 - 2 * a2 * y**2, a2, -2 * s * y**6 - a2 * y**4, zero, y))
        return out

    if nf in ("v+-u2", "v+u3"):
        if label == "DPC":
            out.branches.append(_branch("plane", P, Q, zero, zero, zero))
            return out
        x, a2 = P, Q
        if nf == "v+-u2":
            out.branches.append(_branch("A1", -2 * s * x, a2, -s * x**2, x, zero))
        else:
            out.branches.append(_branch(
                "A2", -3 * s * x**2 - 2 * a2 * x, a2, -2 * s * x**3 - a2 * x**2, x, zero))
        return out

    # w row
    if label == "PD":
        x, y = P, Q
        a1 = -y**3 - 2 * s * x - b * y**2
        a2 = -1.5 * x * y - b * x - 2 * c * y**2
        value = -1.5 * x * y**3 - s * x**2 - b * x * y**2 - c * y**4
        out.branches.append(_branch("cross-cap", a1, a2, value, x, y))
    if label in ("PD", "CE"):
        x, a2 = P, Q
        out.branches.append(_branch("edge-dual", -2 * s * x, a2, -s * x**2, x, zero))
    if label == "DPC":
        out.branches.append(_branch("plane", P, Q, zero, zero, zero))
        a1, y = P, Q
        out.branches.append(_branch("B2", a1, -2 * c * y**2, -c * y**4, zero, y))
    return out


def back_substitute(sh: DiscriminantSheet) -> np.ndarray:
    """Per-sample residual ``max(|critical equations|, |value - F|)`` at the witness."""
    if not sh.branches:
        return np.zeros(0)
    fn = _equations(sh.normal_form_id, sh.label)
    p = sh.params
    smp, wit = sh.samples, sh.witnesses
    x, y, a1, a2 = wit.T
    vals = fn(x, y, a1, a2, p["s"], p["sigma"], p["b"], p["c"])
    vals = [np.broadcast_to(np.asarray(v, dtype=float), x.shape) for v in vals]
    res = np.abs(vals[0] - smp[:, 2])
    for d in vals[1:]:
        res = np.maximum(res, np.abs(d))
    res = np.maximum(res, np.abs(a1 - smp[:, 0]))
    res = np.maximum(res, np.abs(a2 - smp[:, 1]))
    return res


def containment_residual(sub: DiscriminantSheet, label: str) -> np.ndarray:
    """Residual of ``label``'s critical equations at the witnesses of ``sub``.

    Zero rows mean each sample of ``sub`` also lies on the ``label``
    discriminant of the same family, e.g. ``CE`` inside ``PD`` for the w row.
    """
    if not sub.branches:
        return np.zeros(0)
    view = DiscriminantSheet(label, sub.normal_form_id, sub.params, sub.branches)
    return back_substitute(view)


def dpc_is_even(normal_form_id: str) -> bool:
    """Whether ``H(y) = F(0, y)`` is even in ``y``, so DPC samples come in pairs ``+-y``."""
    H = family(normal_form_id).subs({_u: 0, _v: _y**2, _w: 0}, simultaneous=True)
    return sp.expand(H - H.subs(_y, -_y)) == 0


def _fmt(v: float) -> str:
    return np.format_float_positional(float(v), precision=12, unique=False, fractional=False, trim="-")


def export_point_cloud(sh: DiscriminantSheet, path) -> Path:
    """Write ``# discriminant <label> <id>`` then one ``a1 a2 value`` row per sample."""
    path = Path(path)
    lines = [f"# discriminant {sh.label} {sh.normal_form_id}"]
    lines += [" ".join(_fmt(v) for v in row) for row in sh.samples]
    path.write_text("\n".join(lines) + "\n")
    return path


def read_point_cloud(path):
    """Return ``(label, normal_form_id, samples)`` from a point-cloud file."""
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("# discriminant "):
        raise ValueError(f"{path}: missing discriminant header")
    _, _, label, nf = text[0].split()
    rows = [list(map(float, ln.split())) for ln in text[1:] if ln.strip()]
    return label, nf, np.array(rows, dtype=float).reshape(-1, 3)


def export_ply(sh: DiscriminantSheet, path) -> Path:
    """ASCII PLY mesh: each branch's parameter grid split into triangles."""
    verts, faces, base = [], [], 0
    for br in sh.branches:
        n1, n2 = br.shape
        verts.append(br.samples)
        for i in range(n1 - 1):
            for j in range(n2 - 1):
                k = base + i * n2 + j
                faces.append((k, k + n2, k + 1))
                faces.append((k + 1, k + n2, k + n2 + 1))
        base += n1 * n2
    vs = np.vstack(verts) if verts else np.zeros((0, 3))
    header = [
        "ply", "format ascii 1.0",
        f"comment discriminant {sh.label} {sh.normal_form_id}",
        f"element vertex {len(vs)}",
        "property double x", "property double y", "property double z",
        f"element face {len(faces)}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    body = [" ".join(_fmt(v) for v in row) for row in vs]
    body += [f"3 {a} {b} {c}" for a, b, c in faces]
    path = Path(path)
    path.write_text("\n".join(header + body) + "\n")
    return path
