"""Relative comparisons and the three-way zero test used by the classifiers."""

from __future__ import annotations

import numpy as np

ZERO_RTOL = 1e-7
UNRESOLVED_FACTOR = 10.0


def rel_err(a, b) -> float:
    """``|a - b| / max(1, |a|, |b|)``, elementwise maximum for arrays.

    The floor of 1 turns the test into an absolute one for quantities near
    zero, where a pure relative error is meaningless.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return float(np.max(np.abs(a - b) / scale)) if a.size else 0.0


def close(a, b, rtol: float = 1e-9) -> bool:
    return rel_err(a, b) <= rtol


def zero_status(value: float, scale: float, rtol: float = ZERO_RTOL) -> str:
    """Classify ``value`` as ``"zero"``, ``"nonzero"`` or ``"unresolved"``.

    ``value`` counts as zero when ``|value| <= rtol * scale`` and as nonzero
    above ``UNRESOLVED_FACTOR`` times that; the band in between is left open.
    """
    thr = rtol * max(scale, 1e-300)
    if abs(value) <= thr:
        return "zero"
    if abs(value) > UNRESOLVED_FACTOR * thr:
        return "nonzero"
    return "unresolved"
