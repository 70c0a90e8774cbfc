"""Sampling discriminants of the versal families and exporting them.

Run with ``python3 demos/discriminant_export.py [outdir]``. Each of the six
normal forms gets its parallel discriminant (PD), double point curve
discriminant (DPC) and cuspidal edge discriminant (CE) sampled on a grid.
Every sample is checked by substituting its witness back into the defining
equations, and the sheets are written as text point clouds and PLY meshes.
"""
import sys
from pathlib import Path

import numpy as np

from cuspidal.discriminants import (
    LABELS,
    NORMAL_FORM_IDS,
    back_substitute,
    export_ply,
    export_point_cloud,
    sheet,
)

outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "discriminants")
outdir.mkdir(parents=True, exist_ok=True)

# %% Sample, verify and export every sheet.
for nf in NORMAL_FORM_IDS:
    for label in LABELS:
        sh = sheet(nf, label, grid=24)
        if not sh.branches:
            print(f"{nf:<7}{label:<4} empty ({sh.empty_reason})")
            continue
        residual = np.max(np.abs(back_substitute(sh)))
        stem = f"{nf.replace('+-', 'pm').replace('+', 'p')}_{label}"
        export_point_cloud(sh, outdir / f"{stem}.txt")
        export_ply(sh, outdir / f"{stem}.ply")
        print(f"{nf:<7}{label:<4} {len(sh.samples):>5} points, "
              f"branches {sh.parametrization_id}, max residual {residual:.1e}")

print(f"\nwritten to {outdir.resolve()}")
