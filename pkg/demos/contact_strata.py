"""Contact of planes with a folded cuspidal edge.

Run with ``python3 demos/contact_strata.py``. For every stratum of the
direction sphere we pick a representative plane, then classify the height
function three ways: on the whole surface, restricted to the double point
curve, and restricted to the cuspidal edge. Each restricted classifier
reports a condition label and a detector label, and they should agree.
"""
import numpy as np

from cuspidal import (
    EdgeCoefficients,
    classify_along_dpc,
    classify_along_edge,
    classify_folded_height,
    stratum_direction,
)
from cuspidal.errors import CuspidalError
from cuspidal.heights import STRATA

rng = np.random.default_rng(7)
c = EdgeCoefficients.random(rng)

routes = {"surface": classify_folded_height, "dpc": classify_along_dpc,
          "edge": classify_along_edge}

# %% One row per stratum.
print(f"{'stratum':<16}{'direction':<28}" + "".join(f"{r:<24}" for r in routes))
for stratum in STRATA:
    v = stratum_direction(c, stratum)
    cells = []
    for fn in routes.values():
        try:
            cc = fn(c, v)
            mark = "" if cc.agree else " (routes disagree)"
            cells.append(f"{cc.kind}{mark}")
        except CuspidalError as exc:
            cells.append(type(exc).__name__)
    direction = "(" + ", ".join(f"{x:+.3f}" for x in v.as_array()) + ")"
    print(f"{stratum:<16}{direction:<28}" + "".join(f"{s:<24}" for s in cells))

# %% A random direction almost always gives a Morse height function.
v = stratum_direction(c, "generic")
print("\ngeneric surface class:", classify_folded_height(c, v))
