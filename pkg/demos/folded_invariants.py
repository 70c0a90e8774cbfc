"""Folding a cuspidal edge and reading off its invariants.

Run with ``python3 demos/folded_invariants.py``. The script builds a cuspidal
edge in normal form, folds it into a cuspidal cross-cap, and compares the
invariants computed directly from the jet of the folded map with their
closed forms in the normal-form coefficients. It then looks at the double
point curve of the cross-cap and its limiting curvature and torsion.
"""
import numpy as np

from cuspidal import (
    EdgeCoefficients,
    closed_form_values,
    double_point_curve,
    dpc_limits,
    folded_surface,
    frontal_structure,
    kappa_c,
    kappa_nu,
    kappa_s,
    kappa_t,
)

# %% A cuspidal edge given by a few Taylor coefficients; the rest are zero.
c = EdgeCoefficients.from_taylor(
    8,
    a={2: 0.6, 3: -0.3},
    b0={1: 0.8, 2: 0.25, 3: -0.1},
    b1={0: 0.5, 1: -0.4, 2: 0.2},
    b2={0: 0.7, 1: 0.3},
    b3={(0, 0): -0.2, (1, 0): 0.1, (0, 1): 0.05},
)

# %% Fold it. The result is a frontal whose singular set is the x-axis.
phi = folded_surface(c)
fd = frontal_structure(phi)
direct = {"kappa_s": kappa_s(fd), "kappa_nu": kappa_nu(fd),
          "kappa_t": kappa_t(fd), "kappa_c": kappa_c(fd)}

# %% Direct jet evaluation against the closed forms.
print(f"{'value':<12}{'direct':>16}{'closed form':>16}")
for key, value in closed_form_values(c).items():
    name, k = key.rstrip("'"), key.count("'")
    print(f"{key:<12}{direct[name].derivative_at_zero(k):>16.10f}{value:>16.10f}")

# %% The two sheets of the cross-cap meet along x = d(t), and d is even in t.
dpc = double_point_curve(c)
print("\nd(t): first coefficients", np.round(dpc.d.coeffs[:6], 6))

# %% Limits of curvature and torsion of the double point image. The numeric
# limits come from Richardson extrapolation; compare with the exact values
# and with the reference quotients, which are off by constant factors.
lim = dpc_limits(dpc, c)
print(f"\nlim kappa^2: numeric {lim.kappa_sq_numeric:.8f}  exact {lim.kappa_sq_limit:.8f}"
      f"  reference quotient {lim.kappa_sq_quotient:.8f}")
print(f"lim tau    : numeric {lim.tau_numeric:.8f}  exact {lim.tau_limit:.8f}"
      f"  reference quotient {lim.tau_quotient:.8f}")
