"""Invariants, folding and contact geometry of cuspidal edges and cuspidal cross-caps.

Germs are handled as truncated Taylor jets (:mod:`cuspidal.jet`). A cuspidal
edge in normal form is described by :class:`EdgeCoefficients`; folding it
gives a cuspidal cross-cap whose invariants are available both by direct jet
evaluation (:mod:`cuspidal.invariants`) and in closed form
(:mod:`cuspidal.folded`).
"""

from .errors import (  # noqa: F401
    ConstraintViolation,
    CuspidalError,
    NotApplicable,
    NotCrossCap,
    RegularityViolation,
)
from .jet import Curve3, Jet1, Jet2, JetVector3, MapGerm3, VectorField2
from .surfaces import (
    EdgeCoefficients,
    FrontalData,
    classify_Sk,
    fold,
    frontal_structure,
    model_cross_cap,
    model_Sk,
    normal_form,
    normal_form_values,
    tangent_developable,
)
from .invariants import (
    bias_and_secondary,
    curve_invariants_regular,
    curve_invariants_singular,
    direct_report,
    kappa_c,
    kappa_nu,
    kappa_s,
    kappa_t,
)
from .folded import (
    closed_form_invariants,
    closed_form_values,
    double_point_curve,
    dpc_closed_forms,
    dpc_limits,
    folded_surface,
)
from .order5 import determination_check, expand_to_5jet, invariant_dictionary
from .heights import (
    Direction3,
    classify_along_dpc,
    classify_along_edge,
    classify_folded_height,
    classify_height,
    detect_Ak_1d,
    height_function,
    stratum_direction,
)
from .discriminants import back_substitute, sheet

__version__ = "0.1.0"
