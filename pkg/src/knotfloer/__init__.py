"""Exact reduced knot Floer complexes over F2[U].

Build staircase complexes of L-space knots, take connected sums by tensor
product, cancel horizontal differentials while transporting the U-action,
and compute the concordance invariants d1 and tau, all in exact arithmetic.
"""

from .algebra import UMatrix, UPoly, smith_reduce
from .complexes import (
    FLevelComplex,
    FreeUComplex,
    Generator,
    a0_minus,
    hat_complex,
    mirror,
    truncate,
    unknot_complex,
    validate,
)
from .invariants import HomologySummary, alexander_from_complex, d1, genus_bounds_report, surgery_d, tau, graded_homology
from .laurent import LaurentPoly
from .reduction import ReducedComplex, cancel_arrow, default_depth, reduce, tower_profile
from .staircase import (
    Staircase,
    cable_alexander,
    concordance_verdict,
    is_lspace_form,
    representative_staircase,
    staircase_complex,
    staircase_from_alexander,
    torus_knot_alexander,
    torus_staircase,
)
from .tensor import sum_knot, tensor_free, tensor_reduced_free

__version__ = "0.1.0"

__all__ = [
    "UMatrix",
    "UPoly",
    "smith_reduce",
    "FLevelComplex",
    "FreeUComplex",
    "Generator",
    "a0_minus",
    "hat_complex",
    "mirror",
    "truncate",
    "unknot_complex",
    "validate",
    "HomologySummary",
    "alexander_from_complex",
    "d1",
    "genus_bounds_report",
    "graded_homology",
    "surgery_d",
    "tau",
    "LaurentPoly",
    "ReducedComplex",
    "cancel_arrow",
    "default_depth",
    "reduce",
    "tower_profile",
    "Staircase",
    "cable_alexander",
    "concordance_verdict",
    "is_lspace_form",
    "representative_staircase",
    "staircase_complex",
    "staircase_from_alexander",
    "torus_knot_alexander",
    "torus_staircase",
    "sum_knot",
    "tensor_free",
    "tensor_reduced_free",
    "__version__",
]
