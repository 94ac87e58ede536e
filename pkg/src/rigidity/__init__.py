"""Pointwise curvature algebra for submanifolds of space forms.

The package computes, from an ambient curvature c and a stack of second
fundamental form matrices, the induced curvature tensor and its invariants,
Simons-type trace identities, the DDVV commutator inequality, and
sectional-curvature pinching verdicts against the classical rigidity
thresholds.  Closed-form model data and a finite-difference pipeline for
explicit immersions feed the same machinery.
"""

from .curvature import (
    CurvatureTensor,
    FundamentalData,
    PlaneSpec,
    ScalarInvariants,
    align_mean_frame,
    gram_diagonalize,
    invariants,
    kmin_bracket,
    normal_curvature,
    riemann,
    sectional,
)
from .ddvv import DdvvReport, detect_equality, extremal_pair, maximize_ratio
from .immersion import ImmersionSpec, PointSample, builtin, second_fundamental_form
from .models import (
    ModelSpec,
    build_model,
    product_of_spheres,
    pseudo_umbilical_extend,
    totally_geodesic,
    umbilical_sphere,
    veronese,
)
from .pinching import HypothesisError, PinchVerdict, verdict
from .simons import ContractionReport, contraction_report, laplacian_bound, optimal_parameter

__all__ = [
    "ContractionReport",
    "CurvatureTensor",
    "DdvvReport",
    "FundamentalData",
    "HypothesisError",
    "ImmersionSpec",
    "ModelSpec",
    "PinchVerdict",
    "PlaneSpec",
    "PointSample",
    "ScalarInvariants",
    "align_mean_frame",
    "build_model",
    "builtin",
    "contraction_report",
    "detect_equality",
    "extremal_pair",
    "gram_diagonalize",
    "invariants",
    "kmin_bracket",
    "laplacian_bound",
    "maximize_ratio",
    "normal_curvature",
    "optimal_parameter",
    "product_of_spheres",
    "pseudo_umbilical_extend",
    "riemann",
    "second_fundamental_form",
    "sectional",
    "totally_geodesic",
    "umbilical_sphere",
    "verdict",
    "veronese",
]
