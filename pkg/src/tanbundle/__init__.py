"""Cheeger-Gromoll type metrics g_a on tangent bundles, their closed-form geometry and a finite-difference oracle."""
from ._kernels import BACKEND
from .base_geometry import ChartedManifold, TensorValue, euclidean, hyperbolic, space_form, sphere
from .bundle_metric import BundlePoint, TMVector, hlift, lift, make_point, vlift
from .errors import (
    DegenerateInputError,
    DomainError,
    ModelError,
    TanBundleError,
    UnsupportedOperationError,
    UsageError,
    WeightValidityError,
)
from .weights import PRESETS, WeightFunction, eval_weight, preset

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BundlePoint",
    "ChartedManifold",
    "DegenerateInputError",
    "DomainError",
    "ModelError",
    "PRESETS",
    "TMVector",
    "TanBundleError",
    "TensorValue",
    "UnsupportedOperationError",
    "UsageError",
    "WeightFunction",
    "WeightValidityError",
    "euclidean",
    "eval_weight",
    "hlift",
    "hyperbolic",
    "lift",
    "make_point",
    "preset",
    "space_form",
    "sphere",
    "vlift",
]
