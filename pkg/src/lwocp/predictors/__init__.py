"""Symmetric training algorithms behind a common :func:`fit` interface."""

from .base import (DummyPredictor, FittedPredictor, PredictorSpec, fit,
                   fit_arrays, format_spec, parse_spec, spec_from_dict,
                   spec_to_dict)
from .linear import Ridge
from .neighbors import KNN, Kernel
from .tree import Tree
from .mlp import MLP
from .count import CountFeature
from .stability import estimate_oos_stability

PAPER_PREDICTORS = (Ridge(1.0), KNN(10), Kernel(0.5), Tree(5, 2), MLP(20))

__all__ = [
    "DummyPredictor", "FittedPredictor", "PredictorSpec", "fit", "fit_arrays",
    "format_spec", "parse_spec", "spec_from_dict", "spec_to_dict",
    "Ridge", "KNN", "Kernel", "Tree", "MLP", "CountFeature",
    "estimate_oos_stability", "PAPER_PREDICTORS",
]
