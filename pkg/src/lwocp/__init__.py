"""Leave-a-window-out conformal prediction for dependent sequences."""

from .data import (STAR, LiftedCovariate, LiftedSequence, Point, RawSeries,
                   is_star, lift, mask, training_view)
from .methods import LwoResult, jackknife, lwo, lwo_scores, split_cp
from .predictors import (KNN, MLP, CountFeature, Kernel, Ridge, Tree, fit,
                         parse_spec)
from .scores import PredictionRegion, ScoreKind, quantile, region_contains, score

__version__ = "0.1.0"

__all__ = [
    "STAR", "CountFeature", "KNN", "Kernel", "LiftedCovariate", "LiftedSequence",
    "LwoResult", "MLP", "Point", "PredictionRegion", "RawSeries", "Ridge",
    "ScoreKind", "Tree", "fit", "is_star", "jackknife", "lift", "lwo",
    "lwo_scores", "mask", "parse_spec", "quantile", "region_contains", "score",
    "split_cp", "training_view",
]
