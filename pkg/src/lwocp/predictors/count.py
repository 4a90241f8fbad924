"""Count-feature composite: a base learner on "how many training rows share my covariate"."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import FittedPredictor, PredictorSpec, fit_arrays, register


def _keys(X):
    X = np.ascontiguousarray(X)
    return [row.tobytes() for row in X]


@register
@dataclass(frozen=True)
class CountFeature(PredictorSpec):
    """Learn ``phi(x) = #{training rows with covariate bit-identical to x}``,
    then fit ``base`` on ``(phi(X_i), Y_i)``.
    """

    base: PredictorSpec
    kind = "count"

    def _fit(self, X, Y, rng_seed):
        counts = {}
        keys = _keys(X)
        for k in keys:
            counts[k] = counts.get(k, 0) + 1
        phi = np.array([counts[k] for k in keys], dtype=float)[:, None]
        return CountModel(counts, fit_arrays(self.base, phi, Y, rng_seed),
                          X.shape[1], Y.shape[1])


class CountModel(FittedPredictor):
    def __init__(self, counts, base_model, n_features, n_outputs):
        self.counts = counts
        self.base_model = base_model
        self.n_features, self.n_outputs = n_features, n_outputs

    def featurize(self, Q):
        return np.array([self.counts.get(k, 0) for k in _keys(Q)],
                        dtype=float)[:, None]

    def predict_array(self, Q):
        return self.base_model.predict_array(self.featurize(Q))
