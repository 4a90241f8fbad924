"""Nearest-neighbor and Gaussian-kernel (Nadaraya-Watson) regression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import FittedPredictor, PredictorSpec, canonical_order, register


def _sq_dists(Q, X):
    d = (Q * Q).sum(1)[:, None] - 2.0 * Q @ X.T + (X * X).sum(1)[None, :]
    return np.maximum(d, 0.0)


@register
@dataclass(frozen=True)
class KNN(PredictorSpec):
    """Average response of the ``k`` Euclidean-nearest training points.

    Training rows are put in canonical order first and distance ties go
    to the earlier row, so the fit depends only on the training multiset.
    """

    k: int = 10
    kind = "knn"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")

    def _fit(self, X, Y, rng_seed):
        order = canonical_order(X, Y)
        return KNNModel(self.k, X[order], Y[order])


class KNNModel(FittedPredictor):
    def __init__(self, k, X, Y):
        self.k = min(k, len(X))
        self.X, self.Y = X, Y
        self.n_features, self.n_outputs = X.shape[1], Y.shape[1]

    def neighbors(self, Q):
        """Indices of the ``k`` nearest training rows for each query row."""
        # exact differences, not the expanded quadratic, so ties stay ties
        d = ((Q[:, None, :] - self.X[None, :, :]) ** 2).sum(-1)
        return np.argsort(d, axis=1, kind="stable")[:, : self.k]

    def predict_array(self, Q):
        return self.Y[self.neighbors(Q)].mean(axis=1)


@register
@dataclass(frozen=True)
class Kernel(PredictorSpec):
    """Nadaraya-Watson regression with weights ``exp(-|x - X_i|^2 / (2 h^2))``.

    Where every weight underflows the prediction falls back to the mean
    training response.
    """

    bandwidth: float = 0.5
    kind = "kernel"

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")

    def _fit(self, X, Y, rng_seed):
        order = canonical_order(X, Y)
        return KernelModel(self.bandwidth, X[order], Y[order])


_LOG_TINY = np.log(np.finfo(float).tiny)


class KernelModel(FittedPredictor):
    def __init__(self, h, X, Y):
        self.h, self.X, self.Y = h, X, Y
        self.n_features, self.n_outputs = X.shape[1], Y.shape[1]

    def predict_array(self, Q):
        logw = -_sq_dists(Q, self.X) / (2.0 * self.h ** 2)
        top = logw.max(axis=1, keepdims=True)
        w = np.exp(logw - top)
        out = (w @ self.Y) / w.sum(axis=1, keepdims=True)
        dead = top[:, 0] < _LOG_TINY
        if dead.any():
            out[dead] = self.Y.mean(axis=0)
        return out
