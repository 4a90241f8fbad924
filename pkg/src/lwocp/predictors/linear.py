"""Ridge regression by the normal equations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .base import FittedPredictor, PredictorSpec, canonical_order, register


@register
@dataclass(frozen=True)
class Ridge(PredictorSpec):
    """L2-penalized least squares, ``B = (X'X + lam I)^{-1} X'Y``.

    No intercept by default; with ``intercept=True`` the data are centered
    first and the intercept is left unpenalized.
    """

    lam: float = 1.0
    intercept: bool = field(default=False, metadata={"positional": False})
    kind = "ridge"

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError("ridge penalty must be nonnegative")

    def _fit(self, X, Y, rng_seed):
        order = canonical_order(X, Y)  # fixed summation order
        X, Y = X[order], Y[order]
        p = X.shape[1]
        if self.intercept:
            xm, ym = X.mean(axis=0), Y.mean(axis=0)
            X, Y = X - xm, Y - ym
        else:
            xm, ym = np.zeros(p), np.zeros(Y.shape[1])
        if p == 0:
            coef = np.zeros((0, Y.shape[1]))
        else:
            G = X.T @ X
            G[np.diag_indices_from(G)] += self.lam
            coef = linalg.solve(G, X.T @ Y, assume_a="pos")
        return RidgeModel(coef, ym - xm @ coef)


class RidgeModel(FittedPredictor):
    def __init__(self, coef, offset):
        self.coef = coef
        self.offset = offset
        self.n_features, self.n_outputs = coef.shape

    def predict_array(self, X):
        return X @ self.coef + self.offset
