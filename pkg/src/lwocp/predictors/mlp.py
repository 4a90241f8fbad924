"""One-hidden-layer ReLU network trained by full-batch gradient descent.

Fixed recipe: inputs and targets are z-scored with training statistics,
He-normal first layer, ``N(0, 1/width)`` second layer, zero biases, loss
``0.5 * mean ||f(x) - y||^2``, ``epochs`` steps of size ``lr``. The
initialization depends only on ``rng_seed``; rows are canonically ordered
and duplicate inputs are merged (count-weighted mean target), which leaves
every gradient step unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .base import FittedPredictor, PredictorSpec, canonical_order, register


@register
@dataclass(frozen=True)
class MLP(PredictorSpec):
    width: int = 20
    epochs: int = field(default=200, metadata={"positional": False})
    lr: float = field(default=1e-2, metadata={"positional": False})
    kind = "mlp"

    def __post_init__(self):
        if self.width < 1 or self.epochs < 0 or not self.lr > 0:
            raise ValueError("invalid MLP hyperparameters")

    def _fit(self, X, Y, rng_seed):
        order = canonical_order(X, Y)
        X, Y = X[order], Y[order]
        x_mu, x_sd = X.mean(0), X.std(0)
        y_mu, y_sd = Y.mean(0), Y.std(0)
        x_sd[x_sd == 0] = 1.0
        y_sd[y_sd == 0] = 1.0
        Xs = (X - x_mu) / x_sd
        Ys = (Y - y_mu) / y_sd

        U, inv, counts = np.unique(Xs, axis=0, return_inverse=True,
                                   return_counts=True)
        inv = inv.ravel()
        T = np.zeros((len(U), Y.shape[1]))
        np.add.at(T, inv, Ys)
        T /= counts[:, None]
        w = (counts / len(Xs))[:, None]

        rng = np.random.default_rng(rng_seed)
        p, d = X.shape[1], Y.shape[1]
        W1 = rng.standard_normal((p, self.width)) * np.sqrt(2.0 / max(p, 1))
        b1 = np.zeros(self.width)
        W2 = rng.standard_normal((self.width, d)) * np.sqrt(1.0 / self.width)
        b2 = np.zeros(d)
        lr = self.lr
        for _ in range(self.epochs):
            pre = U @ W1 + b1
            H = np.maximum(pre, 0.0)
            G = (H @ W2 + b2 - T) * w          # dLoss/dOutput
            gW2 = H.T @ G
            gb2 = G.sum(0)
            GH = (G @ W2.T) * (pre > 0)
            gW1 = U.T @ GH
            gb1 = GH.sum(0)
            W1 -= lr * gW1
            b1 -= lr * gb1
            W2 -= lr * gW2
            b2 -= lr * gb2
        return MLPModel(W1, b1, W2, b2, x_mu, x_sd, y_mu, y_sd)


class MLPModel(FittedPredictor):
    def __init__(self, W1, b1, W2, b2, x_mu, x_sd, y_mu, y_sd):
        self.W1, self.b1, self.W2, self.b2 = W1, b1, W2, b2
        self.x_mu, self.x_sd, self.y_mu, self.y_sd = x_mu, x_sd, y_mu, y_sd
        self.n_features, self.n_outputs = W1.shape[0], W2.shape[1]

    def predict_array(self, Q):
        H = np.maximum(((Q - self.x_mu) / self.x_sd) @ self.W1 + self.b1, 0.0)
        return (H @ self.W2 + self.b2) * self.y_sd + self.y_mu
