"""CART regression tree with deterministic split selection.

Splits maximize the reduction in summed squared error over all response
coordinates. Candidate thresholds are midpoints between consecutive
distinct feature values; among equally good splits the one with the lowest
feature index, then the lowest threshold, wins. Rows are put in canonical
order before growing, so the fit does not depend on the input order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import FittedPredictor, PredictorSpec, canonical_order, register


@register
@dataclass(frozen=True)
class Tree(PredictorSpec):
    max_depth: int = 5
    min_leaf: int = 2
    kind = "tree"

    def __post_init__(self):
        if self.max_depth < 1 or self.min_leaf < 1:
            raise ValueError("max_depth and min_leaf must be positive")

    def _fit(self, X, Y, rng_seed):
        order = canonical_order(X, Y)
        return TreeModel(X[order], Y[order], self.max_depth, self.min_leaf)


def best_split(X, Y, min_leaf):
    """``(feature, threshold, gain)`` of the best split, or ``None``.

    ``gain`` is ``|S_L|^2/n_L + |S_R|^2/n_R``, with ``S`` the response sums;
    maximizing it minimizes the children's total squared error.
    """
    s, p = X.shape
    if s < 2 * min_leaf or p == 0:
        return None
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    left = np.cumsum(Y[order], axis=0)[:-1]          # (s-1, p, d)
    total = Y.sum(axis=0)
    n_left = np.arange(1, s)[:, None]
    right = total - left
    gain = (left ** 2).sum(-1) / n_left + (right ** 2).sum(-1) / (s - n_left)
    valid = xs[:-1] < xs[1:]
    valid &= (n_left >= min_leaf) & (s - n_left >= min_leaf)
    if not valid.any():
        return None
    gain = np.where(valid, gain, -np.inf)
    best = gain.max()
    # feature-major scan: lowest feature, then lowest threshold
    j, i = np.argwhere((gain == best).T)[0]
    thr = 0.5 * (xs[i, j] + xs[i + 1, j])
    return int(j), float(thr), float(best)


class TreeModel(FittedPredictor):
    def __init__(self, X, Y, max_depth, min_leaf):
        self.n_features, self.n_outputs = X.shape[1], Y.shape[1]
        self.feature, self.threshold, self.children, self.value = [], [], [], []
        self._grow(X, Y, 0, max_depth, min_leaf)
        self.feature = np.array(self.feature)
        self.threshold = np.array(self.threshold)
        self.children = np.array(self.children, dtype=int).reshape(-1, 2)
        self.value = np.array(self.value)

    def _new_node(self, value):
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.children.append((-1, -1))
        self.value.append(value)
        return len(self.value) - 1

    def _grow(self, X, Y, depth, max_depth, min_leaf):
        node = self._new_node(Y.mean(axis=0))
        if depth >= max_depth:
            return node
        split = best_split(X, Y, min_leaf)
        if split is None:
            return node
        j, thr, gain = split
        parent = (Y.sum(axis=0) ** 2).sum() / len(Y)
        if gain <= parent * (1 + 1e-12):
            return node
        go_left = X[:, j] <= thr
        lo = self._grow(X[go_left], Y[go_left], depth + 1, max_depth, min_leaf)
        hi = self._grow(X[~go_left], Y[~go_left], depth + 1, max_depth, min_leaf)
        self.feature[node], self.threshold[node] = j, thr
        self.children[node] = (lo, hi)
        return node

    def apply(self, Q):
        """Leaf index reached by each query row."""
        node = np.zeros(len(Q), dtype=int)
        active = self.feature[node] >= 0
        while active.any():
            idx = np.flatnonzero(active)
            nd = node[idx]
            left = Q[idx, self.feature[nd]] <= self.threshold[nd]
            node[idx] = np.where(left, self.children[nd, 0], self.children[nd, 1])
            active = self.feature[node] >= 0
        return node

    def predict_array(self, Q):
        return self.value[self.apply(Q)]
