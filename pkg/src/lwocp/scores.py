"""Conformity scores, the empirical quantile and prediction regions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import is_star


class ScoreKind(str, Enum):
    """Distance-based conformity scores.

    ``ABS`` is the absolute residual (scalar responses only); ``L2`` is the
    Euclidean norm of the residual.
    """

    ABS = "abs"
    L2 = "l2"


def _check_kind(kind, d):
    kind = ScoreKind(kind)
    if kind is ScoreKind.ABS and d != 1:
        raise ValueError("absolute-residual score needs scalar responses")
    return kind


def score(y, yhat, kind=ScoreKind.L2) -> float:
    """Score of response ``y`` against prediction ``yhat``; 0 if either is a dummy."""
    if is_star(y) or is_star(yhat):
        return 0.0
    y = np.atleast_1d(np.asarray(y, dtype=float))
    yhat = np.atleast_1d(np.asarray(yhat, dtype=float))
    if y.shape != yhat.shape:
        raise ValueError(f"dimension mismatch: {y.shape} vs {yhat.shape}")
    _check_kind(kind, y.size)
    return float(np.linalg.norm(y - yhat))


def scores(Y, Yhat, kind=ScoreKind.L2) -> np.ndarray:
    """Row-wise :func:`score` for two ``(n, d)`` arrays of concrete values."""
    Y = np.asarray(Y, dtype=float)
    Yhat = np.asarray(Yhat, dtype=float)
    if Y.shape != Yhat.shape:
        raise ValueError(f"dimension mismatch: {Y.shape} vs {Yhat.shape}")
    _check_kind(kind, Y.shape[-1])
    return np.linalg.norm(Y - Yhat, axis=-1)


def quantile(v, level: float) -> float:
    """Order statistic ``v_(k)`` with ``k = ceil(level * m)``.

    Returns ``inf`` when ``k > m`` and ``min(v)`` when ``k <= 0``.
    """
    v = np.asarray(v, dtype=float).ravel()
    m = v.size
    if m == 0:
        raise ValueError("quantile of an empty vector")
    # guard against products like 0.3 * 10 = 3.0000000000000004
    k = math.ceil(level * m - 1e-9)
    if k > m:
        return math.inf
    if k <= 0:
        return float(v.min())
    return float(np.partition(v, k - 1)[k - 1])


@dataclass(frozen=True)
class PredictionRegion:
    """``{y : score(y, center) <= radius}``.

    A ``None`` center stands for a dummy prediction; every response then
    scores zero and the region is the whole response space.
    """

    center: np.ndarray | None
    radius: float
    kind: ScoreKind = ScoreKind.L2

    def __post_init__(self):
        if not self.radius >= 0:
            raise ValueError(f"radius must be nonnegative, got {self.radius}")

    @property
    def is_trivial(self):
        return math.isinf(self.radius) or self.center is None

    def interval(self):
        """``(lo, hi)`` for scalar responses."""
        c = float(np.asarray(self.center).ravel()[0])
        return c - self.radius, c + self.radius

    def __contains__(self, y):
        return region_contains(self, y)


def region_contains(region: PredictionRegion, y) -> bool:
    if region.center is not None:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if y.shape != np.atleast_1d(region.center).shape:
            raise ValueError("dimension mismatch between y and region center")
    if math.isinf(region.radius):
        return True
    return score(y, region.center, region.kind) <= region.radius


def sorted_matching(u, v, t: float = 0.0):
    """Bijection minimizing ``#{i : u_i > v_sigma(i) + t}``.

    Both vectors are sorted and scanned with two pointers: each ``v`` in
    increasing order absorbs the smallest unmatched ``u`` it covers
    (``u <= v + t``). Entries left over are paired in sorted order.
    Pairing order statistics index by index is *not* minimal in general,
    e.g. ``u = (3, 4)``, ``v = (1, 2)``, ``t = 1``.

    Returns
    -------
    sigma : ndarray of int
        ``sigma[i]`` is the index into ``v`` matched with ``u[i]``.
    count : int
        The minimal exceedance count.
    """
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if u.shape != v.shape:
        raise ValueError("vectors must have equal length")
    ou, ov = np.argsort(u, kind="stable"), np.argsort(v, kind="stable")
    sigma = np.full(u.size, -1)
    free_v = []
    i = 0
    for j in ov:
        if i < u.size and u[ou[i]] <= v[j] + t:
            sigma[ou[i]] = j
            i += 1
        else:
            free_v.append(j)
    sigma[ou[i:]] = free_v
    return sigma, int(u.size - i)


def sorted_matching_exceedances(u, v, t: float = 0.0) -> int:
    """Minimal ``#{i : u_i > v_sigma(i) + t}`` over bijections ``sigma``."""
    return sorted_matching(u, v, t)[1]
