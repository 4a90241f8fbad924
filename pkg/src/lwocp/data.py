"""Sequence containers, memory-L lifting, dummy points and masking.

A raw series ``(X_t, Y_t)`` is turned into a sequence of augmented points
``Z_t = (lifted covariate, response)`` by :func:`lift`. Entries of the lifted
sequence can be replaced by the dummy symbol (:data:`STAR`) with
:func:`mask`; training algorithms only ever see :func:`training_view`.

Internally a :class:`LiftedSequence` keeps three aligned arrays (flattened
covariates, responses and a presence flag) so that the predictors can work
on plain matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class _Star:
    """The dummy data point. Carries no payload."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "STAR"

    def __reduce__(self):
        return (_Star, ())


STAR = _Star()


def is_star(obj) -> bool:
    return obj is STAR or obj is None


def _as_2d(a, length=None) -> np.ndarray:
    if a is None:
        return np.zeros((length or 0, 0))
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ValueError(f"expected 1-D or 2-D array, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class RawSeries:
    """Covariate/response pairs ``(X_t, Y_t)`` for ``t = 1..T``.

    ``x`` may have zero columns (autoregressive mode, the fixed placeholder
    covariate). ``start_index`` is a label only.
    """

    x: np.ndarray
    y: np.ndarray
    start_index: int = 1

    def __post_init__(self):
        y = _as_2d(self.y)
        x = _as_2d(self.x, len(y))
        if len(x) != len(y):
            raise ValueError(f"x has {len(x)} rows but y has {len(y)}")
        if len(y) < 1:
            raise ValueError("empty series")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def autoregressive(cls, w, start_index=1):
        w = _as_2d(w)
        return cls(np.zeros((len(w), 0)), w, start_index)

    def __len__(self):
        return len(self.y)

    @property
    def d_x(self):
        return self.x.shape[1]

    @property
    def d_y(self):
        return self.y.shape[1]


@dataclass(frozen=True)
class LiftedCovariate:
    """History ``(X_{t-L}, Y_{t-L}), ..., (X_{t-1}, Y_{t-1})`` plus ``X_t``."""

    history_x: np.ndarray
    history_y: np.ndarray
    current: np.ndarray

    @property
    def memory(self):
        return len(self.history_y)

    def flat(self) -> np.ndarray:
        """Concatenate lags in time order, each as ``(x, y)``, then ``X_t``."""
        lags = np.hstack([self.history_x, self.history_y]).ravel()
        return np.concatenate([lags, self.current])


@dataclass(frozen=True)
class Point:
    """A concrete augmented point ``Z_t = (lifted covariate, response)``."""

    covariate: LiftedCovariate
    response: np.ndarray


@dataclass(frozen=True)
class LiftedSequence:
    """An ordered sequence of augmented points.

    Attributes
    ----------
    features : ndarray of shape (m, p)
        Flattened lifted covariates (see :meth:`LiftedCovariate.flat`).
        Rows of dummy entries keep whatever payload they had but are never
        read.
    responses : ndarray of shape (m, d_y)
    present : bool ndarray of shape (m,)
        False where the entry is the dummy point.
    memory, d_x : int
        Needed to unflatten covariates.
    origin : int
        Label of the first point in the raw series' indexing.
    """

    features: np.ndarray
    responses: np.ndarray
    present: np.ndarray
    memory: int = 0
    d_x: int = 0
    origin: int = 1
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        m = len(self.responses)
        if m < 1:
            raise ValueError("a lifted sequence needs at least one point")
        if len(self.features) != m or len(self.present) != m:
            raise ValueError("features, responses and present must align")
        expected = self.memory * (self.d_x + self.d_y) + self.d_x
        if self.features.shape[1] != expected:
            raise ValueError(
                f"feature width {self.features.shape[1]} does not match "
                f"memory={self.memory}, d_x={self.d_x}, d_y={self.d_y}"
            )

    @classmethod
    def from_arrays(cls, features, responses, present=None, memory=0, origin=1):
        """Memoryless sequence straight from a design matrix and responses."""
        responses = _as_2d(responses)
        features = _as_2d(features, len(responses))
        if present is None:
            present = np.ones(len(responses), dtype=bool)
        return cls(features, responses, np.asarray(present, dtype=bool),
                   memory=memory, d_x=features.shape[1], origin=origin)

    def __len__(self):
        return len(self.responses)

    @property
    def d_y(self):
        return self.responses.shape[1]

    def covariate(self, i: int) -> LiftedCovariate:
        f = self.features[i]
        lag_w = self.d_x + self.d_y
        lags = f[: self.memory * lag_w].reshape(self.memory, lag_w)
        return LiftedCovariate(lags[:, : self.d_x], lags[:, self.d_x:],
                               f[self.memory * lag_w:])

    def __getitem__(self, i: int):
        if not self.present[i]:
            return STAR
        return Point(self.covariate(i), self.responses[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def points(self) -> list:
        return list(self)

    def head(self, n: int) -> "LiftedSequence":
        """First ``n`` points (``Z_{1:n}``)."""
        return self._take(slice(0, n))

    def _take(self, idx) -> "LiftedSequence":
        return LiftedSequence(self.features[idx], self.responses[idx],
                              self.present[idx], self.memory, self.d_x,
                              self.origin, self.meta)

    def with_present(self, present) -> "LiftedSequence":
        return LiftedSequence(self.features, self.responses,
                              np.asarray(present, dtype=bool), self.memory,
                              self.d_x, self.origin, self.meta)


def lift(raw: RawSeries, L: int) -> LiftedSequence:
    """Build ``Z_t = (X_t, Y_t)`` with ``X_t`` the memory-``L`` lifted covariate.

    The first ``L`` raw rows only serve as history, so ``T - L`` points are
    returned, point ``t`` covering raw row ``L + t``.
    """
    if L < 0:
        raise ValueError("memory must be nonnegative")
    T = len(raw)
    if T <= L:
        raise ValueError(f"series shorter than memory (T={T}, L={L})")
    m = T - L
    pairs = np.hstack([raw.x, raw.y])
    cols = [pairs[j: j + m] for j in range(L)]
    cols.append(raw.x[L:])
    features = np.hstack(cols) if cols else np.zeros((m, 0))
    return LiftedSequence(
        features=np.ascontiguousarray(features),
        responses=raw.y[L:].copy(),
        present=np.ones(m, dtype=bool),
        memory=L,
        d_x=raw.d_x,
        origin=raw.start_index + L,
    )


def window_indices(m: int, k: int, tau: int) -> np.ndarray:
    """0-based positions replaced by the dummy under ``M_{k,tau}`` on length ``m``.

    Indices outside ``{-tau, ..., m-1}`` wrap modulo ``m + tau``.
    """
    if tau >= m:
        raise ValueError(f"window exceeds sequence (tau={tau}, m={m})")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if not -tau <= k <= m - 1:
        k = (k + tau) % (m + tau) - tau
    lo, hi = max(k, 0), min(k + tau, m)
    return np.arange(lo, hi)


def mask(seq: LiftedSequence, k: int, tau: int) -> LiftedSequence:
    """Replace entries ``k+1, ..., k+tau`` (1-based) by the dummy point."""
    present = seq.present.copy()
    present[window_indices(len(seq), k, tau)] = False
    return seq.with_present(present)


def training_view(seq) -> list:
    """Concrete points of ``seq`` in order; dummies dropped."""
    return [p for p in seq if not is_star(p)]


def training_arrays(data, d_in=None, d_out=None):
    """``(features, responses)`` of the concrete points in ``data``.

    ``data`` is a :class:`LiftedSequence` or an iterable of points.
    """
    if isinstance(data, LiftedSequence):
        return data.features[data.present], data.responses[data.present]
    pts = training_view(data)
    if not pts:
        return np.zeros((0, d_in or 0)), np.zeros((0, d_out or 0))
    X = np.vstack([p.covariate.flat() for p in pts])
    Y = np.vstack([np.atleast_1d(np.asarray(p.response, dtype=float)) for p in pts])
    return X, Y
