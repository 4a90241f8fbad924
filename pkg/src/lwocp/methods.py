"""Split conformal, the vanilla jackknife and leave-a-window-out (LWO).

All three take a :class:`~lwocp.data.LiftedSequence` of length ``n + 1``
whose last point is the test point. Only its covariate is used; its
response is left for the caller to check coverage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import LiftedSequence
from .predictors.base import DummyPredictor, fit_arrays
from .scores import PredictionRegion, ScoreKind, quantile, score


@dataclass(frozen=True)
class LwoResult:
    region: PredictionRegion
    scores: np.ndarray
    threshold: float
    tau: int
    inflation: float

    @property
    def center(self):
        return self.region.center

    @property
    def radius(self):
        return self.region.radius


def _predict_one(model, seq, i):
    if isinstance(model, DummyPredictor) or not seq.present[i]:
        return None
    return model.predict_array(seq.features[i][None, :])[0]


def _test_center(seq, spec, rng_seed, train_mask):
    n = len(seq) - 1
    model = fit_arrays(spec, seq.features[train_mask], seq.responses[train_mask],
                       rng_seed)
    return _predict_one(model, seq, n)


def lwo_scores(seq: LiftedSequence, tau: int, spec, kind=ScoreKind.L2,
               rng_seed: int = 0) -> np.ndarray:
    """Scores ``s_1..s_n``: ``s_k`` uses a fit that leaves out ``k..min(k+tau, n)``."""
    n = len(seq) - 1
    if n <= tau:
        raise ValueError(f"window too large: n={n} must exceed tau={tau}")
    F, Y = seq.features, seq.responses
    base = seq.present.copy()
    base[n] = False
    out = np.zeros(n)
    for k in range(n):
        if not seq.present[k]:
            continue
        train = base.copy()
        train[k: k + tau + 1] = False
        model = fit_arrays(spec, F[train], Y[train], rng_seed)
        pred = _predict_one(model, seq, k)
        if pred is not None:
            out[k] = score(Y[k], pred, kind)
    return out


def lwo(seq: LiftedSequence, alpha: float, tau: int, spec, kind=ScoreKind.L2,
        inflation: float = 0.0, rng_seed: int = 0) -> LwoResult:
    """Leave-a-window-out prediction region, optionally inflated by ``inflation``.

    Parameters
    ----------
    seq : LiftedSequence
        ``n`` training points followed by the test point.
    alpha : float
        Target miscoverage in (0, 1).
    tau : int
        Number of points after each proxy test point that are also left out.
        ``tau = 0`` is the jackknife.
    spec : PredictorSpec
    kind : ScoreKind
    inflation : float
        Added to the score quantile.
    rng_seed : int
        Shared by all ``n + 1`` fits.

    Returns
    -------
    LwoResult
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if inflation < 0:
        raise ValueError("inflation must be nonnegative")
    n = len(seq) - 1
    s = lwo_scores(seq, tau, spec, kind, rng_seed)
    train = seq.present.copy()
    train[n] = False
    center = _test_center(seq, spec, rng_seed, train)
    thr = quantile(s, 1 - alpha) + inflation
    region = PredictionRegion(center, thr, ScoreKind(kind))
    return LwoResult(region, s, thr, tau, inflation)


def jackknife(seq: LiftedSequence, alpha: float, spec, kind=ScoreKind.L2,
              rng_seed: int = 0) -> LwoResult:
    """Vanilla leave-one-out jackknife (LWO with ``tau = 0``)."""
    return lwo(seq, alpha, 0, spec, kind, 0.0, rng_seed)


def split_cp(seq: LiftedSequence, alpha: float, spec, kind=ScoreKind.L2,
             rng_seed: int = 0) -> PredictionRegion:
    """Split conformal: fit on the first ``floor(n/2)`` points, calibrate on the rest."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    n = len(seq) - 1
    if n < 2:
        raise ValueError("split conformal needs at least two training points")
    n_train = n // 2
    train = np.zeros(len(seq), dtype=bool)
    train[:n_train] = seq.present[:n_train]
    F, Y = seq.features, seq.responses
    model = fit_arrays(spec, F[train], Y[train], rng_seed)
    cal = np.arange(n_train, n)
    s = np.zeros(len(cal))
    if not isinstance(model, DummyPredictor):
        live = seq.present[cal]
        if live.any():
            pred = model.predict_array(F[cal[live]])
            s[live] = np.linalg.norm(Y[cal[live]] - pred, axis=1)
    center = _predict_one(model, seq, n)
    return PredictionRegion(center, quantile(s, 1 - alpha), ScoreKind(kind))
