"""Monte-Carlo estimate of out-of-sample stability under block masking."""

from __future__ import annotations

import numpy as np

from ..data import STAR, is_star, mask
from ..scores import ScoreKind, score
from .base import fit


def _test_score_change(spec, seq, k, ell, kind, fit_seed, full_score=None):
    n = len(seq) - 1
    train, test = seq.head(n), seq[n]
    x_test = STAR if is_star(test) else test.covariate
    y_test = STAR if is_star(test) else test.response
    if full_score is None:
        full_score = score(y_test, fit(spec, train, fit_seed).predict(x_test), kind)
    masked = mask(train, k, ell)
    s = score(y_test, fit(spec, masked, fit_seed).predict(x_test), kind)
    return abs(s - full_score), full_score


def estimate_oos_stability(spec, seq, ell, t=0.0, kind=ScoreKind.L2,
                           trials=1000, rng_seed=0, generator=None):
    """Estimate ``nu``: the chance that masking a random training block of
    length ``ell`` moves the test-point score by more than ``t``.

    The last point of ``seq`` is the test point and the first ``n`` points
    are the training data. The block start ``K`` is uniform on
    ``{1-ell, ..., n-ell}`` (blocks hanging off the front are truncated).

    Parameters
    ----------
    spec : PredictorSpec
    seq : LiftedSequence
        Sequence of length ``n + 1``. Ignored (except for its length) when
        ``generator`` is given.
    ell : int
        Block length.
    t : float
        Score tolerance.
    kind : ScoreKind
    trials : int
        Number of Monte-Carlo draws.
    rng_seed : int
    generator : callable, optional
        ``generator(seed) -> LiftedSequence``. When given, every draw uses a
        fresh sequence; otherwise ``K`` is resampled on the fixed ``seq``.

    Returns
    -------
    float
        Fraction of draws with ``|score change| > t``.
    """
    n = len(seq) - 1
    if ell < 1:
        raise ValueError("block length must be positive")
    if ell >= n:
        raise ValueError(f"block length {ell} must be smaller than n={n}")
    rng = np.random.default_rng(rng_seed)
    ks = rng.integers(1 - ell, n - ell + 1, size=trials)
    hits = 0
    full = None
    for i, k in enumerate(ks):
        if generator is not None:
            draw_seed = int(rng.integers(2 ** 63))
            cur = generator(draw_seed)
            if len(cur) != n + 1:
                raise ValueError("generator changed the sequence length")
            diff, _ = _test_score_change(spec, cur, int(k), ell, kind, rng_seed)
        else:
            diff, full = _test_score_change(spec, seq, int(k), ell, kind,
                                            rng_seed, full)
        hits += diff > t
    return hits / trials if trials else 0.0
