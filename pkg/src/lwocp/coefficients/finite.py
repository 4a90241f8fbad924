"""Exact dependence coefficients of finite-alphabet laws.

Positions are 1-based in docstrings (``Z_1, ..., Z_{n+1}``) and 0-based in
code. A law of length ``m = n + 1`` is a :class:`~lwocp.processes.FiniteProcess`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import window_indices
from ..processes import MAX_STATES, FiniteProcess


def tv(p, q) -> float:
    """Total variation distance ``0.5 * sum |p - q|``."""
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise ValueError(f"pmf sizes differ: {p.size} vs {q.size}")
    return float(0.5 * np.abs(p - q).sum())


def law(P: FiniteProcess, idx) -> np.ndarray:
    """Joint pmf tensor of ``(Z_i for i in idx)`` in the given order (0-based, distinct)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        raise ValueError("indices must be distinct")
    order = sorted(idx)
    marg = P.marginal(order)
    return np.transpose(marg, [order.index(i) for i in idx])


def _n(P):
    return P.m - 1


def _check_tau(P, tau):
    n = _n(P)
    if not 1 <= tau <= n - 1:
        raise ValueError(f"tau must lie in [1, n-1] = [1, {n - 1}], got {tau}")


def beta_mixing(P: FiniteProcess, tau: int) -> float:
    """Largest TV between ``(Z_{1:k}, Z_{k+tau+1:n+1})`` and its independent-blocks version."""
    _check_tau(P, tau)
    n, A = _n(P), P.alphabet_size
    best = 0.0
    for k in range(1, n - tau + 1):
        J = law(P, list(range(k)) + list(range(k + tau, n + 1)))
        J = J.reshape(A ** k, -1)
        prod = np.outer(J.sum(axis=1), J.sum(axis=0))
        best = max(best, tv(J, prod))
    return best


def conditional_surrogate(P: FiniteProcess, k: int, tau: int) -> np.ndarray:
    """Law making ``Z_{1:k}`` and ``Z_{k+tau+1:n+1}`` independent given the middle block.

    Middle blocks of probability zero get zero mass, as under the joint.
    """
    A = P.alphabet_size
    T = P.joint.reshape(A ** k, A ** tau, -1)
    ab = T.sum(axis=2)
    bc = T.sum(axis=0)
    b = ab.sum(axis=0)
    inv = np.divide(1.0, b, out=np.zeros_like(b), where=b > 0)
    return ab[:, :, None] * (bc * inv[:, None])[None, :, :]


def beta_cond_mixing(P: FiniteProcess, tau: int) -> float:
    """Largest TV between the law and its conditional-independence surrogate over ``k``."""
    _check_tau(P, tau)
    n = _n(P)
    return max(tv(P.joint, conditional_surrogate(P, k, tau))
               for k in range(1, n - tau + 1))


def deletion_indices(n: int, k: int, tau: int):
    """0-based index tuples of the two deletions compared by the switch coefficient.

    The first keeps the sequence order with block ``k+1..k+tau`` removed; the
    second reads the rotated sequence starting at ``Z_{n+2-k}``.
    """
    if not -tau <= k <= n:
        raise ValueError(f"k must lie in [-tau, n] = [{-tau}, {n}], got {k}")
    if 1 <= k <= n - tau:
        d0 = list(range(k)) + list(range(k + tau, n + 1))
        d1 = list(range(n + 1 - k, n + 1)) + list(range(n - k - tau + 1))
    elif k >= n - tau + 1:
        d0 = list(range(k))
        d1 = list(range(n + 1 - k, n + 1))
    else:
        d0 = list(range(k + tau, n + 1))
        d1 = list(range(n - k - tau + 1))
    return d0, d1


def switch_coeff(P: FiniteProcess, k: int, tau: int) -> float:
    """TV between the two deletions of a ``tau``-block at position ``k``."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    d0, d1 = deletion_indices(_n(P), k, tau)
    return tv(law(P, d0), law(P, d1))


def avg_switch(P: FiniteProcess, tau: int) -> float:
    """Mean of :func:`switch_coeff` over ``k in {-tau, ..., n}``."""
    n = _n(P)
    return float(np.mean([switch_coeff(P, k, tau) for k in range(-tau, n + 1)]))


def mixture_switch(P: FiniteProcess, tau: int) -> float:
    """TV between the two deletions when ``k`` is drawn uniformly from ``{-tau..n}``.

    The deletions have ``k``-dependent length, so the mixtures live on the
    disjoint union of words of each length.
    """
    n = _n(P)
    w = 1.0 / (n + tau + 1)
    mix0, mix1 = {}, {}
    for k in range(-tau, n + 1):
        d0, d1 = deletion_indices(n, k, tau)
        for mix, d in ((mix0, d0), (mix1, d1)):
            p = law(P, d).ravel() * w
            mix[len(d)] = mix.get(len(d), 0.0) + p
    return float(0.5 * sum(np.abs(mix0[L] - mix1[L]).sum() for L in mix0))


@dataclass(frozen=True)
class AugmentedPMF:
    """Law on ``{0, ..., A}^m``; symbol ``A`` is the dummy point."""

    alphabet_size: int
    m: int
    joint: np.ndarray

    def __post_init__(self):
        j = np.asarray(self.joint, dtype=float).ravel()
        if j.size != (self.alphabet_size + 1) ** self.m:
            raise ValueError("joint size does not match (A+1)^m")
        if (j < 0).any() or abs(j.sum() - 1) > 1e-12:
            raise ValueError("joint must be a nonnegative pmf summing to 1")
        object.__setattr__(self, "joint", j)

    @property
    def star(self) -> int:
        return self.alphabet_size

    @property
    def tensor(self):
        return self.joint.reshape((self.alphabet_size + 1,) * self.m)

    @classmethod
    def embed(cls, P: FiniteProcess) -> "AugmentedPMF":
        """``P`` viewed on the augmented alphabet (no dummy mass)."""
        A, m = P.alphabet_size, P.m
        out = np.zeros((A + 1,) * m)
        out[(slice(0, A),) * m] = P.tensor
        return cls(A, m, out.ravel())


def masked_mixture(P: FiniteProcess, tau: int) -> AugmentedPMF:
    """Law of the sequence with block ``K+1..K+tau`` dummied, ``K ~ Unif{-tau..n}``."""
    n, A, m = _n(P), P.alphabet_size, P.m
    if not 0 <= tau <= n:
        raise ValueError(f"tau must lie in [0, n] = [0, {n}]")
    if (A + 1) ** m > MAX_STATES:
        raise ValueError(f"augmented state space {(A + 1)}^{m} exceeds {MAX_STATES}")
    T = P.tensor
    out = np.zeros((A + 1,) * m)
    w = 1.0 / (n + tau + 1)
    for k in range(-tau, n + 1):
        hidden = set(window_indices(m, k, tau).tolist()) if tau else set()
        sub = T.sum(axis=tuple(sorted(hidden))) if hidden else T
        idx = tuple(A if i in hidden else slice(0, A) for i in range(m))
        out[idx] += w * sub
    return AugmentedPMF(A, m, out.ravel())
