"""Distance from a law to the marginals of cyclically exchangeable laws.

:func:`rho_lp` computes, by linear programming,

    min_R  TV(Q, law of the first m coordinates of R)

over laws ``R`` on words of length ``m + a`` that are invariant under
rotation. Only laws on the same alphabet as ``Q`` (with the dummy symbol
included) are searched, so the value upper-bounds the unrestricted
infimum.

A rotation-invariant ``R`` is constant on each rotation orbit, giving one
LP variable per orbit. With ``Q >= 0`` and both laws summing to one, TV
equals ``sum_y max(Q_y - R_y, 0)`` over the support of ``Q``; only the
support rows are therefore written out, and orbits whose words never
start with a support word are merged into a single free-mass variable.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..processes import MAX_STATES, FiniteProcess
from .finite import AugmentedPMF
from .lp import MAX_VARIABLES, LPProblem, solve_lp


@lru_cache(maxsize=16)
def rotation_orbits(S: int, L: int):
    """Orbit label of every word in ``{0..S-1}^L`` (row-major codes) and orbit sizes.

    Orbits are labelled by increasing canonical (smallest rotated) code.
    """
    if S ** L > MAX_STATES:
        raise ValueError(f"{S}^{L} words exceed {MAX_STATES}")
    codes = np.arange(S ** L, dtype=np.int64)
    digits = np.stack(np.unravel_index(codes, (S,) * L), axis=1)
    weights = S ** np.arange(L - 1, -1, -1, dtype=np.int64)
    canon = codes.copy()
    for r in range(1, L):
        canon = np.minimum(canon, np.roll(digits, -r, axis=1) @ weights)
    _, label, sizes = np.unique(canon, return_inverse=True, return_counts=True)
    label.setflags(write=False)
    sizes.setflags(write=False)
    return label, sizes


def _as_augmented(Q):
    if isinstance(Q, AugmentedPMF):
        return Q
    if isinstance(Q, FiniteProcess):
        return AugmentedPMF.embed(Q)
    raise TypeError("expected an AugmentedPMF or FiniteProcess")


def build_rho_lp(Q, a: int, order_seed=None):
    """Assemble the reduced LP; returns ``(LPProblem, n_orbit_vars)``."""
    Q = _as_augmented(Q)
    if a < 0:
        raise ValueError("lengthening must be nonnegative")
    S, m = Q.alphabet_size + 1, Q.m
    label, sizes = rotation_orbits(S, m + a)
    support = np.flatnonzero(Q.joint > 0)
    row_of = np.full(S ** m, -1)
    row_of[support] = np.arange(len(support))
    prefix_row = row_of[np.arange(S ** (m + a)) // S ** a]

    hit = prefix_row >= 0
    touching = np.unique(label[hit])
    col_of = np.full(len(sizes), -1)
    col_of[touching] = np.arange(len(touching))
    n_orb = len(touching)
    free = len(touching) < len(sizes)
    n_r = n_orb + int(free)

    ns = len(support)
    n_var = n_r + 2 * ns
    if n_var > MAX_VARIABLES:
        raise ValueError(f"LP would need {n_var} variables, limit is {MAX_VARIABLES}")

    A = np.zeros((ns + 1, n_var))
    A[0, :n_orb] = sizes[touching]
    if free:
        A[0, n_orb] = 1.0
    np.add.at(A, (1 + prefix_row[hit], col_of[label[hit]]), 1.0)
    A[1:, n_r: n_r + ns] = np.eye(ns)
    A[1:, n_r + ns:] = -np.eye(ns)
    b = np.concatenate([[1.0], Q.joint[support]])
    c = np.zeros(n_var)
    c[n_r: n_r + ns] = 1.0

    if order_seed is not None:
        perm = np.random.default_rng(order_seed).permutation(n_r)
        A[:, :n_r] = A[:, perm]
    return LPProblem(c, A, b), n_r


def rho_lp(Q, a: int, order_seed=None, tol: float = 1e-9) -> float:
    """Alphabet-restricted cyclic embedding coefficient with lengthening ``a``.

    Parameters
    ----------
    Q : AugmentedPMF or FiniteProcess
        Law of ``(Z_1, ..., Z_m)``. A plain process is embedded into the
        augmented alphabet first.
    a : int
        Number of extra coordinates of the rotation-invariant law.
    order_seed : int, optional
        Shuffle the orbit variables; the optimum must not depend on it.

    Returns
    -------
    float
    """
    prob, _ = build_rho_lp(Q, a, order_seed)
    value, _ = solve_lp(prob, tol=tol, lower_bound=0.0)
    return max(value, 0.0)
