"""A small dense two-phase simplex solver.

Solves ``min c @ x`` subject to ``A_eq @ x = b_eq`` and ``x >= 0`` on a
full tableau. Bland's smallest-index rule guards against cycling. Meant
for the few-thousand-variable problems of the coefficient lab.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_VARIABLES = 10 ** 4
DEGENERATE_STREAK = 20


class LPError(RuntimeError):
    """Base class for solver failures."""


class InfeasibleError(LPError):
    pass


class UnboundedError(LPError):
    pass


@dataclass
class LPProblem:
    c: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        self.A_eq = np.atleast_2d(np.asarray(self.A_eq, dtype=float))
        self.b_eq = np.asarray(self.b_eq, dtype=float).ravel()
        m, n = self.A_eq.shape
        if len(self.c) != n or len(self.b_eq) != m:
            raise ValueError(
                f"inconsistent LP dimensions: c {len(self.c)}, A {m}x{n}, b {len(self.b_eq)}"
            )


def _pivot(T, basis, r, j):
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    basis[r] = j


def _iterate(T, basis, n_cols, tol, max_iter, rule, floor=-np.inf):
    """Pivot on ``T`` (last row holds reduced costs) until optimal.

    ``rule="bland"`` always enters the lowest-index improving column.
    ``rule="hybrid"`` enters the most negative reduced cost and falls back
    to Bland's rule while pivots are degenerate, which rules out cycling
    because a cycle consists of degenerate pivots only.

    Stops early once the objective reaches the known lower bound ``floor``.
    """
    stall = 0
    for _ in range(max_iter):
        cost = T[-1, :n_cols]
        neg = np.flatnonzero(cost < -tol)
        if neg.size == 0 or -T[-1, -1] <= floor + tol:
            return
        if rule == "bland" or stall >= DEGENERATE_STREAK:
            j = neg[0]
        else:
            j = neg[np.argmin(cost[neg])]
        col = T[:-1, j]
        pos = np.flatnonzero(col > tol)
        if pos.size == 0:
            raise UnboundedError("objective is unbounded below")
        ratios = T[pos, -1] / col[pos]
        best = ratios.min()
        cand = pos[ratios <= best + tol * max(1.0, abs(best))]
        r = cand[np.argmin(basis[cand])]
        stall = stall + 1 if best <= tol else 0
        _pivot(T, basis, r, j)
    raise LPError(f"simplex did not terminate within {max_iter} pivots")


def solve_lp(prob: LPProblem, tol: float = 1e-9, max_iter: int = 200_000,
             rule: str = "hybrid", lower_bound: float = -np.inf):
    """Minimize ``prob.c @ x`` over ``{x >= 0 : A_eq x = b_eq}``.

    Parameters
    ----------
    prob : LPProblem
    tol : float
        Feasibility and optimality tolerance.
    max_iter : int
        Pivot budget per phase.
    rule : {"hybrid", "bland"}
        Entering-variable rule; see :func:`_iterate`.
    lower_bound : float
        A known lower bound on the optimum. Reaching it ends the search,
        which spares long runs of degenerate pivots on problems whose
        optimum is attained at a highly degenerate vertex.

    Returns
    -------
    value : float
    x : ndarray
        An optimal basic solution.

    Raises
    ------
    InfeasibleError, UnboundedError
    """
    if rule not in ("hybrid", "bland"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    A = prob.A_eq.copy()
    b = prob.b_eq.copy()
    c = prob.c
    m, n = A.shape
    if n > MAX_VARIABLES:
        raise ValueError(f"LP has {n} variables, limit is {MAX_VARIABLES}")
    if m == 0:
        if (c < -tol).any():
            raise UnboundedError("objective is unbounded below")
        return 0.0, np.zeros(n)
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    # phase 1: artificials n..n+m-1 form the starting basis
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n: n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = np.arange(n, n + m)
    _iterate(T, basis, n + m, tol, max_iter, rule, floor=0.0)
    if -T[-1, -1] > tol * max(1.0, np.abs(b).max()):
        raise InfeasibleError("constraints admit no nonnegative solution")

    # drive remaining artificials out of the basis, dropping redundant rows
    keep = np.ones(m + 1, dtype=bool)
    for r in range(m):
        if basis[r] < n:
            continue
        nz = np.flatnonzero(np.abs(T[r, :n]) > tol)
        if nz.size:
            _pivot(T, basis, r, nz[0])
        else:
            keep[r] = False
    T = np.delete(T[keep], np.s_[n: n + m], axis=1)
    basis = basis[keep[:-1]]

    # phase 2
    T[-1, :n] = c
    T[-1, -1] = 0.0
    for r, j in enumerate(basis):
        T[-1] -= c[j] * T[r]
    _iterate(T, basis, n, tol, max_iter, rule, floor=lower_bound)
    x = np.zeros(n)
    x[basis] = T[:-1, -1]
    return float(c @ x), x
