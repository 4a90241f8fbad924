"""Numerical checks of the coefficient inequalities and coverage-bound arithmetic."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..processes import FiniteProcess
from .cyclic import rho_lp
from .finite import (avg_switch, beta_cond_mixing, beta_mixing, law,
                     masked_mixture, mixture_switch, switch_coeff, tv)

STATIONARITY_TOL = 1e-10


@dataclass
class InequalityRecord:
    name: str
    lhs: float
    rhs: float
    tolerance: float
    skipped: str | None = None

    def __post_init__(self):
        self.lhs, self.rhs = float(self.lhs), float(self.rhs)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        if self.skipped:
            return True
        return bool(self.lhs <= self.rhs + self.tolerance)

    def to_dict(self):
        d = asdict(self)
        d.update(slack=self.slack, holds=self.holds)
        return d


@dataclass
class InequalityReport:
    records: list = field(default_factory=list)
    quantities: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.records)

    def __getitem__(self, name):
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_json(self, **kw) -> str:
        return json.dumps({"checks": [r.to_dict() for r in self.records],
                           "quantities": self.quantities}, **kw)


def stationarity_gap(P: FiniteProcess) -> float:
    """TV between the laws of ``Z_{1:n}`` and ``Z_{2:n+1}``."""
    n = P.m - 1
    return tv(law(P, range(n)), law(P, range(1, n + 1)))


def extended_law(P: FiniteProcess, tau: int) -> np.ndarray:
    """Law of ``Z_{1:n+tau+1}``: ``tau`` extra points drawn by the stitching construction.

    Given the last ``tau`` and first ``tau`` values, the new block follows
    the conditional law of ``Z_{tau+1:2tau}`` given ``Z_{1:tau}`` and
    ``Z_{2tau+1:3tau}``. Conditioning values of probability zero fall
    back to the marginal of the middle block.
    """
    A, m = P.alphabet_size, P.m
    if 3 * tau > m:
        raise ValueError("stitching needs n + 1 >= 3 tau")
    B = A ** tau
    T3 = law(P, range(3 * tau)).reshape(B, B, B)  # (first, middle, third)
    den = T3.sum(axis=1)  # (first, third)
    mid = T3.sum(axis=(0, 2))
    cond = np.where(den[:, :, None] > 0,
                    np.transpose(T3, (0, 2, 1)) / np.where(den > 0, den, 1)[:, :, None],
                    mid[None, None, :])  # (first, third, new)
    body = P.joint.reshape(B, -1, B)  # (head tau, rest, tail tau)
    # the tail plays the role of the first block, the head of the third
    ext = np.einsum("hrt,the->hrte", body, cond)
    return ext.reshape((A,) * (m + tau))


def rotated_prefix_tv(P: FiniteProcess, tau: int, k: int, ext=None) -> float:
    """TV between ``Z`` and the first ``n+1`` entries of the extended sequence rotated to start at ``k``."""
    if ext is None:
        ext = extended_law(P, tau)
    L = ext.ndim
    axes = list(range(k - 1, L)) + list(range(k - 1))
    rot = np.transpose(ext, axes)
    pref = rot.sum(axis=tuple(range(P.m, L))) if L > P.m else rot
    return tv(P.joint, pref)


def verify_inequalities(P: FiniteProcess, tau: int, tol: float = 1e-6,
                        lp_tol: float = 1e-9) -> InequalityReport:
    """Evaluate the five coefficient inequalities on an exact finite law.

    Checks (with ``rho`` the alphabet-restricted LP value):

    ``mixing_bound``      rho_tau(Z) <= 2 beta + 2 beta* + 4 tau/(n+tau+1)   [stationary]
    ``switch_vs_rho``     avg switch <= 2 rho_tau(Z)
    ``masked_rho_upper``  rho_tau(masked Z) <= avg switch + switch at k=0
    ``masked_rho_lower``  mixture switch / 2 <= rho_tau(masked Z)
    ``rotation_tv``       max_k TV(Z, rotated extension) <= 2 beta + 2 beta*  [stationary]
    """
    n = P.m - 1
    rep = InequalityReport()
    gap = stationarity_gap(P)
    stationary = gap <= STATIONARITY_TOL
    b = beta_mixing(P, tau)
    bs = beta_cond_mixing(P, tau)
    psi_bar = avg_switch(P, tau)
    psi0 = switch_coeff(P, 0, tau)
    psi_mix = mixture_switch(P, tau)
    rho = rho_lp(P, tau, tol=lp_tol)
    rho_m = rho_lp(masked_mixture(P, tau), tau, tol=lp_tol)
    rep.quantities = dict(beta=b, beta_star=bs, avg_switch=psi_bar, switch0=psi0,
                          mixture_switch=psi_mix, rho=rho, rho_masked=rho_m,
                          stationarity_gap=gap)
    why = None if stationary else f"not stationary (gap {gap:.3g})"

    rep.records.append(InequalityRecord(
        "mixing_bound", rho, 2 * b + 2 * bs + 4 * tau / (n + tau + 1), tol, why))
    rep.records.append(InequalityRecord("switch_vs_rho", psi_bar, 2 * rho, tol))
    rep.records.append(InequalityRecord("masked_rho_upper", rho_m, psi_bar + psi0, tol))
    rep.records.append(InequalityRecord("masked_rho_lower", psi_mix / 2, rho_m, tol))

    ks = range(2 * tau + 2, n - tau + 2)
    rot_why = why
    if rot_why is None and 3 * tau > n + 1:
        rot_why = "sequence too short for the stitching construction"
    if rot_why is None and len(ks) == 0:
        rot_why = "no rotation index in range"
    lhs = 0.0
    if rot_why is None:
        ext = extended_law(P, tau)
        lhs = max(rotated_prefix_tv(P, tau, k, ext) for k in ks)
    rep.records.append(InequalityRecord("rotation_tv", lhs, 2 * b + 2 * bs, tol, rot_why))
    return rep


def theorem_bounds(alpha, n, tau, nu=0.0, beta=0.0, beta_star=0.0,
                   avg_switch=0.0, psi0=0.0, rho=None, rho_masked=None) -> dict:
    """Coverage lower bounds for LWO as plain arithmetic.

    Parameters
    ----------
    alpha, n, tau : target miscoverage, training size, window size
    nu : float
        Stability failure probability.
    beta, beta_star : float
        Mixing and conditional-mixing coefficients at lag ``tau``.
    avg_switch, psi0 : float
        Average switch coefficient and the one at ``k = 0``.
    rho : float, optional
        Cyclic embedding coefficient; defaults to its mixing upper bound
        ``2 beta + 2 beta* + 4 tau/(n+tau+1)``.
    rho_masked : float, optional
        Same coefficient for the masked sequence; defaults to
        ``avg_switch + psi0``.

    Returns
    -------
    dict with keys ``exact_embedding``, ``embedding``, ``masked``,
    ``markov_mixing`` and ``mixing``.
    """
    if rho is None:
        rho = 2 * beta + 2 * beta_star + 4 * tau / (n + tau + 1)
    if rho_masked is None:
        rho_masked = avg_switch + psi0
    sq = math.sqrt
    return {
        "exact_embedding": 1 - alpha - 2 * sq(nu) - (tau + 1) / n,
        "embedding": 1 - alpha - rho - (tau + 1) / n - 2 * sq(nu + rho),
        "masked": (1 - alpha - 3 * sq(nu + (2 * tau + 2) / n + rho_masked)
                   - 2 * sq(nu + tau / n + (n + tau + 1) / n * avg_switch)),
        "markov_mixing": 1 - alpha - 3 * sq(nu + 2 * beta + 2 * beta_star + (5 * tau + 1) / n),
        "mixing": 1 - alpha - 5 * sq(nu + (2 * tau + 2) / n + 2 * beta),
    }
