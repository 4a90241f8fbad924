"""Synthetic generators, finite-alphabet laws and CSV ingestion.

Gaussian draws come from a Box-Muller transform of the PCG64 uniform
stream, so a seed yields the same series on every platform.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import LiftedSequence, RawSeries, lift

MAX_STATES = 10 ** 7


def standard_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Box-Muller standard normals from ``rng.random``."""
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    size = int(np.prod(shape))
    half = (size + 1) // 2
    u1 = 1.0 - rng.random(half)  # in (0, 1]
    u2 = rng.random(half)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
    return z[:size].reshape(shape)


# -- continuous generators --------------------------------------------------

def gen_ma1(d: int, length: int, rng_seed=0) -> RawSeries:
    """``X_i = w_{i-1} + w_i`` with i.i.d. standard Gaussian ``w`` in R^d, ``Y_i = X_{i+1}``."""
    if length < 2:
        raise ValueError("length must be at least 2")
    if d < 1:
        raise ValueError("dimension must be positive")
    rng = np.random.default_rng(rng_seed)
    w = standard_normal(rng, (length + 2, d))
    X = w[:-1] + w[1:]  # length + 1 rows
    return RawSeries(X[:-1].copy(), X[1:].copy())


def gen_iid_gaussian(d: int, length: int, rng_seed=0) -> RawSeries:
    """Exchangeable baseline: ``X_i ~ N(0, I_d)``, ``Y_i = sum(X_i)/sqrt(d) + N(0, 1)``."""
    if length < 1 or d < 1:
        raise ValueError("length and dimension must be positive")
    rng = np.random.default_rng(rng_seed)
    X = standard_normal(rng, (length, d))
    Y = X.sum(axis=1) / math.sqrt(d) + standard_normal(rng, length)
    return RawSeries(X, Y)


def gen_sticky_chain(rho: float, length: int, rng_seed=0, return_latent=False):
    """Epoch chain: covariate frozen within an epoch, response ~ N(epoch length, 1).

    Each epoch draws its length ``K ~ Geom(rho)`` on ``{1, 2, ...}`` and a
    covariate ``X ~ N(0, 1)`` held fixed for those ``K`` steps.

    Parameters
    ----------
    rho : float
        Epoch-termination probability in (0, 1).
    length : int
    rng_seed : int
    return_latent : bool
        Also return ``(K_t, T_t)``, the epoch length and position of every step.

    Returns
    -------
    RawSeries, or (RawSeries, K, T) when ``return_latent``.
    """
    if not 0 < rho < 1:
        raise ValueError("rho must lie in (0, 1)")
    if length < 1:
        raise ValueError("length must be positive")
    rng = np.random.default_rng(rng_seed)
    ks, xs = [], []
    total = 0
    while total < length:
        k = int(rng.geometric(rho))
        ks.append(k)
        xs.append(standard_normal(rng, 1)[0])
        total += k
    K = np.repeat(ks, ks)[:length]
    X = np.repeat(xs, ks)[:length]
    pos = np.concatenate([np.arange(1, k + 1) for k in ks])[:length]
    Y = K + standard_normal(rng, length)
    raw = RawSeries(X, Y)
    if return_latent:
        return raw, K, pos
    return raw


# -- finite-alphabet laws ----------------------------------------------------

@dataclass(frozen=True)
class FiniteProcess:
    """Dense law of ``(Z_1, ..., Z_m)`` on ``{0, ..., A-1}^m``.

    ``joint`` is flat, row-major: ``Z_1`` is the most significant digit.
    """

    alphabet_size: int
    m: int
    joint: np.ndarray

    def __post_init__(self):
        j = np.asarray(self.joint, dtype=float).ravel()
        if j.size != self.alphabet_size ** self.m:
            raise ValueError(
                f"joint has {j.size} entries, expected {self.alphabet_size}^{self.m}"
            )
        if (j < 0).any() or abs(j.sum() - 1) > 1e-12:
            raise ValueError("joint must be a nonnegative pmf summing to 1")
        object.__setattr__(self, "joint", j)

    @property
    def tensor(self) -> np.ndarray:
        return self.joint.reshape((self.alphabet_size,) * self.m)

    def prob(self, z) -> float:
        return float(self.tensor[tuple(z)])

    def marginal(self, idx) -> np.ndarray:
        """Joint pmf tensor of the (0-based, increasing) coordinates ``idx``."""
        idx = list(idx)
        drop = tuple(i for i in range(self.m) if i not in idx)
        return self.tensor.sum(axis=drop)

    def sample(self, size: int, rng_seed=0) -> np.ndarray:
        rng = np.random.default_rng(rng_seed)
        codes = rng.choice(self.joint.size, size=size, p=self.joint)
        return np.stack(np.unravel_index(codes, (self.alphabet_size,) * self.m), axis=1)

    def to_json(self) -> str:
        return json.dumps({"alphabet_size": self.alphabet_size, "m": self.m,
                           "joint": self.joint.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "FiniteProcess":
        d = json.loads(text)
        try:
            return cls(int(d["alphabet_size"]), int(d["m"]), np.asarray(d["joint"]))
        except KeyError as e:
            raise ValueError(f"process file lacks field {e}") from None


def _check_size(A, m):
    if A ** m > MAX_STATES:
        raise ValueError(f"state space {A}^{m} exceeds {MAX_STATES} cells")


def gen_finite_chain(transition, init, m: int) -> FiniteProcess:
    """Exact joint of a Markov chain of length ``m``."""
    P = np.asarray(transition, dtype=float)
    pi = np.asarray(init, dtype=float)
    A = len(pi)
    if P.shape != (A, A):
        raise ValueError("transition must be A x A with A = len(init)")
    if (P < 0).any() or not np.allclose(P.sum(axis=1), 1, atol=1e-12):
        raise ValueError("transition rows must be pmfs")
    if (pi < 0).any() or abs(pi.sum() - 1) > 1e-12:
        raise ValueError("init must be a pmf")
    if m < 1:
        raise ValueError("m must be positive")
    _check_size(A, m)
    joint = pi
    for _ in range(m - 1):
        joint = (joint[..., None] * P.reshape((1,) * (joint.ndim - 1) + (A, A)))
    return FiniteProcess(A, m, joint.ravel())


class ChainSampler:
    """Draw trajectories step by step from a Markov chain."""

    def __init__(self, transition, init):
        self.P = np.asarray(transition, dtype=float)
        self.pi = np.asarray(init, dtype=float)
        self._cum = np.cumsum(self.P, axis=1)

    def sample(self, m: int, size: int, rng_seed=0) -> np.ndarray:
        rng = np.random.default_rng(rng_seed)
        A = len(self.pi)
        out = np.empty((size, m), dtype=int)
        out[:, 0] = rng.choice(A, size=size, p=self.pi)
        for t in range(1, m):
            u = rng.random(size)
            cum = self._cum[out[:, t - 1]]
            out[:, t] = np.minimum((u[:, None] >= cum).sum(axis=1), A - 1)
        return out


def stationary_distribution(transition) -> np.ndarray:
    """Left eigenvector for eigenvalue 1, normalized to a pmf."""
    P = np.asarray(transition, dtype=float)
    A = len(P)
    M = np.vstack([P.T - np.eye(A), np.ones(A)])
    b = np.zeros(A + 1)
    b[-1] = 1
    pi = np.linalg.lstsq(M, b, rcond=None)[0]
    pi = np.clip(pi, 0, None)
    return pi / pi.sum()


def gen_binary_ma(length: int) -> FiniteProcess:
    """``Z_t = (w_{t-1}, w_t)`` coded as ``2 w_{t-1} + w_t`` for fair bits ``w``."""
    if length < 1:
        raise ValueError("length must be positive")
    _check_size(4, length)
    joint = np.zeros(4 ** length)
    weight = 0.5 ** (length + 1)
    powers = 4 ** np.arange(length - 1, -1, -1)
    for w in itertools.product((0, 1), repeat=length + 1):
        z = [2 * w[t] + w[t + 1] for t in range(length)]
        joint[int(np.dot(z, powers))] += weight
    return FiniteProcess(4, length, joint)


# -- real data ---------------------------------------------------------------

class DataError(ValueError):
    """Raised for malformed or insufficient input data."""


@dataclass(frozen=True)
class ChunkProblem:
    """One local trajectory: ``n`` training points plus a test point.

    ``rows`` is the half-open range of 0-based data rows (header excluded)
    the chunk was built from.
    """

    sequence: LiftedSequence
    rows: tuple

    @property
    def test_response(self):
        return self.sequence.responses[-1]


def read_column(path, column: int) -> np.ndarray:
    """Parse one column of a headed CSV file as floats."""
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot open {path}: {e.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        if not 0 <= column < len(header):
            raise DataError(f"{path}: column {column} not in header of width {len(header)}")
        vals = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                vals.append(float(row[column]))
            except (ValueError, IndexError):
                cell = row[column] if column < len(row) else "<missing>"
                raise DataError(f"{path}: non-numeric cell {cell!r} at row {lineno}") from None
    return np.asarray(vals)


def chunk_series(w, L: int, n: int, gap: int) -> list:
    """Cut a scalar series into chunks of ``n + L + 1`` rows separated by ``gap``.

    Chunk points use ``X_t = (W_{t-L+1}, ..., W_t)`` and ``Y_t = W_{t+1}``.
    """
    w = np.asarray(w, dtype=float).ravel()
    if L < 1 or n < 1 or gap < 0:
        raise ValueError("need L >= 1, n >= 1, gap >= 0")
    span = n + L + 1
    if len(w) < span:
        raise DataError(f"too few rows for one chunk: {len(w)} < {span}")
    count = (len(w) + gap) // (span + gap)
    out = []
    for c in range(count):
        start = c * (span + gap)
        seq = lift(RawSeries.autoregressive(w[start: start + span]), L)
        out.append(ChunkProblem(seq, (start, start + span)))
    return out


def ingest_csv(path, column: int, L: int, n: int, gap: int) -> list:
    """Read ``column`` of a CSV file and chunk it (see :func:`chunk_series`)."""
    return chunk_series(read_column(path, column), L, n, gap)
