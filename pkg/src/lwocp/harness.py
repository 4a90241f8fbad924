"""Repeated-trial coverage experiments.

Each trial draws (or, for CSV data, reads) one sequence of ``n + 1``
lifted points and runs every requested method with every predictor on it,
so methods are compared on paired data. Trial seeds are derived from the
master seed with a splitmix64 mix, independent of method and predictor.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .data import lift
from .methods import jackknife, lwo, split_cp
from .predictors.base import format_spec, parse_spec, spec_from_dict
from .processes import gen_iid_gaussian, gen_ma1, gen_sticky_chain, ingest_csv
from .scores import ScoreKind, region_contains

METHODS = ("split", "jackknife", "lwo")
RECORD_FIELDS = ("method", "predictor", "trial", "seed", "covered", "radius", "wall_ms")
_MASK64 = (1 << 64) - 1


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def trial_seed(master: int, trial: int) -> int:
    """Seed of trial ``trial``: ``splitmix64(splitmix64(master) xor trial)``."""
    return splitmix64(splitmix64(int(master) & _MASK64) ^ int(trial))


@dataclass
class ExperimentConfig:
    """Settings of one experiment.

    ``process`` is a dict with key ``kind`` in ``{"ma1", "gaussian",
    "sticky", "csv"}``. The first two need ``dim``, ``sticky`` needs
    ``rho`` and ``csv`` needs ``path`` (``column`` defaults to 0).
    """

    process: dict = field(default_factory=lambda: {"kind": "ma1", "dim": 50})
    n: int = 200
    L: int = 0
    tau: int = 5
    alpha: float = 0.1
    inflation: float = 0.0
    trials: int = 500
    predictors: list = field(default_factory=lambda: ["knn:2"])
    methods: list = field(default_factory=lambda: list(METHODS))
    seed: int = 0
    out: str | None = None
    gap: int = 48
    score: str = "l2"
    workers: int = 1

    def __post_init__(self):
        self.predictors = [parse_spec(p) if isinstance(p, str)
                           else spec_from_dict(p) if isinstance(p, dict) else p
                           for p in self.predictors]
        if isinstance(self.methods, str):
            self.methods = [m for m in self.methods.split(",") if m]
        self.methods = list(self.methods)
        self.validate()

    def validate(self):
        kind = self.process.get("kind")
        if kind in ("ma1", "gaussian"):
            if int(self.process.get("dim", 0)) < 1:
                raise ConfigError(f"{kind} process needs a positive dim")
        elif kind == "sticky":
            if not 0 < float(self.process.get("rho", 0)) < 1:
                raise ConfigError("sticky process needs rho in (0, 1)")
        elif kind == "csv":
            if "path" not in self.process:
                raise ConfigError("csv process needs a path")
            if self.L < 1:
                raise ConfigError("csv data needs memory L >= 1")
        else:
            raise ConfigError(f"unknown process kind {kind!r}")
        if self.n < 4:
            raise ConfigError("n must be at least 4")
        if not 0 < self.alpha < 1:
            raise ConfigError("alpha must lie in (0, 1)")
        if not 0 <= self.tau < self.n:
            raise ConfigError("tau must lie in [0, n)")
        if self.L < 0 or self.gap < 0 or self.trials < 0 or self.inflation < 0:
            raise ConfigError("L, gap, trials and inflation must be nonnegative")
        bad = set(self.methods) - set(METHODS)
        if bad or not self.methods:
            raise ConfigError(f"methods must be a nonempty subset of {METHODS}")
        if not self.predictors:
            raise ConfigError("at least one predictor is required")
        try:
            ScoreKind(self.score)
        except ValueError:
            raise ConfigError(f"unknown score {self.score!r}") from None

    def to_dict(self):
        d = asdict(self)
        d["predictors"] = [format_spec(p) for p in self.predictors]
        return d

    @classmethod
    def from_dict(cls, d):
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        try:
            return cls(**d)
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(str(e)) from None


@dataclass(frozen=True)
class TrialRecord:
    method: str
    predictor: str
    trial: int
    seed: int
    covered: int
    radius: float
    wall_ms: float


def trial_sequence(cfg: ExperimentConfig, seed: int):
    """Synthetic ``n + 1`` lifted points for one trial."""
    length = cfg.n + 1 + cfg.L
    kind = cfg.process["kind"]
    if kind == "ma1":
        raw = gen_ma1(int(cfg.process["dim"]), length, seed)
    elif kind == "gaussian":
        raw = gen_iid_gaussian(int(cfg.process["dim"]), length, seed)
    elif kind == "sticky":
        raw = gen_sticky_chain(float(cfg.process["rho"]), length, seed)
    else:
        raise ConfigError(f"process {kind!r} has no generator")
    return lift(raw, cfg.L)


def evaluate_sequence(cfg, seq, trial, seed):
    """Run every method x predictor pair on one sequence."""
    out = []
    y_test = seq.responses[-1]
    fit_seed = seed & 0xFFFFFFFF
    kind = ScoreKind(cfg.score)
    for spec in cfg.predictors:
        label = format_spec(spec)
        for method in cfg.methods:
            t0 = time.perf_counter()
            if method == "split":
                region = split_cp(seq, cfg.alpha, spec, kind, fit_seed)
            elif method == "jackknife":
                region = jackknife(seq, cfg.alpha, spec, kind, fit_seed).region
            else:
                region = lwo(seq, cfg.alpha, cfg.tau, spec, kind, cfg.inflation,
                             fit_seed).region
            ms = (time.perf_counter() - t0) * 1e3
            out.append(TrialRecord(method, label, trial, seed,
                                   int(region_contains(region, y_test)),
                                   float(region.radius), ms))
    return out


def _synthetic_trial(args):
    cfg, trial = args
    seed = trial_seed(cfg.seed, trial)
    return evaluate_sequence(cfg, trial_sequence(cfg, seed), trial, seed)


def run_trials(cfg: ExperimentConfig, progress=None) -> list:
    """Run ``cfg.trials`` trials and return their records in trial order.

    For CSV processes trial ``i`` is chunk ``i``; if there are fewer chunks
    than trials a warning is issued and the run is truncated.
    """
    if cfg.trials == 0:
        return []
    if cfg.process["kind"] == "csv":
        chunks = ingest_csv(cfg.process["path"], int(cfg.process.get("column", 0)),
                            cfg.L, cfg.n, cfg.gap)
        if len(chunks) < cfg.trials:
            warnings.warn(f"only {len(chunks)} chunks available, "
                          f"running {len(chunks)} of {cfg.trials} trials")
        records = []
        for i, chunk in enumerate(chunks[: cfg.trials]):
            seed = trial_seed(cfg.seed, i)
            records.extend(evaluate_sequence(cfg, chunk.sequence, i, seed))
            if progress:
                progress(i)
        return records

    jobs = [(cfg, i) for i in range(cfg.trials)]
    records = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            for i, recs in enumerate(pool.map(_synthetic_trial, jobs, chunksize=4)):
                records.extend(recs)
                if progress:
                    progress(i)
    else:
        for i, job in enumerate(jobs):
            records.extend(_synthetic_trial(job))
            if progress:
                progress(i)
    return records


def summarize(records) -> list:
    """Per (method, predictor) coverage and radius statistics.

    Groups appear in first-seen order. Infinite radii are excluded from the
    radius mean and counted in ``n_infinite``.
    """
    records = list(records)
    if not records:
        raise ValueError("cannot summarize an empty record list")
    groups = {}
    for r in records:
        groups.setdefault((r.method, r.predictor), []).append(r)
    out = []
    for (method, pred), rs in groups.items():
        cov = np.array([r.covered for r in rs], dtype=float)
        rad = np.array([r.radius for r in rs], dtype=float)
        fin = rad[np.isfinite(rad)]
        p = float(cov.mean())
        out.append({
            "method": method,
            "predictor": pred,
            "trials": len(rs),
            "coverage": p,
            "coverage_se": math.sqrt(p * (1 - p) / len(rs)),
            "mean_radius": float(fin.mean()) if fin.size else None,
            "radius_se": float(fin.std(ddof=1) / math.sqrt(fin.size)) if fin.size > 1 else None,
            "n_infinite": int((~np.isfinite(rad)).sum()),
        })
    return out


def summary_row(summary, method, predictor=None):
    for row in summary:
        if row["method"] == method and (predictor is None or row["predictor"] == predictor):
            return row
    raise KeyError((method, predictor))


def _fmt_radius(x):
    return "inf" if math.isinf(x) else repr(float(x))


def records_to_csv(records, fh=None) -> str | None:
    """Write records as CSV to ``fh``, or return the text when ``fh`` is None."""
    buf = io.StringIO() if fh is None else fh
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_FIELDS)
    for r in records:
        w.writerow([r.method, r.predictor, r.trial, r.seed, r.covered,
                    _fmt_radius(r.radius), f"{r.wall_ms:.3f}"])
    return buf.getvalue() if fh is None else None


def write_records(records, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        records_to_csv(records, fh)


def read_records(path) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return [TrialRecord(r["method"], r["predictor"], int(r["trial"]), int(r["seed"]),
                        int(r["covered"]), float(r["radius"]), float(r["wall_ms"]))
            for r in rows]


def summary_to_json(summary, cfg=None) -> str:
    doc = {"summary": summary}
    if cfg is not None:
        doc["config"] = cfg.to_dict()
    return json.dumps(doc, indent=2)


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **kw)
