"""Command-line entry point: ``lwocp {simulate,evaluate,coeffs,ingest}``.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from .harness import (ConfigError, ExperimentConfig, records_to_csv, run_trials,
                      summarize, summary_to_json, write_records)
from .processes import (DataError, FiniteProcess, chunk_series, gen_binary_ma,
                        gen_finite_chain, read_column)

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 2, 3


def _experiment_flags(p):
    p.add_argument("--config", help="JSON file of ExperimentConfig fields; flags override it")
    p.add_argument("--n", type=int)
    p.add_argument("--L", type=int, dest="L")
    p.add_argument("--tau", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--inflation", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--predictor", action="append", dest="predictors",
                   help="predictor spec such as knn:2 or count:tree:5:2; repeatable")
    p.add_argument("--methods", help="comma-separated subset of split,jackknife,lwo")
    p.add_argument("--seed", type=int)
    p.add_argument("--score", choices=["l2", "abs"])
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="trial records CSV (default: stdout)")
    p.add_argument("--summary", help="summary JSON path (default: stderr)")


def build_parser():
    parser = argparse.ArgumentParser(prog="lwocp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="coverage experiment on a synthetic process")
    sim.add_argument("--process", choices=["ma1", "gaussian", "sticky"])
    sim.add_argument("--dim", type=int, help="covariate dimension (ma1, gaussian)")
    sim.add_argument("--rho", type=float, help="sticky-chain epoch termination probability")
    _experiment_flags(sim)

    ev = sub.add_parser("evaluate", help="coverage experiment on chunks of a CSV series")
    ev.add_argument("--csv", dest="path")
    ev.add_argument("--column", type=int)
    ev.add_argument("--gap", type=int)
    _experiment_flags(ev)

    co = sub.add_parser("coeffs", help="dependence coefficients of a finite-alphabet law")
    co.add_argument("--chain", required=True,
                    help="builtin:binary-ma | builtin:constant | builtin:iid | "
                         "builtin:flip:P | path to a process JSON file")
    co.add_argument("--n", type=int, help="sequence length is n + 1")
    co.add_argument("--tau", type=int, required=True)
    co.add_argument("--tol", type=float, default=1e-6)
    co.add_argument("--out")

    ing = sub.add_parser("ingest", help="preview the chunking of a CSV series")
    ing.add_argument("--csv", dest="path", required=True)
    ing.add_argument("--column", type=int, default=0)
    ing.add_argument("--L", type=int, dest="L", default=24)
    ing.add_argument("--n", type=int, default=100)
    ing.add_argument("--gap", type=int, default=48)
    return parser


def _load_config(args, process):
    base = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"cannot read config {args.config}: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {args.config} is not valid JSON: {e}") from None
        if not isinstance(base, dict):
            raise ConfigError("config file must hold a JSON object")
    proc = dict(base.get("process", {}))
    proc.update({k: v for k, v in process.items() if v is not None})
    if "kind" not in proc:
        proc = {"kind": "ma1", "dim": 50, **proc}
    base["process"] = proc
    for key in ("n", "L", "tau", "alpha", "inflation", "trials", "predictors",
                "methods", "seed", "score", "workers", "out", "gap"):
        v = getattr(args, key, None)
        if v is not None:
            base[key] = v
    return ExperimentConfig.from_dict(base)


def _emit(records, summary, cfg, args):
    if cfg.out:
        write_records(records, cfg.out)
    else:
        sys.stdout.write(records_to_csv(records))
    text = summary_to_json(summary, cfg)
    if args.summary:
        Path(args.summary).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stderr.write(text + "\n")


def _experiment(args, process):
    cfg = _load_config(args, process)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        records = run_trials(cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    summary = summarize(records) if records else []
    _emit(records, summary, cfg, args)
    return EXIT_OK


def cmd_simulate(args):
    return _experiment(args, {"kind": args.process, "dim": args.dim, "rho": args.rho})


def cmd_evaluate(args):
    return _experiment(args, {"kind": "csv", "path": args.path, "column": args.column})


def builtin_process(name: str, m: int) -> FiniteProcess:
    """Named finite-alphabet laws of length ``m``."""
    if name == "binary-ma":
        return gen_binary_ma(m)
    if name == "constant":
        return gen_finite_chain(np.eye(2), [0.5, 0.5], m)
    if name == "iid":
        return gen_finite_chain(np.full((2, 2), 0.5), [0.5, 0.5], m)
    if name.startswith("flip:"):
        p = float(name.split(":", 1)[1])
        if not 0 <= p <= 1:
            raise ConfigError("flip probability must lie in [0, 1]")
        return gen_finite_chain([[1 - p, p], [p, 1 - p]], [0.5, 0.5], m)
    raise ConfigError(f"unknown builtin chain {name!r}")


def coefficient_report(P: FiniteProcess, tau: int, tol: float) -> dict:
    """All coefficients plus the inequality checks; LP-based parts skip when too large."""
    from .coefficients import (avg_switch, beta_cond_mixing, beta_mixing,
                               mixture_switch, switch_coeff, verify_inequalities)

    n = P.m - 1
    if not 1 <= tau <= n - 1:
        raise ConfigError(f"tau must lie in [1, n-1] = [1, {n - 1}]")
    out = {"alphabet_size": P.alphabet_size, "n": n, "tau": tau}
    try:
        rep = verify_inequalities(P, tau, tol)
        out.update(rep.quantities)
        out["checks"] = [r.to_dict() for r in rep.records]
    except ValueError as e:
        # LP too large: report the closed-form coefficients only
        out.update(beta=beta_mixing(P, tau), beta_star=beta_cond_mixing(P, tau),
                   avg_switch=avg_switch(P, tau), switch0=switch_coeff(P, 0, tau),
                   mixture_switch=mixture_switch(P, tau), rho=None, rho_masked=None)
        out["checks"] = []
        out["skipped"] = str(e)
    return out


def cmd_coeffs(args):
    spec = args.chain
    if spec.startswith("builtin:"):
        if args.n is None:
            raise ConfigError("--n is required for builtin chains")
        P = builtin_process(spec[len("builtin:"):], args.n + 1)
    else:
        try:
            P = FiniteProcess.from_json(Path(spec).read_text(encoding="utf-8"))
        except OSError as e:
            raise DataError(f"cannot read {spec}: {e.strerror}") from None
        except (ValueError, json.JSONDecodeError) as e:
            raise DataError(f"{spec}: {e}") from None
        if args.n is not None and args.n + 1 != P.m:
            raise ConfigError(f"--n {args.n} does not match process length {P.m}")
    text = json.dumps(coefficient_report(P, args.tau, args.tol), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def cmd_ingest(args):
    w = read_column(args.path, args.column)
    chunks = chunk_series(w, args.L, args.n, args.gap)
    print(json.dumps({
        "rows": len(w),
        "chunks": len(chunks),
        "points_per_chunk": args.n + 1,
        "row_ranges": [list(c.rows) for c in chunks],
    }, indent=2))
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "evaluate": cmd_evaluate,
            "coeffs": cmd_coeffs, "ingest": cmd_ingest}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (ConfigError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
