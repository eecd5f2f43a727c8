"""Command line entry point: ``l1dist <command>``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io, verify
from .approx import best_abs_poly, remez_best_approx
from .estimators import (EstimatorConfig, estimate_known_q_detail, estimate_unknown_q_detail, mle_known_q,
                         mle_unknown_q, pk2_stripe, pk_known_q, square_poly)
from .harness import ExperimentSpec, demo_enlargement, demo_origin_only, demo_plugin_failure, emit, run_experiment

OUTPUT_ENV = "L1DIST_OUTPUT_DIR"


def output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "results"))


def _config(args) -> EstimatorConfig:
    return EstimatorConfig(c1=args.c1, c2=args.c2, c3=args.c3, split_mode=args.split, seed=args.seed)


def _add_config_flags(p):
    d = EstimatorConfig()
    p.add_argument("--c1", type=float, default=d.c1)
    p.add_argument("--c2", type=float, default=d.c2)
    p.add_argument("--c3", type=float, default=d.c3)
    p.add_argument("--split", choices=("thinning", "reuse"), default=d.split_mode)
    p.add_argument("--seed", type=int, default=d.seed)


def _print(obj):
    print(json.dumps(obj, indent=2))


def cmd_estimate(args) -> int:
    cfg = _config(args)
    X = io.read_counts(args.counts_x, args.n)
    if args.known_q:
        Q = io.read_distribution(args.known_q)
        if args.estimator == "mle":
            value, hist = mle_known_q(X, Q), {}
        else:
            d = estimate_known_q_detail(X, Q, cfg, np.random.default_rng(cfg.seed))
            value, hist = d.value, d.histogram()
    elif args.counts_y:
        Y = io.read_counts(args.counts_y, args.n)
        if args.estimator == "mle":
            value, hist = mle_unknown_q(X, Y), {}
        else:
            d = estimate_unknown_q_detail(X, Y, cfg, np.random.default_rng(cfg.seed))
            value, hist = d.value, d.histogram()
    else:
        raise SystemExit("estimate needs --known-q or --counts-y")
    _print({"estimate": value, "regime_histogram": hist, "config": cfg.to_json()})
    return 0


def _parse_grid(items):
    out = []
    for it in items:
        S, n = it.split(":")
        out.append((int(S), float(n)))
    return out


def _parse_family(text):
    kind, _, rest = text.partition(":")
    fam = {"kind": kind}
    for kv in filter(None, rest.split(",")):
        k, v = kv.split("=")
        fam[k] = float(v)
    return fam


def cmd_simulate(args) -> int:
    if args.spec:
        spec = ExperimentSpec.from_json(json.loads(Path(args.spec).read_text()))
    else:
        spec = ExperimentSpec(args.estimators, _parse_family(args.p_family), _parse_family(args.q_family),
                              _parse_grid(args.grid), args.trials, args.seed, args.sampling,
                              _config(args), args.workers)
    report = run_experiment(spec)
    out = Path(args.out) if args.out else output_dir() / f"report.{args.format}"
    emit(report, args.format, out)
    print(out)
    return 0


def cmd_demo(args) -> int:
    cfg = _config(args)
    if args.which == "enlargement":
        res = demo_enlargement(args.S, args.n, args.trials, cfg, args.seed, args.unknown_q, args.workers)
    elif args.which == "plugin":
        res = demo_plugin_failure(args.S, args.n, args.trials, cfg, args.seed, args.workers)
    else:
        res = demo_origin_only(args.S, args.n, args.trials, cfg, args.seed, args.c, workers=args.workers)
    report = res.pop("report")
    out = output_dir() / f"demo_{args.which}.csv"
    emit(report, "csv", out)
    res["csv"] = str(out)
    _print(res)
    return 0


def cmd_approx(args) -> int:
    cfg = _config(args)
    if args.kind == "abs":
        poly = best_abs_poly(args.K)
    elif args.kind == "sqrt":
        poly = remez_best_approx(np.sqrt, (0.0, 1.0), args.K)
    elif args.kind == "known_q":
        poly = pk_known_q(args.q, args.n, cfg)
    elif args.kind == "stripe":
        poly = pk2_stripe(args.p, args.q, args.n, cfg)
    else:
        poly = square_poly(args.n, cfg)
    _print(io.poly_to_json(poly))
    return 0


def cmd_verify(args) -> int:
    checks = [c for c in verify.ORACLE_CHECKS if c.__name__ not in set(args.skip)]
    results = verify.run_all(checks)
    ok = all(r.passed for r in results)
    _print({"passed": ok, "checks": [r.to_json() for r in results]})
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="l1dist", description="L1 distance estimation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate L1(P, Q) from count files")
    p.add_argument("--estimator", choices=("mle", "opt"), default="opt")
    p.add_argument("--counts-x", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--known-q")
    group.add_argument("--counts-y")
    p.add_argument("--n", type=float, default=None, help="sample-size parameter (default: total count)")
    _add_config_flags(p)
    p.set_defaults(fn=cmd_estimate)

    p = sub.add_parser("simulate", help="run a Monte Carlo risk experiment")
    p.add_argument("--spec", help="ExperimentSpec as JSON")
    p.add_argument("--estimators", nargs="+", default=["mle_known_q", "opt_known_q"])
    p.add_argument("--p-family", default="uniform", help="kind[:key=value,...]")
    p.add_argument("--q-family", default="uniform")
    p.add_argument("--grid", nargs="+", default=["5000:500"], help="S:n pairs")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--sampling", choices=("poissonized", "multinomial"), default="poissonized")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    _add_config_flags(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("demo", help="comparative demonstrations")
    p.add_argument("which", choices=("enlargement", "plugin", "origin"))
    p.add_argument("--S", type=int, default=None)
    p.add_argument("--n", type=float, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--unknown-q", action="store_true", help="enlargement: use the two-sample estimators")
    p.add_argument("--c", type=float, default=None, help="origin: hard-instance mass constant")
    p.add_argument("--workers", type=int, default=1)
    _add_config_flags(p)
    p.set_defaults(fn=cmd_demo)

    p = sub.add_parser("approx", help="polynomial approximants")
    asub = p.add_subparsers(dest="action", required=True)
    d = asub.add_parser("dump", help="print an approximant as JSON")
    d.add_argument("kind", choices=("abs", "sqrt", "known_q", "stripe", "square"))
    d.add_argument("--K", type=int, default=4)
    d.add_argument("--n", type=float, default=1000.0)
    d.add_argument("--p", type=float, default=0.0)
    d.add_argument("--q", type=float, default=0.0)
    _add_config_flags(d)
    d.set_defaults(fn=cmd_approx)

    p = sub.add_parser("verify", help="run the oracle checks")
    p.add_argument("--skip", nargs="*", default=[], help="check function names to skip")
    p.set_defaults(fn=cmd_verify)
    return parser


_DEMO_SIZES = {"enlargement": (5000, 500), "plugin": (5000, 500), "origin": (1000, 10**5)}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "demo":
        S, n = _DEMO_SIZES[args.which]
        args.S = S if args.S is None else args.S
        args.n = n if args.n is None else args.n
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
