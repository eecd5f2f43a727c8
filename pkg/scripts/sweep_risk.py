"""Risk of every estimator over an (S, n) grid for a few P/Q families."""

import argparse
from pathlib import Path

from l1dist.harness import ExperimentSpec, emit, run_experiment

FAMILIES = {
    "uniform": ({"kind": "uniform"}, {"kind": "uniform"}),
    "zipf_vs_uniform": ({"kind": "zipf", "exponent": 1.0}, {"kind": "uniform"}),
    "mix_vs_uniform": ({"kind": "point_mass_mix", "gamma": 0.5}, {"kind": "uniform"}),
}
ESTIMATORS = ("mle_known_q", "opt_known_q", "mle_unknown_q", "opt_unknown_q", "plugin_add_one",
              "plugin_missing_mass")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--S", type=int, nargs="+", default=[1000, 5000])
    ap.add_argument("--n", type=float, nargs="+", default=[500, 2000, 10000])
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    grid = [(S, n) for S in args.S for n in args.n]
    for name, (P, Q) in FAMILIES.items():
        spec = ExperimentSpec(ESTIMATORS, P, Q, grid, args.trials, workers=args.workers)
        path = Path(args.out) / f"sweep_{name}.csv"
        emit(run_experiment(spec), "csv", path)
        print(path)


if __name__ == "__main__":
    main()
