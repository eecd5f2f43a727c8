"""Monte Carlo risk experiments and the comparative demos."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .estimators import (EstimatorConfig, estimate_known_q, estimate_origin_only, estimate_unknown_q,
                         mle_known_q, mle_unknown_q)
from .prob import (CountVector, Distribution, family, l1_exact, make_distribution, near, sample_multinomial,
                   sample_poissonized)

CSV_COLUMNS = ["estimator", "S", "n", "trials", "mean", "bias", "variance", "mse", "mse_se"]


# -- plug-in variants ---------------------------------------------------------


def plugin_add_one(X: CountVector) -> np.ndarray:
    return (X.counts + 1.0) / (X.counts.sum() + len(X))


def plugin_missing_mass(X: CountVector) -> np.ndarray:
    """Good-Turing style: seen symbols shrink by the singleton fraction, which is
    spread evenly over the unseen ones."""
    total = X.counts.sum()
    if total == 0:
        return np.full(len(X), 1.0 / len(X))
    m0 = np.count_nonzero(X.counts == 1) / total
    unseen = X.counts == 0
    p = (1.0 - m0) * X.counts / total
    if unseen.any():
        p[unseen] = m0 / unseen.sum()
    else:
        p = X.counts / total
    return p


def _against_q(plugin):
    return lambda X, Y, Q, cfg, rng: float(np.sum(np.abs(plugin(X) - Q.probs)))


# every estimator sees (X, Y, Q, cfg, rng); known-Q ones ignore Y
ESTIMATORS = {
    "mle_known_q": lambda X, Y, Q, cfg, rng: mle_known_q(X, Q),
    "mle_unknown_q": lambda X, Y, Q, cfg, rng: mle_unknown_q(X, Y),
    "opt_known_q": lambda X, Y, Q, cfg, rng: estimate_known_q(X, Q, cfg, rng),
    "opt_unknown_q": lambda X, Y, Q, cfg, rng: estimate_unknown_q(X, Y, cfg, rng),
    "origin_only": lambda X, Y, Q, cfg, rng: estimate_origin_only(X, Y, cfg, rng),
    "plugin_add_one": _against_q(plugin_add_one),
    "plugin_missing_mass": _against_q(plugin_missing_mass),
}


# -- experiment spec and report -----------------------------------------------


@dataclass(frozen=True)
class ExperimentSpec:
    estimators: tuple
    P_family: dict
    Q_family: dict
    grid: tuple
    trials: int = 100
    seed: int = 0
    sampling: str = "poissonized"
    config: EstimatorConfig = EstimatorConfig()
    workers: int = 1
    keep_estimates: bool = False

    def __post_init__(self):
        object.__setattr__(self, "estimators", tuple(self.estimators))
        object.__setattr__(self, "grid", tuple((int(S), float(n)) for S, n in self.grid))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.grid:
            raise ValueError("grid must be non-empty")
        if self.sampling not in ("poissonized", "multinomial"):
            raise ValueError("sampling must be 'poissonized' or 'multinomial'")
        unknown = [e for e in self.estimators if e not in ESTIMATORS and e != "truth"]
        if unknown:
            raise ValueError(f"unknown estimators: {unknown}")

    @classmethod
    def from_json(cls, d: dict) -> "ExperimentSpec":
        d = dict(d)
        cfg = d.pop("config", {}) or {}
        if "clip" in cfg:
            cfg["clip"] = tuple(cfg["clip"])
        return cls(config=EstimatorConfig(**cfg), **d)

    def to_json(self) -> dict:
        d = asdict(self)
        d["config"] = self.config.to_json()
        d["grid"] = [list(c) for c in self.grid]
        d["estimators"] = list(self.estimators)
        return d


@dataclass
class RiskRow:
    estimator: str
    S: int
    n: float
    trials: int
    mean: float
    bias: float
    variance: float
    mse: float
    mse_se: float
    truth: float = 0.0
    estimates: list | None = None

    @property
    def rmse(self) -> float:
        return math.sqrt(self.mse)

    @property
    def rmse_se(self) -> float:
        # delta method
        return self.mse_se / (2 * self.rmse) if self.mse > 0 else 0.0


@dataclass
class RiskReport:
    rows: list = field(default_factory=list)

    def row(self, estimator: str, S: int | None = None, n: float | None = None) -> RiskRow:
        for r in self.rows:
            if r.estimator == estimator and (S is None or r.S == S) and (n is None or r.n == n):
                return r
        raise KeyError((estimator, S, n))

    def to_json(self) -> dict:
        return {"rows": [asdict(r) for r in self.rows]}

    @classmethod
    def from_json(cls, d: dict) -> "RiskReport":
        return cls([RiskRow(**r) for r in d["rows"]])


def summarize(name: str, S: int, n: float, estimates, truth: float, keep: bool = False) -> RiskRow:
    est = np.asarray(estimates, dtype=float)
    err2 = (est - truth) ** 2
    mean = float(est.mean())
    se = float(err2.std(ddof=1) / math.sqrt(est.size)) if est.size > 1 else 0.0
    return RiskRow(name, S, n, int(est.size), mean, mean - truth, float(est.var()), float(err2.mean()),
                   se, truth, est.tolist() if keep else None)


def _sample(P: Distribution, n: float, mode: str, rng) -> CountVector:
    if mode == "multinomial":
        return sample_multinomial(P, int(round(n)), rng)
    return sample_poissonized(P, n, rng)


def _distribution(fam, S: int, n: float) -> Distribution:
    if isinstance(fam, Distribution):
        return fam
    fam = dict(fam)
    kind = fam.pop("kind")
    if kind == "hard_origin":
        fam.setdefault("n", n)
    if kind == "near":
        base = _distribution(fam.pop("base"), S, n)
        return near(base, fam["delta"])
    return family(kind, S, **fam)


def _trial(spec: ExperimentSpec, cell: int, trial: int, P, Q, n):
    ss = np.random.SeedSequence(spec.seed, spawn_key=(cell, trial))
    sx, sy, ssplit = ss.spawn(3)
    X = _sample(P, n, spec.sampling, np.random.default_rng(sx))
    Y = _sample(Q, n, spec.sampling, np.random.default_rng(sy))
    truth = l1_exact(P, Q)
    out = []
    for name in spec.estimators:
        if name == "truth":
            out.append(truth)
            continue
        # each estimator gets the same fresh split stream
        rng = np.random.default_rng(ssplit)
        out.append(ESTIMATORS[name](X, Y, Q, spec.config, rng))
    return out


def run_experiment(spec: ExperimentSpec) -> RiskReport:
    """Score every estimator on ``trials`` datasets per grid cell.

    Trial ``t`` of cell ``c`` draws from ``SeedSequence(seed, spawn_key=(c, t))``,
    so reports do not depend on ``workers``.
    """
    report = RiskReport()
    for cell, (S, n) in enumerate(spec.grid):
        P = _distribution(spec.P_family, S, n)
        Q = _distribution(spec.Q_family, S, n)
        truth = l1_exact(P, Q)

        def one(t, cell=cell, P=P, Q=Q, n=n):
            try:
                return _trial(spec, cell, t, P, Q, n)
            except Exception as exc:
                raise RuntimeError(f"cell (S={S}, n={n}) trial {t}: {exc}") from exc

        if spec.workers > 1:
            with ThreadPoolExecutor(spec.workers) as pool:
                results = list(pool.map(one, range(spec.trials)))
        else:
            results = [one(t) for t in range(spec.trials)]
        table = np.array(results, dtype=float).reshape(spec.trials, len(spec.estimators))
        for k, name in enumerate(spec.estimators):
            report.rows.append(summarize(name, S, n, table[:, k], truth, spec.keep_estimates))
    return report


# -- output -------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def emit(report: RiskReport, fmt: str, path) -> None:
    """Write ``report`` as CSV (one row per estimator and cell) or JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for r in report.rows:
                w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    elif fmt == "json":
        # repr of a Python float round-trips and never has more than 17 digits
        path.write_text(json.dumps(report.to_json(), indent=2))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def load_report(path) -> RiskReport:
    return RiskReport.from_json(json.loads(Path(path).read_text()))


# -- demos --------------------------------------------------------------------


def hard_origin_instance(S: int, n: float, c: float = 6.0) -> Distribution:
    """``m = min(S, floor(n / (c ln n)))`` symbols of equal mass, zeros elsewhere.

    Each mass is at least ``c ln n / n``, exactly that when ``m < S`` and
    ``n / (c ln n)`` is an integer. The default ``c`` is ``3 c1`` for the
    default ``c1``; the construction needs ``c > 2 c1``.
    """
    if not n > 1 or not c > 0:
        raise ValueError("need n > 1 and c > 0")
    m = max(1, min(S, math.floor(n / (c * math.log(n)))))
    w = np.zeros(S)
    w[:m] = 1.0
    return make_distribution(w)


def _rmse_table(report: RiskReport) -> dict:
    return {r.estimator: {"rmse": r.rmse, "rmse_se": r.rmse_se, "n": r.n} for r in report.rows}


def demo_enlargement(S: int = 5000, n: float = 500, trials: int = 100, cfg: EstimatorConfig = EstimatorConfig(),
                     seed: int = 0, unknown_q: bool = False, workers: int = 1) -> dict:
    """Optimal estimator at ``n`` against the MLE at ``n`` and ``n * ceil(ln n)``."""
    big_n = n * math.ceil(math.log(n))
    opt, mle = ("opt_unknown_q", "mle_unknown_q") if unknown_q else ("opt_known_q", "mle_known_q")
    fam = {"kind": "uniform"}
    spec = ExperimentSpec((opt, mle), fam, fam, [(S, n), (S, big_n)], trials, seed, config=cfg, workers=workers)
    rep = run_experiment(spec)
    o, m, mb = rep.row(opt, S, n), rep.row(mle, S, n), rep.row(mle, S, big_n)
    return {
        "S": S, "n": n, "n_enlarged": big_n, "trials": trials,
        "rmse_opt_n": o.rmse, "rmse_mle_n": m.rmse, "rmse_mle_enlarged": mb.rmse,
        "se_opt_n": o.rmse_se, "se_mle_n": m.rmse_se, "se_mle_enlarged": mb.rmse_se,
        "ratio_opt_to_mle_n": o.rmse / m.rmse,
        "ratio_opt_to_mle_enlarged": o.rmse / mb.rmse,
        "report": rep,
    }


def demo_plugin_failure(S: int = 5000, n: float = 500, trials: int = 100, cfg: EstimatorConfig = EstimatorConfig(),
                        seed: int = 0, workers: int = 1) -> dict:
    """Plug-in variants ``L1(g(P_n), Q)`` against the optimal known-Q estimator."""
    fam = {"kind": "uniform"}
    names = ("mle_known_q", "plugin_add_one", "plugin_missing_mass", "opt_known_q")
    rep = run_experiment(ExperimentSpec(names, fam, fam, [(S, n)], trials, seed, config=cfg, workers=workers))
    out = _rmse_table(rep)
    out["reference_sqrt_S_over_n"] = math.sqrt(S / n)
    out["report"] = rep
    return out


def demo_origin_only(S: int = 1000, n: float = 10**5, trials: int = 100, cfg: EstimatorConfig = EstimatorConfig(),
                     seed: int = 0, c: float | None = None, instance: str = "hard", workers: int = 1) -> dict:
    """Full unknown-Q estimator against the variant with no stripe case.

    ``instance="hard"`` uses :func:`hard_origin_instance`; ``"easy"`` uses
    disjoint point masses, where everything is in the smooth regime.
    """
    c = 3 * cfg.c1 if c is None else c
    if instance == "hard":
        P = Q = hard_origin_instance(S, n, c)
    elif instance == "easy":
        P = Distribution(np.eye(S)[0])
        Q = Distribution(np.eye(S)[1])
    else:
        raise ValueError("instance must be 'hard' or 'easy'")
    names = ("opt_unknown_q", "origin_only", "mle_unknown_q")
    rep = run_experiment(ExperimentSpec(names, P, Q, [(S, n)], trials, seed, config=cfg, workers=workers))
    out = _rmse_table(rep)
    out["c"] = c
    out["report"] = rep
    return out


__all__ = [
    "ESTIMATORS", "ExperimentSpec", "RiskReport", "RiskRow", "run_experiment", "emit", "load_report",
    "hard_origin_instance", "demo_enlargement", "demo_plugin_failure", "demo_origin_only",
]
