"""Checks of the supporting identities and bounds against the exact-expectation oracle.

Each check returns a :class:`CheckResult` whose ``margin`` is the worst
slack seen (negative means a violation).
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import oracle
from .approx import PolyCoeffs, approx_error_sup, best_abs_poly, build_h2k
from .estimators import region_u
from .unbiased import (a_hat, falling_factorial_estimate, g_shift, g_shift_second_moment,
                       unbiased_from_bivar, unbiased_from_poly)

UNBIASED_J = range(7)
UNBIASED_P = (0.0, 0.05, 0.3, 0.9)
UNBIASED_N = (5, 50, 500)
ABS_DEV_LAMBDAS = (0.1, 0.3, 1, 2.5, 5.7, 20, 100)
BERNSTEIN = 0.2802
BOUND_P = (0.0, 0.01, 0.1, 0.5, 0.9)
BOUND_N = (10, 100, 1000)


@dataclass
class CheckResult:
    name: str
    passed: bool
    margin: float
    detail: dict
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  margin={self.margin:.3g}  {self.detail}"

    def to_json(self) -> dict:
        return asdict(self)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _test_poly(j: int, q: float) -> PolyCoeffs:
    # arbitrary fixed coefficients, shifted to q so the centered path is exercised
    coeffs = np.array([(-1) ** k / (k + 1) for k in range(j + 1)])
    return PolyCoeffs(coeffs, (0.0, 1.0), q, 0.5)


@_timed
def check_unbiasedness(tol: float = 1e-8) -> CheckResult:
    """Oracle bias of every unbiased kernel on the (j, p, q, n) grid."""
    worst = {"g_shift": 0.0, "a_hat": 0.0, "falling_factorial": 0.0, "poly": 0.0, "bivar": 0.0}
    bivar = build_h2k(3)  # total degree 6
    for n in UNBIASED_N:
        for p in UNBIASED_P:
            for j in UNBIASED_J:
                b, _ = oracle.exact_bias_variance_1d(lambda k: falling_factorial_estimate(k, n, j), p, n, p ** j)
                worst["falling_factorial"] = max(worst["falling_factorial"], abs(b))
            for q in UNBIASED_P:
                for j in UNBIASED_J:
                    b, _ = oracle.exact_bias_variance_1d(lambda k: g_shift(k, n, j, q), p, n, (p - q) ** j)
                    worst["g_shift"] = max(worst["g_shift"], abs(b))
                    b, _ = oracle.exact_bias_variance_2d(lambda x, y: a_hat(x, y, n, j), p, q, n, (p - q) ** j)
                    worst["a_hat"] = max(worst["a_hat"], abs(b))
                    poly = _test_poly(j, q)
                    b, _ = oracle.exact_bias_variance_1d(lambda k: unbiased_from_poly(poly, k, n), p, n,
                                                         float(poly(p)))
                    worst["poly"] = max(worst["poly"], abs(b))
                b, _ = oracle.exact_bias_variance_2d(lambda x, y: unbiased_from_bivar(bivar, x, y, n), p, q, n,
                                                     float(bivar(p, q)))
                worst["bivar"] = max(worst["bivar"], abs(b))
    w = max(worst.values())
    return CheckResult("unbiasedness", w <= tol, tol - w, worst)


@_timed
def check_laguerre(tol: float = 1e-8) -> CheckResult:
    """``E[g_shift**2]`` from the oracle against the closed form."""
    worst = 0.0
    where = None
    for n in UNBIASED_N:
        for p in UNBIASED_P:
            for q in UNBIASED_P:
                for j in UNBIASED_J:
                    m = oracle.poisson_expectation(lambda k: g_shift(k, n, j, q) ** 2, n * p)
                    d = abs(m - g_shift_second_moment(p, q, n, j))
                    if d > worst:
                        worst, where = d, (j, p, q, n)
    return CheckResult("second_moment_identity", worst <= tol, tol - worst, {"worst": worst, "at": where})


@_timed
def check_abs_dev(tol: float = 1e-10) -> CheckResult:
    """Closed-form ``E|X - lam|`` and the ``sqrt(q/2n) <= E|q_hat - q| <= sqrt(q/n)`` sandwich."""
    worst_cf = 0.0
    for lam in ABS_DEV_LAMBDAS:
        series = oracle.poisson_expectation(lambda k: np.abs(k - lam), lam)
        worst_cf = max(worst_cf, abs(series - oracle.expected_abs_dev(lam)))
    slack = math.inf
    for n in UNBIASED_N:
        for q in UNBIASED_P:
            if n * q < 1:
                continue
            e = oracle.poisson_expectation(lambda k: np.abs(k / n - q), n * q)
            slack = min(slack, e - math.sqrt(q / (2 * n)), math.sqrt(q / n) - e)
    margin = min(tol - worst_cf, slack)
    return CheckResult("abs_deviation", worst_cf <= tol and slack >= 0, margin,
                       {"closed_form_error": worst_cf, "sandwich_slack": slack})


@_timed
def check_bernstein() -> CheckResult:
    """``K E_K[|t|]`` near the Bernstein constant at ``K = 20`` and ``50``."""
    out = {}
    margin = math.inf
    for K, rel in ((20, 0.10), (50, 0.05)):
        v = K * best_abs_poly(K).sup_error
        out[K] = v
        margin = min(margin, rel - abs(v / BERNSTEIN - 1))
    return CheckResult("bernstein_constant", margin >= 0, margin, out)


@_timed
def check_variance_coverage(c1: float = 2.0) -> CheckResult:
    """``Var|q_hat - p| <= q/n`` and ``P(q_hat not in U(q; c1)) <= 2 n**(-c1/3)``."""
    var_slack = math.inf
    cov_slack = math.inf
    violations = 0
    for n in BOUND_N:
        for q in BOUND_P:
            U = region_u(q, n, c1)
            miss = oracle.indicator_probability(lambda k: (k / n < U.lo) | (k / n > U.hi), n * q)
            s = 2 * n ** (-c1 / 3) - miss
            cov_slack = min(cov_slack, s)
            violations += s < 0
            for p in BOUND_P:
                _, v = oracle.exact_bias_variance_1d(lambda k: np.abs(k / n - p), q, n, 0.0)
                s = q / n - v
                var_slack = min(var_slack, s)
                violations += s < -1e-15
    # equality holds at p = 0, so allow rounding in the variance comparison
    return CheckResult("variance_and_coverage", violations == 0, min(var_slack + 1e-15, cov_slack),
                       {"violations": int(violations), "variance_slack": var_slack, "coverage_slack": cov_slack})


def h2k_rates(Ks=(4, 8, 16), resolution: int = 257) -> dict:
    """Sup error of ``h_2K`` against ``|x - y|`` and its normalized constant."""
    errors, consts = {}, {}
    g = np.linspace(0.0, 1.0, resolution)
    X, Y = np.meshgrid(g, g, indexing="ij")
    target = np.abs(X - Y)
    scale = (np.sqrt(X) + np.sqrt(Y))
    for K in Ks:
        h = build_h2k(K)
        err = np.abs(h(X, Y) - target)
        errors[K] = float(err.max())
        consts[K] = float((err / (scale / K + 1.0 / K ** 2)).max())
    return {"sup_error": errors, "constant": consts}


@_timed
def check_h2k_rates() -> CheckResult:
    r = h2k_rates()
    Ks = sorted(r["sup_error"])
    c = [r["constant"][K] for K in Ks]
    spread = max(c) / min(c)
    ratios = [r["sup_error"][a] / r["sup_error"][b] for a, b in zip(Ks, Ks[1:])]
    margin = min([2 - spread] + [min(x - 1.5, 3 - x) for x in ratios])
    return CheckResult("h2k_rates", margin >= 0, margin,
                       {"constant_spread": spread, "halving_ratios": ratios, **r})


@_timed
def check_rescaled_abs_poly(K: int = 8, resolution: int = 4097) -> CheckResult:
    """Grid sup error of ``best_abs_poly`` agrees with the levelled error."""
    poly = best_abs_poly(K)
    rep = approx_error_sup(poly, np.abs, resolution)
    d = abs(rep.sup_error - poly.sup_error)
    return CheckResult("abs_poly_level", d <= 1e-6, 1e-6 - d, {"grid": rep.sup_error, "level": poly.sup_error})


ORACLE_CHECKS = (check_unbiasedness, check_laguerre, check_abs_dev, check_bernstein,
                check_variance_coverage, check_h2k_rates, check_rescaled_abs_poly)


def run_all(checks=ORACLE_CHECKS) -> list[CheckResult]:
    return [c() for c in checks]
