"""Exact expectations under Poisson sampling by truncated series.

Kernels are called on whole vectors (or grids) of counts, so they must be
vectorized. Truncation points come from the Chernoff tail bound
``P(X >= (1+d) lam) <= (e**d / (1+d)**(1+d))**lam``: the series stops at
the first ``m`` whose bound on ``P(X >= m)`` is below ``tail_tol``. One
dimensional sums then keep doubling the range while the added block still
matters, since kernels may grow polynomially in the count.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .prob import CountVector, Distribution, l1_exact


class TruncationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TruncationPolicy:
    tail_tol: float = 1e-18
    hard_cap: int = 10**6

    def __post_init__(self):
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")


DEFAULT_POLICY = TruncationPolicy()


def log_tail_bound(lam: float, m: int) -> float:
    """Log of the Chernoff bound on ``P(X >= m)`` for ``X ~ Poi(lam)``, ``m > lam``."""
    return -lam + m + m * (math.log(lam) - math.log(m))


def truncation_point(lam: float, policy: TruncationPolicy = DEFAULT_POLICY) -> int:
    """Smallest ``m`` with ``P(Poi(lam) >= m) < tail_tol`` certified; sum over ``k < m``."""
    if lam < 0:
        raise ValueError("rate must be non-negative")
    if lam == 0:
        return 1
    target = math.log(policy.tail_tol)
    lo = math.floor(lam) + 1
    if log_tail_bound(lam, lo) < target:
        return lo
    hi = lo
    while log_tail_bound(lam, hi) >= target:
        hi = 2 * hi
        if hi > 2 * policy.hard_cap:
            break
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if log_tail_bound(lam, mid) < target:
            hi = mid
        else:
            lo = mid
    if hi > policy.hard_cap:
        raise TruncationError(f"rate {lam} needs {hi} terms, over the cap {policy.hard_cap}")
    return hi


def poisson_log_pmf(k: np.ndarray, lam: float) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if lam == 0:
        return np.where(k == 0, 0.0, -np.inf)
    return k * math.log(lam) - lam - gammaln(k + 1)


def poisson_weights(lam: float, policy: TruncationPolicy = DEFAULT_POLICY):
    m = truncation_point(lam, policy)
    k = np.arange(m)
    return k, np.exp(poisson_log_pmf(k, lam))


def _adaptive_terms(g: Callable, lam: float, policy: TruncationPolicy):
    """Counts, weights and ``g`` values, extending the certified range while
    the next block still moves the weighted sum by more than ``tail_tol``
    relative (``g`` may grow polynomially)."""
    k, w = poisson_weights(lam, policy)
    vals = np.asarray(g(k), dtype=float)
    if lam == 0:
        return k, w, vals
    total = math.fsum(vals * w)
    while True:
        m = k.size
        if 2 * m > policy.hard_cap:
            raise TruncationError(f"rate {lam}: expectation not settled within {policy.hard_cap} terms")
        k2 = np.arange(m, 2 * m)
        w2 = np.exp(poisson_log_pmf(k2, lam))
        v2 = np.asarray(g(k2), dtype=float)
        extra = math.fsum(v2 * w2)
        k, w, vals = np.concatenate((k, k2)), np.concatenate((w, w2)), np.concatenate((vals, v2))
        total += extra
        if abs(extra) <= policy.tail_tol * max(1.0, abs(total)):
            return k, w, vals


def poisson_expectation(g: Callable, lam: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``sum_k g(k) e**-lam lam**k / k!`` over the certified range."""
    _, w, vals = _adaptive_terms(g, lam, policy)
    return float(math.fsum(vals * w))


def poisson_expectation_2d(g: Callable, lam_x: float, lam_y: float,
                           policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    kx, wx = poisson_weights(lam_x, policy)
    ky, wy = poisson_weights(lam_y, policy)
    X, Y = np.meshgrid(kx, ky, indexing="ij")
    vals = np.asarray(g(X, Y), dtype=float) * np.outer(wx, wy)
    return float(math.fsum(vals.ravel()))


def expected_abs_dev(lam: float) -> float:
    """``E|X - lam|`` for ``X ~ Poi(lam)``: ``2 lam e**-lam lam**f / f!``, ``f = floor(lam)``."""
    if lam < 0:
        raise ValueError("rate must be non-negative")
    if lam == 0:
        return 0.0
    f = math.floor(lam)
    return 2.0 * lam * math.exp(-lam + f * math.log(lam) - math.lgamma(f + 1))


def _bias_var(vals, w, target):
    mean = math.fsum(vals * w)
    var = math.fsum((vals - mean) ** 2 * w)
    return mean - target, var


def exact_bias_variance_1d(kernel: Callable, p: float, n: float, target: float,
                           policy: TruncationPolicy = DEFAULT_POLICY):
    """Bias and variance of ``kernel(N)`` for ``N ~ Poi(n p)``."""
    _, w, vals = _adaptive_terms(lambda k: kernel(k) ** 2 + np.abs(kernel(k)), n * p, policy)
    k = np.arange(w.size)
    return _bias_var(np.asarray(kernel(k), dtype=float), w, target)


def exact_bias_variance_2d(kernel: Callable, p: float, q: float, n: float, target: float,
                           policy: TruncationPolicy = DEFAULT_POLICY):
    """Bias and variance of ``kernel(N, M)`` for independent ``Poi(np)``, ``Poi(nq)``."""
    kx, wx = poisson_weights(n * p, policy)
    ky, wy = poisson_weights(n * q, policy)
    X, Y = np.meshgrid(kx, ky, indexing="ij")
    vals = np.asarray(kernel(X, Y), dtype=float).ravel()
    return _bias_var(vals, np.outer(wx, wy).ravel(), target)


def indicator_probability(event: Callable, lam: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``P(event(N))`` from the truncated series plus the certified tail (worst case)."""
    k, w = poisson_weights(lam, policy)
    return float(math.fsum(np.where(event(k), w, 0.0))) + policy.tail_tol


def brute_force_risk(P: Distribution, Q: Distribution, n: float, estimator: Callable,
                     policy: TruncationPolicy = DEFAULT_POLICY, two_sample: bool = False,
                     max_outcomes: int = 10**6) -> float:
    """Exact MSE of a deterministic estimator against ``L1(P, Q)`` by enumeration.

    ``estimator`` receives a :class:`CountVector` (and a second one for
    ``two_sample``, drawn from ``Q``). Every joint outcome in the product of
    per-symbol truncation ranges is visited, so clipped estimators are
    handled correctly; hence the size limits.
    """
    if len(P) != len(Q):
        raise ValueError("distributions have different support sizes")
    if len(P) > 3:
        raise ValueError("brute force is limited to S <= 3")
    rates = list(n * P.probs) + (list(n * Q.probs) if two_sample else [])
    axes = [poisson_weights(lam, policy) for lam in rates]
    total = math.prod(k.size for k, _ in axes)
    if total > max_outcomes:
        raise ValueError(f"{total} joint outcomes exceeds {max_outcomes}")
    truth = l1_exact(P, Q)
    S = len(P)
    acc = []
    for combo in itertools.product(*(range(k.size) for k, _ in axes)):
        weight = math.prod(axes[a][1][i] for a, i in enumerate(combo))
        if weight == 0.0:
            continue
        counts = np.array(combo)
        if two_sample:
            est = estimator(CountVector(counts[:S], n), CountVector(counts[S:], n))
        else:
            est = estimator(CountVector(counts, n))
        acc.append(weight * (est - truth) ** 2)
    return math.fsum(acc)
