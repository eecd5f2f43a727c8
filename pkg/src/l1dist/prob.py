"""Probability vectors, Poissonized / multinomial sampling and sample splitting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Distribution:
    """A probability vector over ``S`` symbols."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("a distribution needs at least one symbol")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise ValueError("probabilities must be finite and non-negative")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def support_size(self) -> int:
        return self.probs.size

    def __len__(self):
        return self.probs.size


@dataclass(frozen=True)
class CountVector:
    """Per-symbol counts with the nominal sample-size parameter ``rate_n``.

    ``rate_n`` is real so that the halves produced by :func:`split_counts`
    share this type; ``counts / rate_n`` is the empirical distribution and
    may exceed one under Poissonization.
    """

    counts: np.ndarray
    rate_n: float

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 1:
            raise ValueError("counts must be one-dimensional")
        if counts.size and (not np.issubdtype(counts.dtype, np.integer)):
            as_int = counts.astype(np.int64)
            if not np.array_equal(as_int, counts):
                raise ValueError("counts must be integers")
            counts = as_int
        counts = counts.astype(np.int64)
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        if not (np.isfinite(self.rate_n) and self.rate_n > 0):
            raise ValueError("rate_n must be positive")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "rate_n", float(self.rate_n))

    @property
    def empirical(self) -> np.ndarray:
        return self.counts / self.rate_n

    def __len__(self):
        return self.counts.size


@dataclass(frozen=True)
class SplitCounts:
    first: CountVector
    second: CountVector

    @property
    def halved_rate(self) -> float:
        return self.first.rate_n


def make_distribution(weights) -> Distribution:
    """Normalize non-negative ``weights`` into a :class:`Distribution`."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a non-empty vector")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    total = w.sum()
    if total <= 0:
        raise ValueError("at least one weight must be positive")
    return Distribution(w / total)


def uniform(S: int) -> Distribution:
    if S < 1:
        raise ValueError("S must be >= 1")
    return Distribution(np.full(S, 1.0 / S))


def zipf(S: int, exponent: float = 1.0) -> Distribution:
    if S < 1 or not exponent > 0:
        raise ValueError("need S >= 1 and exponent > 0")
    return make_distribution(np.arange(1, S + 1, dtype=float) ** -exponent)


def point_mass_mix(S: int, gamma: float) -> Distribution:
    """Mass ``gamma`` on symbol 0, the rest spread uniformly over all ``S``."""
    if S < 1 or not 0 <= gamma <= 1:
        raise ValueError("need S >= 1 and 0 <= gamma <= 1")
    w = np.full(S, (1.0 - gamma) / S)
    w[0] += gamma
    return make_distribution(w)


def near(Q: Distribution, delta: float) -> Distribution:
    """A distribution at L1 distance exactly ``delta`` from ``Q``.

    Moves ``delta/2`` of mass from the largest entry of ``Q`` onto the
    smallest other one. Needs ``S >= 2`` and a largest entry of at least
    ``delta/2``.
    """
    if not 0 <= delta <= 2:
        raise ValueError("delta must lie in [0, 2]")
    q = Q.probs.copy()
    if delta == 0:
        return Distribution(q)
    hi = int(np.argmax(q))
    rest = np.delete(np.arange(q.size), hi)
    if rest.size == 0 or q[hi] < delta / 2:
        raise ValueError(f"cannot move {delta / 2} mass within this Q")
    lo = int(rest[np.argmin(q[rest])])
    q[hi] -= delta / 2
    q[lo] += delta / 2
    return Distribution(q)


def family(kind: str, S: int, **params) -> Distribution:
    """Named fixture families: ``uniform``, ``zipf``, ``point_mass_mix``,
    ``hard_origin`` (the origin-only hard instance, see
    :func:`l1dist.harness.hard_origin_instance`)."""
    allowed = {"uniform": set(), "zipf": {"exponent"}, "point_mass_mix": {"gamma"}, "hard_origin": {"n", "c"}}
    if kind not in allowed:
        raise ValueError(f"unknown family {kind!r}")
    extra = set(params) - allowed[kind]
    if extra:
        raise ValueError(f"unknown parameters for {kind}: {sorted(extra)}")
    if kind == "uniform":
        return uniform(S)
    if kind == "zipf":
        return zipf(S, params.get("exponent", 1.0))
    if kind == "point_mass_mix":
        return point_mass_mix(S, params.get("gamma", 0.5))
    if kind == "hard_origin":
        from .harness import hard_origin_instance

        return hard_origin_instance(S, params["n"], params.get("c", 6.0))


def l1_exact(P: Distribution, Q: Distribution) -> float:
    if len(P) != len(Q):
        raise ValueError("distributions have different support sizes")
    return float(np.sum(np.abs(P.probs - Q.probs)))


def sample_poissonized(P: Distribution, n: float, rng: np.random.Generator) -> CountVector:
    if not n > 0:
        raise ValueError("n must be positive")
    return CountVector(rng.poisson(n * P.probs), n)


def sample_multinomial(P: Distribution, n: int, rng: np.random.Generator) -> CountVector:
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    # multinomial rejects sums slightly above one
    p = P.probs / P.probs.sum()
    return CountVector(rng.multinomial(int(n), p), n)


def split_counts(X: CountVector, rng: np.random.Generator) -> SplitCounts:
    """Thin every count with independent fair coins.

    For Poissonized input the two halves are independent
    ``Poisson(n p_i / 2)`` vectors, each carrying ``rate_n = n / 2``.
    """
    first = rng.binomial(X.counts, 0.5)
    second = X.counts - first
    half = X.rate_n / 2
    return SplitCounts(CountVector(first, half), CountVector(second, half))
