"""Plug-in and polynomial-approximation estimators of ``L1(P, Q)``.

Both optimal estimators classify each symbol with one half of the sample
and estimate with the other. Smooth symbols use the plug-in difference;
symbols near the non-analytic set of ``|p - q|`` use an unbiased estimate
of a polynomial approximant instead.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .approx import BivarPolyCoeffs, PolyCoeffs, best_abs_poly, build_h2k, remez_best_approx_family
from .prob import CountVector, Distribution, split_counts
from .unbiased import (DEGREE_CAP, DegreeCapError, a_hat, unbiased_from_bivar,
                       unbiased_from_poly_rows)

# c3 / c1 must stay below 8 / (sqrt(2) + 1)**2 - 1 for the two-sample construction
C3_C1_LIMIT = 8.0 / (math.sqrt(2.0) + 1.0) ** 2 - 1.0


@dataclass(frozen=True)
class EstimatorConfig:
    c1: float = 2.0
    c2: float = 0.3
    c3: float = 0.6
    split_mode: str = "thinning"
    clip: tuple = (0.0, 2.0)
    degree_cap: int = DEGREE_CAP
    seed: int = 0

    def __post_init__(self):
        if not self.c1 > self.c3 > self.c2 > 0:
            raise ValueError("constants must satisfy c1 > c3 > c2 > 0")
        if self.split_mode not in ("thinning", "reuse"):
            raise ValueError("split_mode must be 'thinning' or 'reuse'")
        object.__setattr__(self, "clip", tuple(float(c) for c in self.clip))

    def degree(self, n: float) -> int:
        """``K(n) = max(1, floor(c2 ln n))``."""
        K = max(1, math.floor(self.c2 * math.log(n)))
        if K > self.degree_cap:
            raise DegreeCapError(f"K = {K} exceeds the degree cap {self.degree_cap}")
        return K

    def to_json(self) -> dict:
        d = asdict(self)
        d["clip"] = list(self.clip)
        return d


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError("interval needs lo <= hi")

    def __contains__(self, x):
        return self.lo <= x <= self.hi


class Regime(str, Enum):
    ABOVE = "above"
    BELOW = "below"
    SQUARE = "nonsmooth_square"
    STRIPE = "nonsmooth_stripe"
    INSIDE = "nonsmooth"  # known-Q: the single non-smooth case


@dataclass
class Estimate:
    value: float
    unclipped: float
    labels: np.ndarray
    K: int
    rate: float
    contributions: np.ndarray = field(repr=False)

    def histogram(self) -> dict:
        names, counts = np.unique(self.labels, return_counts=True)
        return {str(k): int(v) for k, v in zip(names, counts)}


def _log_ratio(n: float) -> float:
    if not n > 1:
        raise ValueError("the regime geometry needs n > 1")
    return math.log(n) / n


def region_u(q: float, n: float, c1: float) -> Interval:
    """``[0, 2 c1 ln n / n]`` for ``q <= c1 ln n / n``, else ``q -/+ sqrt(c1 q ln n / n)``."""
    l = _log_ratio(n)
    if q <= c1 * l:
        return Interval(0.0, 2 * c1 * l)
    w = math.sqrt(c1 * q * l)
    return Interval(q - w, q + w)


def region_u1(q: float, n: float, c1: float, c3: float) -> Interval:
    """Inner region: ``[0, (c1 + c3) ln n / n]`` or ``q -/+ sqrt(c3 q ln n / n)``."""
    l = _log_ratio(n)
    if q <= c1 * l:
        return Interval(0.0, (c1 + c3) * l)
    w = math.sqrt(c3 * q * l)
    return Interval(q - w, q + w)


def clip(value: float, cfg: EstimatorConfig = EstimatorConfig()) -> float:
    lo, hi = cfg.clip
    return min(max(value, lo), hi)


def _total(contributions) -> float:
    # exactly rounded, so independent of order and of appended zeros
    return math.fsum(contributions.tolist())


def _halves(X: CountVector, cfg: EstimatorConfig, rng):
    if cfg.split_mode == "reuse":
        return X, X
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    s = split_counts(X, rng)
    return s.first, s.second


# -- plug-in ------------------------------------------------------------------


def mle_known_q(X: CountVector, Q: Distribution) -> float:
    if len(X) != len(Q):
        raise ValueError("count vector and Q have different lengths")
    return float(np.sum(np.abs(X.empirical - Q.probs)))


def mle_unknown_q(X: CountVector, Y: CountVector) -> float:
    if len(X) != len(Y):
        raise ValueError("count vectors have different lengths")
    return float(np.sum(np.abs(X.empirical - Y.empirical)))


# -- known Q ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _abs_poly(K: int) -> PolyCoeffs:
    return best_abs_poly(K)


# small-q Remez solutions, keyed by (n, c1, K) and then q
_SMALL_Q: dict = {}
_SMALL_Q_LIMIT = 200_000


def _small_q_polys(qs, n: float, c1: float, K: int) -> list:
    table = _SMALL_Q.setdefault((n, c1, K), {})
    missing = sorted({float(q) for q in qs if float(q) not in table})
    if missing:
        if sum(len(t) for t in _SMALL_Q.values()) + len(missing) > _SMALL_Q_LIMIT:
            _SMALL_Q.clear()
            table = _SMALL_Q.setdefault((n, c1, K), {})
        delta = c1 * math.log(n) / n
        if missing[0] == 0.0:
            # |x| is x on the domain; centered at 0 so the kernel is exactly zero at count 0
            coeffs = np.zeros(K + 1)
            coeffs[1] = delta
            table[0.0] = PolyCoeffs(coeffs, (0.0, 2 * delta), 0.0, delta, 0.0)
            missing = missing[1:]
        if missing:
            polys = remez_best_approx_family(lambda x, q: np.abs(x - q), missing, (0.0, 2 * delta), K)
            table.update(zip(missing, polys))
    return [table[float(q)] for q in qs]


def _pk_known_q(q: float, n: float, c1: float, K: int) -> PolyCoeffs:
    delta = c1 * math.log(n) / n
    if q <= delta:
        return _small_q_polys([q], n, c1, K)[0]
    R = _abs_poly(K)
    s = math.sqrt(q * delta)
    return PolyCoeffs(R.coeffs * s, (q - s, q + s), q, s, R.sup_error * s)


def pk_known_q(q: float, n: float, cfg: EstimatorConfig = EstimatorConfig()) -> PolyCoeffs:
    """Approximant of ``|x - q|`` on ``U(q; c1)``.

    Small ``q``: Remez on ``[0, 2 Delta]``. Large ``q``: ``R_K`` scaled to
    ``q -/+ sqrt(q Delta)``, i.e. ``sum r_j sqrt(q Delta)**(1-j) (x - q)**j``.
    Here ``Delta = c1 ln n / n``.
    """
    if not 0 <= q <= 1:
        raise ValueError("q must lie in [0, 1]")
    _log_ratio(n)
    return _pk_known_q(float(q), float(n), cfg.c1, cfg.degree(n))


def estimate_known_q_detail(X: CountVector, Q: Distribution, cfg: EstimatorConfig = EstimatorConfig(),
                            rng=None) -> Estimate:
    if len(X) != len(Q):
        raise ValueError("count vector and Q have different lengths")
    first, second = _halves(X, cfg, rng)
    n = first.rate_n
    if n <= 1 or X.rate_n < 3:
        raise ValueError("n too small for the regime geometry")
    K = cfg.degree(n)
    q = Q.probs
    p1, p2 = first.empirical, second.empirical
    l = math.log(n) / n
    small = q <= cfg.c1 * l
    w = np.sqrt(cfg.c3 * q * l)
    lo = np.where(small, 0.0, q - w)
    hi = np.where(small, (cfg.c1 + cfg.c3) * l, q + w)
    above, below = p1 > hi, p1 < lo
    inside = ~(above | below)
    contrib = np.where(above, p2 - q, np.where(below, q - p2, 0.0))
    idx = np.flatnonzero(inside)
    if idx.size:
        qs, inv = np.unique(q[idx], return_inverse=True)
        # solve all small-q approximants in one batch, then evaluate row-wise
        _small_q_polys(qs[qs <= cfg.c1 * l], float(n), cfg.c1, K)
        polys = [_pk_known_q(float(qv), float(n), cfg.c1, K) for qv in qs]
        coeffs = np.array([p.coeffs for p in polys])[inv]
        centers = np.array([p.center for p in polys])[inv]
        scales = np.array([p.scale for p in polys])[inv]
        contrib[idx] = unbiased_from_poly_rows(coeffs, centers, scales, second.counts[idx], n, cfg.degree_cap)
    labels = np.where(above, Regime.ABOVE.value, np.where(below, Regime.BELOW.value, Regime.INSIDE.value))
    raw = _total(contrib)
    return Estimate(clip(raw, cfg), raw, labels, K, n, contrib)


def estimate_known_q(X: CountVector, Q: Distribution, cfg: EstimatorConfig = EstimatorConfig(),
                     rng=None) -> float:
    """Construction for known ``Q``, clipped to ``cfg.clip``."""
    return estimate_known_q_detail(X, Q, cfg, rng).value


# -- unknown Q ----------------------------------------------------------------


def stripe_membership(p_hat, q_hat, n: float, c1: float, c3: float):
    """Membership in ``|p - q| <= sqrt((c1 + c3) ln n / n) (sqrt p + sqrt q)``."""
    p_hat, q_hat = np.asarray(p_hat, dtype=float), np.asarray(q_hat, dtype=float)
    thr = math.sqrt((c1 + c3) * _log_ratio(n)) * (np.sqrt(p_hat) + np.sqrt(q_hat))
    return np.abs(p_hat - q_hat) <= thr


def regime_indicators(p1, q1, n: float, cfg: EstimatorConfig = EstimatorConfig()) -> dict:
    """The four case conditions, each evaluated on its own."""
    p1, q1 = np.asarray(p1, dtype=float), np.asarray(q1, dtype=float)
    l = _log_ratio(n)
    thr = math.sqrt((cfg.c1 + cfg.c3) * l) * (np.sqrt(p1) + np.sqrt(q1))
    d, s = p1 - q1, p1 + q1
    in_u1 = stripe_membership(p1, q1, n, cfg.c1, cfg.c3)
    return {
        Regime.ABOVE: d > thr,
        Regime.BELOW: d < -thr,
        Regime.SQUARE: s < cfg.c1 * l,
        Regime.STRIPE: in_u1 & (s >= cfg.c1 * l),
    }


def classify_2d(p1, q1, n: float, cfg: EstimatorConfig = EstimatorConfig()) -> np.ndarray:
    """Regime label per symbol from the first-half empirical probabilities."""
    ind = regime_indicators(p1, q1, n, cfg)
    out = np.full(np.shape(ind[Regime.ABOVE]), Regime.STRIPE.value, dtype=object)
    out[ind[Regime.SQUARE]] = Regime.SQUARE.value
    out[ind[Regime.BELOW]] = Regime.BELOW.value
    out[ind[Regime.ABOVE]] = Regime.ABOVE.value
    return out.astype(str)


def stripe_width(p1: float, q1: float, n: float, c1: float) -> float:
    """``W = sqrt(8 c1 ln n / n) sqrt(max(p1 + q1, 1/n))``."""
    return math.sqrt(8 * c1 * _log_ratio(n)) * math.sqrt(max(p1 + q1, 1.0 / n))


def pk2_stripe(p1: float, q1: float, n: float, cfg: EstimatorConfig = EstimatorConfig()) -> PolyCoeffs:
    """``sum_j r_j W**(1-j) t**j`` in ``t = x - y`` on ``[-W, W]``."""
    K = cfg.degree(n)
    R = _abs_poly(K)
    W = stripe_width(p1, q1, n, cfg.c1)
    return PolyCoeffs(R.coeffs * W, (-W, W), 0.0, W, R.sup_error * W)


@lru_cache(maxsize=64)
def _square_poly(K: int, L: float) -> BivarPolyCoeffs:
    return build_h2k(K, L)


def square_poly(n: float, cfg: EstimatorConfig = EstimatorConfig()) -> BivarPolyCoeffs:
    """``h_2K`` rescaled to ``[0, 2 c1 ln n / n]^2``."""
    return _square_poly(cfg.degree(n), 2 * cfg.c1 * _log_ratio(n))


def _stripe_contrib(x2, y2, W, n, K):
    r = _abs_poly(K).coeffs
    out = np.zeros(np.shape(W))
    terms = [r[j] * W ** (1 - j) * a_hat(x2, y2, n, j) for j in range(K + 1) if r[j] != 0.0]
    for t in terms:
        out = out + t
    return out


def estimate_unknown_q_detail(X: CountVector, Y: CountVector, cfg: EstimatorConfig = EstimatorConfig(),
                              rng=None, stripe: str = "polynomial") -> Estimate:
    """Four-case construction; ``stripe="plugin"`` gives the origin-only variant."""
    if len(X) != len(Y):
        raise ValueError("count vectors have different lengths")
    if X.rate_n != Y.rate_n:
        raise ValueError("both samples need the same rate")
    if not C3_C1_LIMIT > cfg.c3 / cfg.c1:
        raise ValueError(f"c3 / c1 must be below {C3_C1_LIMIT:.4f}")
    if rng is None and cfg.split_mode == "thinning":
        rng = np.random.default_rng(cfg.seed)
    x1, x2 = _halves(X, cfg, rng)
    y1, y2 = _halves(Y, cfg, rng)
    n = x1.rate_n
    if n <= 1 or X.rate_n < 3:
        raise ValueError("n too small for the regime geometry")
    K = cfg.degree(n)
    p1, q1 = x1.empirical, y1.empirical
    p2, q2 = x2.empirical, y2.empirical
    labels = classify_2d(p1, q1, n, cfg)
    contrib = np.zeros(len(X))
    m = labels == Regime.ABOVE.value
    contrib[m] = p2[m] - q2[m]
    m = labels == Regime.BELOW.value
    contrib[m] = q2[m] - p2[m]
    m = labels == Regime.SQUARE.value
    if m.any():
        h = square_poly(n, cfg)
        contrib[m] = unbiased_from_bivar(h, x2.counts[m], y2.counts[m], n, cfg.degree_cap)
    m = labels == Regime.STRIPE.value
    if m.any():
        if stripe == "plugin":
            contrib[m] = np.abs(p2[m] - q2[m])
        else:
            W = math.sqrt(8 * cfg.c1 * math.log(n) / n) * np.sqrt(np.maximum(p1[m] + q1[m], 1.0 / n))
            contrib[m] = _stripe_contrib(x2.counts[m], y2.counts[m], W, n, K)
    raw = _total(contrib)
    return Estimate(clip(raw, cfg), raw, labels, K, n, contrib)


def estimate_unknown_q(X: CountVector, Y: CountVector, cfg: EstimatorConfig = EstimatorConfig(),
                       rng=None) -> float:
    """Construction for unknown ``Q``, clipped to ``cfg.clip``."""
    return estimate_unknown_q_detail(X, Y, cfg, rng).value


def estimate_origin_only(X: CountVector, Y: CountVector, cfg: EstimatorConfig = EstimatorConfig(),
                         rng=None) -> float:
    """Unknown-``Q`` estimator that uses the plug-in outside the origin square."""
    return estimate_unknown_q_detail(X, Y, cfg, rng, stripe="plugin").value
