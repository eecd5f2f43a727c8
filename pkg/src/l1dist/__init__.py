"""Estimators of the L1 distance between discrete distributions."""

from .approx import BivarPolyCoeffs, PolyCoeffs, best_abs_poly, build_h2k, remez_best_approx
from .estimators import (EstimatorConfig, estimate_known_q, estimate_unknown_q, mle_known_q,
                         mle_unknown_q)
from .prob import CountVector, Distribution, l1_exact, sample_poissonized, split_counts

__all__ = [
    "BivarPolyCoeffs", "CountVector", "Distribution", "EstimatorConfig", "PolyCoeffs",
    "best_abs_poly", "build_h2k", "estimate_known_q", "estimate_unknown_q", "l1_exact",
    "mle_known_q", "mle_unknown_q", "remez_best_approx", "sample_poissonized", "split_counts",
]
