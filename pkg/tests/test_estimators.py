import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from l1dist import oracle
from l1dist.estimators import (C3_C1_LIMIT, EstimatorConfig, Interval, Regime, classify_2d, clip,
                               estimate_known_q, estimate_known_q_detail, estimate_origin_only, estimate_unknown_q,
                               estimate_unknown_q_detail, mle_known_q, mle_unknown_q, pk2_stripe, pk_known_q,
                               region_u, region_u1, regime_indicators, square_poly, stripe_membership)
from l1dist.prob import CountVector, Distribution, make_distribution, sample_poissonized, uniform
from l1dist.unbiased import DegreeCapError

CFG = EstimatorConfig()
REUSE = EstimatorConfig(split_mode="reuse")

count_lists = st.lists(st.integers(0, 30), min_size=1, max_size=25)


def test_config_validation():
    with pytest.raises(ValueError):
        EstimatorConfig(c1=1.0, c3=2.0)
    with pytest.raises(ValueError):
        EstimatorConfig(c2=0.7, c3=0.6)
    with pytest.raises(ValueError):
        EstimatorConfig(split_mode="other")
    assert CFG.degree(500) == 1 and CFG.degree(10**4) == 2
    with pytest.raises(DegreeCapError):
        EstimatorConfig(degree_cap=1).degree(1e6)


def test_c3_ratio_enforced_for_unknown_q():
    assert C3_C1_LIMIT == pytest.approx(0.3726, abs=1e-4)
    X = CountVector(np.array([3, 1]), 10)
    with pytest.raises(ValueError):
        estimate_unknown_q(X, X, EstimatorConfig(c1=1.0, c3=0.5, c2=0.2))


def test_region_u_values():
    U = region_u(0.0, 100, 2.0)
    assert (U.lo, U.hi) == (0.0, pytest.approx(4 * math.log(100) / 100))
    U = region_u(0.5, 1e4, 2.0)
    assert U.lo == pytest.approx(0.5 - 0.030349, abs=1e-6) and U.hi == pytest.approx(0.5 + 0.030349, abs=1e-6)
    with pytest.raises(ValueError):
        region_u(0.1, 1.0, 2.0)


def test_region_boundary_is_left_closed():
    n, c1 = 1000.0, 2.0
    q = c1 * math.log(n) / n
    assert region_u(q, n, c1) == Interval(0.0, 2 * q)
    assert region_u(q * (1 + 1e-12), n, c1).lo > 0


def test_region_u1_values():
    U1 = region_u1(0.0, 100, 2.0, 0.6)
    assert U1.hi == pytest.approx(2.6 * math.log(100) / 100)
    caps = [region_u1(0.0, 100, 2.0, c3).hi for c3 in (0.1, 0.5, 1.0, 1.9)]
    assert caps == sorted(caps) and caps[-1] < region_u(0.0, 100, 2.0).hi


@pytest.mark.parametrize("n", [50.0, 1e3, 1e5])
def test_u1_inside_u(n):
    for q in np.linspace(0, 1, 1000):
        U, U1 = region_u(q, n, 2.0), region_u1(q, n, 2.0, 0.6)
        assert U.lo <= U1.lo and U1.hi <= U.hi


def test_interval_contains():
    assert 0.5 in Interval(0, 1) and 2 not in Interval(0, 1)
    with pytest.raises(ValueError):
        Interval(1, 0)


def test_mle_known_q():
    Q = uniform(4)
    assert mle_known_q(CountVector(np.zeros(4, dtype=int), 10), Q) == pytest.approx(1.0)
    assert mle_known_q(CountVector(np.array([2, 2, 2, 2]), 8), Q) == 0.0
    with pytest.raises(ValueError):
        mle_known_q(CountVector(np.zeros(3, dtype=int), 10), Q)


def test_mle_known_q_expectation_small_rate():
    # E|p_hat - p| = 2 p e^{-np} per symbol when np <= 1
    S, n = 50, 20.0
    Q = uniform(S)
    want = S * oracle.poisson_expectation(lambda k: np.abs(k / n - 1 / S), n / S)
    assert want == pytest.approx(S * 2 / S * math.exp(-n / S), rel=1e-12)
    rng = np.random.default_rng(0)
    est = [mle_known_q(sample_poissonized(Q, n, rng), Q) for _ in range(3000)]
    assert np.mean(est) == pytest.approx(want, abs=4 * np.std(est) / math.sqrt(3000))


def test_mle_unknown_q():
    X = CountVector(np.array([1, 2, 3]), 6)
    assert mle_unknown_q(X, X) == 0.0
    Y = CountVector(np.zeros(3, dtype=int), 6)
    assert mle_unknown_q(X, Y) == pytest.approx(1.0)


def test_mle_unknown_q_order_of_magnitude():
    # MSE ~ S/n for n >> S
    S, n = 1000, 1e5
    P = uniform(S)
    rng = np.random.default_rng(1)
    mse = np.mean([mle_unknown_q(sample_poissonized(P, n, rng), sample_poissonized(P, n, rng)) ** 2
                   for _ in range(30)])
    assert 0.1 * S / n <= mse <= 10 * S / n


def test_pk_known_q_large_branch_degree_two():
    cfg = EstimatorConfig(c2=0.3)
    n, q = 1e4, 0.5
    assert cfg.degree(n) == 2
    P = pk_known_q(q, n, cfg)
    s = math.sqrt(q * 2.0 * math.log(n) / n)
    x = np.linspace(q - s, q + s, 11)
    assert np.allclose(P(x), s / 8 + (x - q) ** 2 / s, rtol=1e-12)


def test_pk_known_q_zero_is_exact():
    n = 100.0
    P = pk_known_q(0.0, n, CFG)
    x = np.linspace(0, 4 * math.log(n) / n, 101)
    assert np.max(np.abs(P(x) - x)) <= 1e-14
    with pytest.raises(ValueError):
        pk_known_q(1.5, n, CFG)


@pytest.mark.parametrize("n", [1e3, 1e4, 1e5, 1e6])
def test_pk_known_q_error_scale(n):
    cfg = EstimatorConfig(c2=0.5, c3=0.6)
    K = cfg.degree(n)
    ratios = []
    for q in (1e-5, 1e-3, 0.05, 0.4):
        P = pk_known_q(q, n, cfg)
        U = region_u(q, n, cfg.c1)
        x = np.linspace(U.lo, U.hi, 2001)
        err = np.max(np.abs(P(x) - np.abs(x - q)))
        ratios.append(err / min(q, math.sqrt(q * math.log(n) / n) / K) if q else 0.0)
    assert max(ratios) <= 2.0


def test_clip():
    assert clip(-0.3) == 0.0 and clip(2.7) == 2.0 and clip(1.1) == 1.1


@given(count_lists, st.integers(0, 2**31))
def test_known_q_estimate_in_range(counts, seed):
    Q = make_distribution(np.arange(1, len(counts) + 1))
    X = CountVector(np.array(counts), 40)
    v = estimate_known_q(X, Q, CFG, np.random.default_rng(seed))
    assert 0.0 <= v <= 2.0


def test_known_q_all_smooth_reduces_to_plugin():
    Q = Distribution(np.array([0.5, 0.3, 0.2]))
    X = CountVector(np.array([4000, 100, 0]), 4000)
    d = estimate_known_q_detail(X, Q, REUSE)
    p2 = X.empirical
    want = (p2[0] - 0.5) + (0.3 - p2[1]) + (0.2 - p2[2])
    assert set(d.labels) == {Regime.ABOVE.value, Regime.BELOW.value}
    assert d.unclipped == pytest.approx(want)


def test_known_q_errors():
    with pytest.raises(ValueError):
        estimate_known_q(CountVector(np.array([1, 1]), 2), uniform(2), CFG)
    with pytest.raises(ValueError):
        estimate_known_q(CountVector(np.array([1]), 100), uniform(2), CFG)


def test_known_q_point_mass_consistency():
    P = Distribution(np.array([1.0]))
    rng = np.random.default_rng(2)
    est = [estimate_known_q(sample_poissonized(P, 1e4, rng), P, CFG, rng) for _ in range(200)]
    assert np.median(est) < 0.01


def test_stripe_membership():
    assert stripe_membership(0.3, 0.3, 100, 2.0, 0.6)
    assert not stripe_membership(0.9, 0.0, 1e4, 2.0, 0.6)


def test_classify_equal_points_not_above_or_below():
    for v in (0.0, 0.001, 0.5):
        lab = classify_2d(v, v, 200.0, CFG)
        assert lab in (Regime.SQUARE.value, Regime.STRIPE.value)


def test_classify_exactly_one_label_on_grid():
    g = np.linspace(0, 1, 200)
    P, Q = np.meshgrid(g, g, indexing="ij")
    for n in (20.0, 500.0, 1e5):
        ind = regime_indicators(P, Q, n, CFG)
        assert np.all(sum(v.astype(int) for v in ind.values()) == 1)


@given(st.floats(0, 1), st.floats(0, 1), st.sampled_from([10.0, 300.0, 1e4]))
def test_classify_swap(p, q, n):
    swap = {Regime.ABOVE.value: Regime.BELOW.value, Regime.BELOW.value: Regime.ABOVE.value}
    a, b = str(classify_2d(p, q, n, CFG)), str(classify_2d(q, p, n, CFG))
    assert swap.get(a, a) == b


def test_pk2_stripe_degree_two():
    cfg = EstimatorConfig(c2=0.3)
    n, p1, q1 = 1e4, 0.02, 0.03
    P = pk2_stripe(p1, q1, n, cfg)
    W = math.sqrt(8 * 2.0 * math.log(n) / n) * math.sqrt(p1 + q1)
    t = np.linspace(-W, W, 9)
    assert np.allclose(P(t), W / 8 + t**2 / W, rtol=1e-12)
    assert np.allclose(P(t), P(-t), rtol=0, atol=1e-15)


def test_pk2_stripe_width_floor():
    n = 1e4
    P = pk2_stripe(0.0, 0.0, n, CFG)
    assert P.scale == pytest.approx(math.sqrt(8 * 2.0 * math.log(n) / n) * math.sqrt(1 / n))


def test_stripe_width_covers_difference():
    # |p - q| <= W when (p, q) is in U and p + q <= 2 (p1 + q1)
    n, c1 = 1e4, 2.0
    rng = np.random.default_rng(3)
    for _ in range(2000):
        p, q = rng.uniform(0, 0.2, 2)
        if abs(p - q) > math.sqrt(2 * c1 * math.log(n) / n) * (math.sqrt(p) + math.sqrt(q)):
            continue
        s1 = (p + q) / 2 * rng.uniform(1, 3)
        assert abs(p - q) <= pk2_stripe(s1 / 2, s1 / 2, n, CFG).scale


def test_square_poly_vanishes_at_origin():
    h = square_poly(1e4, CFG)
    assert h(0.0, 0.0) == 0.0 and h.scale == pytest.approx(4 * math.log(1e4) / 1e4)


@given(count_lists, st.integers(0, 2**31))
def test_unknown_q_estimate_in_range(counts, seed):
    rng = np.random.default_rng(seed)
    X = CountVector(np.array(counts), 30)
    Y = CountVector(rng.permutation(np.array(counts)), 30)
    for cfg in (CFG, REUSE):
        assert 0.0 <= estimate_unknown_q(X, Y, cfg, np.random.default_rng(seed)) <= 2.0


@given(count_lists, count_lists, st.sampled_from([10.0, 100.0, 2000.0]))
def test_unknown_q_swap_symmetric_in_reuse(a, b, n):
    m = min(len(a), len(b))
    X, Y = CountVector(np.array(a[:m]), n), CountVector(np.array(b[:m]), n)
    assert abs(estimate_unknown_q_detail(X, Y, REUSE).unclipped
               - estimate_unknown_q_detail(Y, X, REUSE).unclipped) <= 1e-10


def test_unknown_q_identical_streams():
    X = CountVector(np.array([50, 20, 0, 3, 1]), 80)
    d = estimate_unknown_q_detail(X, X, REUSE)
    smooth = np.isin(d.labels, [Regime.ABOVE.value, Regime.BELOW.value])
    assert np.all(d.contributions[smooth] == 0.0)
    assert 0.0 <= d.value <= 2.0


@given(count_lists, st.integers(0, 40), st.integers(0, 2**31))
def test_zero_padding_leaves_estimates_unchanged(counts, extra, seed):
    x = np.array(counts)
    y = np.roll(x, 1)
    pad = np.zeros(extra, dtype=int)
    X, Y = CountVector(x, 60), CountVector(y, 60)
    Xp, Yp = CountVector(np.concatenate((x, pad)), 60), CountVector(np.concatenate((y, pad)), 60)
    assert estimate_unknown_q(X, Y, REUSE) == estimate_unknown_q(Xp, Yp, REUSE)
    assert estimate_origin_only(X, Y, REUSE) == estimate_origin_only(Xp, Yp, REUSE)
    # a zero count thins to zero and trailing zeros do not shift the leading coin flips
    assert estimate_unknown_q(X, Y, CFG, np.random.default_rng(seed)) == \
        estimate_unknown_q(Xp, Yp, CFG, np.random.default_rng(seed))


def test_zero_padding_known_q_unchanged():
    Q = uniform(4)
    Qp = Distribution(np.concatenate((Q.probs, np.zeros(3))))
    X = CountVector(np.array([2, 0, 1, 5]), 8)
    Xp = CountVector(np.concatenate((X.counts, np.zeros(3, dtype=int))), 8)
    assert mle_known_q(X, Q) == mle_known_q(Xp, Qp)
    for cfg in (CFG, REUSE):
        d = estimate_known_q_detail(Xp, Qp, cfg, np.random.default_rng(1))
        assert np.all(d.contributions[4:] == 0.0)
        assert estimate_known_q(X, Q, cfg, np.random.default_rng(1)) == d.value


def test_origin_only_matches_full_without_stripe_symbols():
    X = CountVector(np.array([0, 1, 0, 2, 0]), 1000)
    Y = CountVector(np.array([1, 0, 0, 0, 3]), 1000)
    d = estimate_unknown_q_detail(X, Y, REUSE)
    assert Regime.STRIPE.value not in set(d.labels)
    assert estimate_origin_only(X, Y, REUSE) == d.value


def test_unknown_q_errors():
    X = CountVector(np.array([1, 2]), 10)
    with pytest.raises(ValueError):
        estimate_unknown_q(X, CountVector(np.array([1, 2, 3]), 10))
    with pytest.raises(ValueError):
        estimate_unknown_q(X, CountVector(np.array([1, 2]), 11))
    with pytest.raises(ValueError):
        estimate_unknown_q(CountVector(np.array([1, 1]), 2), CountVector(np.array([1, 1]), 2))


def test_histogram_counts_symbols():
    P = uniform(300)
    rng = np.random.default_rng(4)
    d = estimate_unknown_q_detail(sample_poissonized(P, 1000, rng), sample_poissonized(P, 1000, rng), CFG, rng)
    assert sum(d.histogram().values()) == 300
