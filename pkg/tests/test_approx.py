import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from l1dist.approx import (BivarPolyCoeffs, PolyCoeffs, RemezError, approx_error_sup, best_abs_poly, build_h2k,
                           cheb_filtered_2d, coeff_bound_check, remez_best_approx, remez_best_approx_family,
                           sqrt_sum_poly, vallee_poussin_window)

GRID = np.linspace(0.0, 1.0, 101)
SX, SY = np.meshgrid(GRID, GRID, indexing="ij")


def _residual_extrema(poly, f):
    x = poly.ref_points
    return f(x) - poly(x)


def test_abs_degree_one_is_constant_half():
    p = remez_best_approx(np.abs, (-1, 1), 1)
    assert np.allclose(p.monomial(), [0.5, 0.0], atol=1e-12)
    assert p.sup_error == pytest.approx(0.5, abs=1e-12)


def test_abs_degree_two():
    p = remez_best_approx(np.abs, (-1, 1), 2)
    assert np.allclose(p.monomial(), [1 / 8, 0, 1], atol=1e-10)
    assert p.sup_error == pytest.approx(1 / 8, abs=1e-10)


def test_polynomial_input_is_reproduced():
    f = lambda x: 3 * x**3 - x + 0.25
    p = remez_best_approx(f, (-2, 1), 3)
    x = np.linspace(-2, 1, 1001)
    assert np.max(np.abs(p(x) - f(x))) <= 1e-12
    assert p.sup_error <= 1e-12


@pytest.mark.parametrize("K", [3, 6, 10])
@pytest.mark.parametrize("f", [lambda x: np.abs(x - 0.3), np.sqrt, lambda x: np.abs(np.sin(6 * x))])
def test_equioscillation(K, f):
    p = remez_best_approx(f, (0, 1), K)
    e = _residual_extrema(p, f)
    assert e.size == K + 2
    assert np.all(np.sign(e[1:]) == -np.sign(e[:-1]))
    assert np.ptp(np.abs(e)) / np.max(np.abs(e)) <= 1e-10


def test_error_non_increasing_in_degree():
    f = lambda x: np.abs(x - 0.3)
    errs = [remez_best_approx(f, (0, 1), K).sup_error for K in range(1, 12)]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(errs, errs[1:]))


def test_smooth_target_converges_near_rounding():
    p = remez_best_approx(np.exp, (0, 2), 10)
    x = np.linspace(0, 2, 2001)
    assert np.max(np.abs(p(x) - np.exp(x))) <= 1.01 * p.sup_error + 1e-14


def test_affine_invariance():
    f = lambda x: np.sqrt(x + 1)
    a, b = 2.0, 5.0
    p = remez_best_approx(f, (a, b), 5)
    q = remez_best_approx(lambda u: f((a + b) / 2 + (b - a) / 2 * u), (-1, 1), 5)
    assert np.allclose(p.coeffs, q.coeffs, atol=1e-10)


def test_remez_errors():
    with pytest.raises(ValueError):
        remez_best_approx(lambda x: np.full_like(x, np.nan), (0, 1), 2)
    with pytest.raises(ValueError):
        remez_best_approx(np.abs, (0, 1), -1)
    with pytest.raises(RemezError):
        remez_best_approx(np.sqrt, (0, 1), 8, max_iter=1)


def test_degenerate_domain_returns_constant():
    p = remez_best_approx(np.exp, (1.0, 1.0), 3)
    assert p.degree == 0 and p(1.0) == pytest.approx(np.e)


def test_family_matches_single_solves():
    qs = np.array([0.0, 0.01, 0.02, 0.035])
    fam = remez_best_approx_family(lambda x, q: np.abs(x - q), qs, (0, 0.05), 3)
    for q, p in zip(qs, fam):
        single = remez_best_approx(lambda x: np.abs(x - q), (0, 0.05), 3)
        assert np.allclose(p.coeffs, single.coeffs, atol=1e-15)
        assert p.sup_error == pytest.approx(single.sup_error, rel=1e-12)


def test_best_abs_poly_structure():
    r = best_abs_poly(2)
    assert np.allclose(r.coeffs, [1 / 8, 0, 1], atol=1e-10)
    for K in (5, 9, 12):
        assert np.all(best_abs_poly(K).coeffs[1::2] == 0.0)
    with pytest.raises(ValueError):
        best_abs_poly(0)


@pytest.mark.parametrize("K", [10, 20, 35, 60])
def test_bernstein_band(K):
    assert 0.24 <= K * best_abs_poly(K).sup_error <= 0.34


def test_bernstein_constant_at_50():
    assert abs(50 * best_abs_poly(50).sup_error / 0.2802 - 1) < 0.05


def test_window_passes_low_degrees():
    w = vallee_poussin_window(8)
    assert np.all(w[:5] == 1.0) and w[-1] > 0 and np.all(np.diff(w) <= 0)


@pytest.mark.parametrize("K", [1, 3, 8])
def test_filtered_reproduces_linear(K):
    h = cheb_filtered_2d(lambda x, y: x + y, K)
    assert np.max(np.abs(h.unit(SX, SY) - (SX + SY))) <= 1e-12


@pytest.mark.parametrize("f", [lambda x, y: np.sqrt(x) + np.sqrt(y), lambda x, y: np.abs(np.sqrt(x) - np.sqrt(y))])
def test_filtered_rate_is_one_over_k(f):
    g = np.linspace(0, 1, 257)
    X, Y = np.meshgrid(g, g, indexing="ij")
    C = [K * np.max(np.abs(cheb_filtered_2d(f, K, True).unit(X, Y) - f(X, Y))) for K in (8, 16, 32)]
    assert max(C) / min(C) <= 1.5


def test_sqrt_sum_factor():
    g = sqrt_sum_poly(8)
    assert approx_error_sup(g, np.sqrt, 4097).sup_error == pytest.approx(g.sup_error, rel=1e-6)


def test_h2k_origin_and_symmetry():
    for K, L in ((2, 1.0), (5, 0.03), (8, 2.0)):
        h = build_h2k(K, L)
        assert h(0.0, 0.0) == 0.0
        assert h.coeffs[0, 0] == 0.0
        X, Y = SX * L, SY * L
        assert np.max(np.abs(h(X, Y) - h(Y, X))) <= 1e-12 * L
        assert h.degree == 2 * K


def test_h2k_corner_relative_error():
    L = 0.5
    h = build_h2k(8, L)
    # |h - |x-y|| <= C sqrt(L) sqrt(L) / K at (L, 0)
    assert abs(h(L, 0.0) - L) <= 1.0 * L / 8


def test_h2k_normalized_error_stable():
    consts = []
    for K in (4, 8, 16):
        h = build_h2k(K)
        err = np.abs(h(SX, SY) - np.abs(SX - SY))
        consts.append(np.max(err / ((np.sqrt(SX) + np.sqrt(SY)) / K + 1 / K**2)))
    assert max(consts) / min(consts) < 2


def test_h2k_errors():
    with pytest.raises(ValueError):
        build_h2k(0)
    with pytest.raises(ValueError):
        build_h2k(3, 0.0)


def test_approx_error_sup():
    p = PolyCoeffs(np.array([1.0, 2.0, 3.0]), (0, 1))
    assert approx_error_sup(p, lambda x: 1 + 2 * x + 3 * x**2, 50).sup_error <= 1e-12
    assert approx_error_sup(best_abs_poly(2), np.abs, 10**5).sup_error == pytest.approx(0.125, abs=1e-6)
    with pytest.raises(ValueError):
        approx_error_sup(p, np.abs, 1)


@given(st.integers(2, 500), st.integers(2, 500))
def test_approx_error_sup_monotone(a, b):
    lo, hi = sorted((a, b))
    r = best_abs_poly(6)
    assert approx_error_sup(r, np.abs, lo).sup_error <= approx_error_sup(r, np.abs, hi).sup_error


def test_coeff_bound_check():
    assert coeff_bound_check(PolyCoeffs(np.array([0.7]), (-1, 1)), 0.7)
    r = best_abs_poly(8)
    assert coeff_bound_check(r, 1 + r.sup_error)
    bad = PolyCoeffs(r.coeffs * np.where(np.arange(9) == 4, 1e9, 1.0), (-1, 1))
    res = coeff_bound_check(bad, 1 + r.sup_error)
    assert not res and res.index == (4,)
    p = remez_best_approx(lambda x: np.abs(x - 0.01), (0, 0.05), 4)
    assert coeff_bound_check(p, 0.05)
    h = build_h2k(4)
    assert coeff_bound_check(h, 2.0)


def test_json_round_trip():
    p = remez_best_approx(np.sqrt, (0, 1), 4)
    q = PolyCoeffs.from_json(json.loads(json.dumps(p.to_json())))
    assert np.array_equal(p.coeffs, q.coeffs) and q.domain == p.domain
    h = build_h2k(3, 0.2)
    g = BivarPolyCoeffs.from_json(json.loads(json.dumps(h.to_json())))
    assert np.array_equal(g.coeffs, h.coeffs) and g(0.1, 0.05) == h(0.1, 0.05)


def test_poly_validation():
    with pytest.raises(ValueError):
        PolyCoeffs(np.array([1.0]), (1, 0))
    with pytest.raises(ValueError):
        PolyCoeffs(np.array([1.0]), (0, 1), scale=0)
    with pytest.raises(ValueError):
        PolyCoeffs(np.array([np.inf]), (0, 1))
    with pytest.raises(ValueError):
        BivarPolyCoeffs(np.ones((2, 3)))
