"""Unbiased estimators of polynomial functionals under Poisson sampling.

Every kernel takes raw counts (``n * p_hat ~ Poi(n p)``) and is vectorized
over numpy arrays of counts, so the oracle can evaluate it on whole
truncation grids at once.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .approx import BivarPolyCoeffs, PolyCoeffs

DEGREE_CAP = 30


class DegreeCapError(ValueError):
    pass


def _check_degree(j: int, cap: int):
    if j > cap:
        raise DegreeCapError(f"degree {j} exceeds cap {cap}")


def compensated_sum(terms) -> np.ndarray:
    """Neumaier-compensated sum over the first axis of ``terms``."""
    it = iter(terms)
    total = np.array(next(it), dtype=float)
    comp = np.zeros_like(total)
    for t in it:
        t = np.asarray(t, dtype=float)
        s = total + t
        big = np.abs(total) >= np.abs(t)
        comp += np.where(big, (total - s) + t, (t - s) + total)
        total = s
    return total + comp


def falling_factorials(count, n: float, r: int) -> list:
    """``[prod_{h<k} (count/n - h/n) for k in 0..r]``."""
    x = np.asarray(count, dtype=float)
    out = [np.ones_like(x)]
    for h in range(r):
        out.append(out[-1] * ((x - h) / n))
    return out


def falling_factorial_estimate(count, n: float, r: int):
    """Unbiased estimate of ``p**r``: ``prod_{h=0}^{r-1} (count - h) / n``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return falling_factorials(count, n, r)[r]


def g_shift(count, n: float, j: int, q: float):
    """Unbiased estimate of ``(p - q)**j``.

    ``sum_k C(j,k) (-q)**(j-k) prod_{h<k} (count/n - h/n)``.
    """
    if j < 0 or q < 0:
        raise ValueError("need j >= 0 and q >= 0")
    ff = falling_factorials(count, n, j)
    return compensated_sum(comb(j, k) * (-q) ** (j - k) * ff[k] for k in range(j + 1))


def g_shift_second_moment(p: float, q: float, n: float, j: int) -> float:
    """``E[g_shift**2]`` in closed form.

    Equals ``sum_k C(j,k)**2 (p-q)**(2(j-k)) p**k k! / n**k``, which is
    ``j! (p/n)**j L_j(-n (p-q)**2 / p)`` with ``L_j`` the Laguerre polynomial.
    """
    if p == 0:
        return q ** (2 * j)
    d2 = (p - q) ** 2
    fact = 1.0
    terms = []
    for k in range(j + 1):
        if k:
            fact *= k
        terms.append(comb(j, k) ** 2 * d2 ** (j - k) * (p / n) ** k * fact)
    return float(compensated_sum(terms))


def a_hat(count_x, count_y, n: float, j: int):
    """Two-sample unbiased estimate of ``(p - q)**j``.

    ``sum_k C(j,k) (-1)**(j-k) ff_k(X) ff_{j-k}(Y)`` with ``ff`` the falling
    factorial estimators of ``p**k`` and ``q**(j-k)``.
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    fx = falling_factorials(count_x, n, j)
    fy = falling_factorials(count_y, n, j)
    return compensated_sum(comb(j, k) * (-1) ** (j - k) * fx[k] * fy[j - k] for k in range(j + 1))


def a_hat_centered(count_x, count_y, n: float, j: int, r: float):
    """``a_hat`` expanded around ``r``: ``sum_k C(j,k) g_{k,r}(X) (-1)**(j-k) g_{j-k,r}(Y)``.

    Algebraically identical to :func:`a_hat` for every ``r >= 0``.
    """
    return compensated_sum(
        comb(j, k) * g_shift(count_x, n, k, r) * (-1) ** (j - k) * g_shift(count_y, n, j - k, r)
        for k in range(j + 1)
    )


def unbiased_from_poly(poly: PolyCoeffs, count, n: float, cap: int = DEGREE_CAP):
    """Unbiased estimate of ``poly(p)``.

    Each term ``a_j ((x - c) / s)**j`` becomes ``a_j s**-j g_shift(., j, c)``,
    expanded inline so any sign of ``c`` works.
    """
    _check_degree(poly.degree, cap)
    c, s = poly.center, poly.scale
    K = poly.degree
    ff = falling_factorials(count, n, K)
    terms = []
    for j, a in enumerate(poly.coeffs):
        if a == 0.0:
            continue
        # binomial expansion of (x - c)**j in falling factorials of x
        terms.extend(a * s ** (-j) * comb(j, k) * (-c) ** (j - k) * ff[k] for k in range(j + 1))
    if not terms:
        return np.zeros_like(np.asarray(count, dtype=float))
    return compensated_sum(terms)


def unbiased_from_poly_rows(coeffs, centers, scales, count, n: float, cap: int = DEGREE_CAP):
    """Row-wise :func:`unbiased_from_poly`: symbol ``i`` uses ``coeffs[i]``,
    ``centers[i]`` and ``scales[i]``."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
    K = coeffs.shape[1] - 1
    _check_degree(K, cap)
    c = np.asarray(centers, dtype=float)
    s = np.asarray(scales, dtype=float)
    ff = falling_factorials(count, n, K)
    terms = []
    for j in range(K + 1):
        a = coeffs[:, j] * s ** (-j)
        if not np.any(a):
            continue
        terms.extend(a * comb(j, k) * (-c) ** (j - k) * ff[k] for k in range(j + 1))
    if not terms:
        return np.zeros(coeffs.shape[0])
    return compensated_sum(terms)


def unbiased_from_bivar(bipoly: BivarPolyCoeffs, count_x, count_y, n: float, cap: int = DEGREE_CAP):
    """Unbiased estimate of ``bipoly(p, q)`` from independent Poisson counts.

    ``L h(x/L, y/L) = sum h_rs L**(1-r-s) x**r y**s``, and ``x**r y**s`` is
    replaced by the product of the two falling-factorial estimators.
    """
    D = bipoly.degree
    _check_degree(D, cap)
    L = bipoly.scale
    fx = falling_factorials(count_x, n, D)
    fy = falling_factorials(count_y, n, D)
    h = bipoly.coeffs
    terms = [h[r, s] * L ** (1 - r - s) * fx[r] * fy[s]
             for r in range(D + 1) for s in range(D + 1) if h[r, s] != 0.0]
    if not terms:
        return np.zeros(np.broadcast(np.asarray(count_x), np.asarray(count_y)).shape)
    return compensated_sum(terms)


def unbiased_from_difference_poly(poly: PolyCoeffs, count_x, count_y, n: float, cap: int = DEGREE_CAP):
    """Unbiased estimate of ``poly(p - q)`` for a polynomial centered at 0.

    Each ``a_j (t / s)**j`` becomes ``a_j s**-j a_hat(., ., j)``.
    """
    _check_degree(poly.degree, cap)
    if poly.center != 0.0:
        raise ValueError("difference polynomials must be centered at 0")
    s = poly.scale
    terms = [a * s ** (-j) * a_hat(count_x, count_y, n, j)
             for j, a in enumerate(poly.coeffs) if a != 0.0]
    if not terms:
        return np.zeros(np.broadcast(np.asarray(count_x), np.asarray(count_y)).shape)
    return compensated_sum(terms)
