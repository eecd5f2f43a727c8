"""Best uniform polynomial approximation.

Univariate best approximations come from a multi-point Remez exchange
solved in a Chebyshev basis on ``[-1, 1]`` and handed out as monomials in
the scaled variable ``u = (x - center) / scale``. Bivariate approximants
are lowpass-filtered tensor Chebyshev interpolants on the unit square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import Polynomial

SQRT2P1 = math.sqrt(2.0) + 1.0
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class RemezError(RuntimeError):
    pass


@dataclass(frozen=True)
class PolyCoeffs:
    """``P(x) = sum_j coeffs[j] * ((x - center) / scale) ** j`` on ``domain``.

    ``sup_error`` is the levelled (equioscillation) error when the
    polynomial came out of :func:`remez_best_approx`, and ``ref_points``
    the final reference in the ``x`` variable.
    """

    coeffs: np.ndarray
    domain: tuple
    center: float = 0.0
    scale: float = 1.0
    sup_error: Optional[float] = None
    ref_points: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        lo, hi = map(float, self.domain)
        if not lo <= hi:
            raise ValueError("domain needs lo <= hi")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "domain", (lo, hi))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x):
        u = (np.asarray(x, dtype=float) - self.center) / self.scale
        out = np.zeros_like(u)
        for a in self.coeffs[::-1]:
            out = out * u + a
        return out

    def monomial(self) -> np.ndarray:
        """Coefficients in plain powers of ``x``."""
        p = Polynomial(self.coeffs)(Polynomial([-self.center / self.scale, 1.0 / self.scale]))
        coef = np.zeros(self.coeffs.size)
        coef[: p.coef.size] = p.coef
        return coef

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "domain": list(self.domain),
            "center": self.center,
            "scale": self.scale,
            "coeffs": self.coeffs.tolist(),
            "sup_error": self.sup_error,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PolyCoeffs":
        return cls(np.asarray(obj["coeffs"]), tuple(obj["domain"]), obj["center"],
                   obj["scale"], obj.get("sup_error"))


@dataclass(frozen=True)
class BivarPolyCoeffs:
    """Bivariate polynomial on the square ``[0, L]^2``.

    The value at ``(x, y)`` is ``L * h(x / L, y / L)`` where ``h`` has the
    tensor Chebyshev coefficients ``cheb`` (in ``2s - 1`` per variable) and
    monomial coefficients ``coeffs[i, j]`` of ``s**i t**j`` on the unit
    square. With ``remove_origin`` the value of ``h`` at the origin is
    subtracted, which makes the polynomial vanish at ``(0, 0)`` exactly.
    """

    cheb: np.ndarray
    scale: float = 1.0
    remove_origin: bool = False
    coeffs: np.ndarray = field(init=False, repr=False)
    _origin: float = field(init=False, repr=False)

    def __post_init__(self):
        cheb = np.asarray(self.cheb, dtype=float)
        if cheb.ndim != 2 or cheb.shape[0] != cheb.shape[1]:
            raise ValueError("need a square coefficient matrix")
        if not np.all(np.isfinite(cheb)):
            raise ValueError("coefficients must be finite")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        cheb.setflags(write=False)
        object.__setattr__(self, "cheb", cheb)
        origin = float(C.chebval2d(-1.0, -1.0, cheb)) if self.remove_origin else 0.0
        object.__setattr__(self, "_origin", origin)
        A = _shifted_cheb_to_monomial(cheb.shape[0] - 1)
        mono = A @ cheb @ A.T
        if self.remove_origin:
            mono[0, 0] = 0.0
        mono.setflags(write=False)
        object.__setattr__(self, "coeffs", mono)

    @property
    def degree(self) -> int:
        return self.cheb.shape[0] - 1

    @property
    def domain(self) -> tuple:
        return (0.0, self.scale)

    def unit(self, s, t):
        """``h`` on the unit square."""
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        v = C.chebval2d(2.0 * s - 1.0, 2.0 * t - 1.0, self.cheb)
        return v - self._origin if self.remove_origin else v

    def __call__(self, x, y):
        L = self.scale
        return L * self.unit(np.asarray(x, dtype=float) / L, np.asarray(y, dtype=float) / L)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "domain": [[0.0, self.scale], [0.0, self.scale]],
            "center": 0.0,
            "scale": self.scale,
            "remove_origin": self.remove_origin,
            "coeffs": self.coeffs.tolist(),
            "cheb": self.cheb.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BivarPolyCoeffs":
        return cls(np.asarray(obj["cheb"]), obj["scale"], obj["remove_origin"])


@dataclass(frozen=True)
class ApproxReport:
    sup_error: float
    grid_resolution: int
    equioscillation_points: Optional[np.ndarray] = None


@dataclass(frozen=True)
class CoeffCheck:
    ok: bool
    index: Optional[tuple] = None
    ratio: float = 0.0

    def __bool__(self):
        return self.ok


def _cheb_to_monomial(degree: int) -> np.ndarray:
    """Column ``j`` holds the power coefficients of ``T_j``."""
    A = np.zeros((degree + 1, degree + 1))
    for j in range(degree + 1):
        c = C.cheb2poly(np.eye(degree + 1)[j])
        A[: c.size, j] = c
    return A


def _shifted_cheb_to_monomial(degree: int) -> np.ndarray:
    """Column ``j`` holds the power coefficients of ``T_j(2s - 1)``."""
    A = np.zeros((degree + 1, degree + 1))
    for j in range(degree + 1):
        c = C.Chebyshev.basis(j, domain=[0, 1]).convert(kind=Polynomial).coef
        A[: c.size, j] = c
    return A


# -- Remez ------------------------------------------------------------------


def _clenshaw(u, c):
    """Chebyshev series with coefficients on the last axis of ``c``, broadcast with ``u``."""
    b1 = np.zeros(np.broadcast_shapes(np.shape(u), c.shape[:-1]))
    b2 = np.zeros_like(b1)
    for j in range(c.shape[-1] - 1, 0, -1):
        b1, b2 = c[..., j] + 2.0 * u * b1 - b2, b1
    return c[..., 0] + u * b1 - b2


def _golden_max(g, a, b):
    """Vectorized golden-section maximization of ``g`` on brackets ``[a, b]``."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    width = float(np.max(b - a)) if a.size else 0.0
    iters = max(1, math.ceil(math.log(1e-16 / max(width, 1e-300)) / math.log(_GOLDEN))) if width > 1e-16 else 1
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    g1, g2 = g(x1), g(x2)
    for _ in range(iters):
        left = g1 >= g2
        a, b = np.where(left, a, x1), np.where(left, x2, b)
        new = np.where(left, b - _GOLDEN * (b - a), a + _GOLDEN * (b - a))
        gn = g(new)
        x1, x2 = np.where(left, new, x2), np.where(left, x1, new)
        g1, g2 = np.where(left, gn, g2), np.where(left, g1, gn)
    return np.where(g1 >= g2, x1, x2), np.maximum(g1, g2)


def _run_signs(eg):
    """Row-wise sign of ``eg``, zeros taking the sign of the next non-zero entry
    (or the previous one at the right end), so runs stay sign-alternating."""
    sign = np.sign(eg)
    if np.all(sign):
        return sign
    G = sign.shape[1]
    pos = np.broadcast_to(np.arange(G), sign.shape)
    nxt = np.minimum.accumulate(np.where(sign != 0, pos, G)[:, ::-1], axis=1)[:, ::-1]
    prv = np.maximum.accumulate(np.where(sign != 0, pos, -1), axis=1)
    src = np.where(nxt < G, nxt, np.maximum(prv, 0))
    out = np.take_along_axis(sign, src, axis=1)
    out[out == 0] = 1.0
    return out


def _grid_extrema(sign, eg):
    """Largest ``|eg|`` in each maximal constant-sign run of each row.

    Returns flat arrays over all runs: owning row, grid index of the
    extremum, and the run's first and last grid index.
    """
    b, G = sign.shape
    new_run = np.ones((b, G), dtype=bool)
    new_run[:, 1:] = sign[:, 1:] != sign[:, :-1]
    starts = np.flatnonzero(new_run.ravel())
    ends = np.append(starts[1:], b * G) - 1
    mag = np.abs(eg).ravel()
    run_max = np.maximum.reduceat(mag, starts)
    run_id = np.cumsum(new_run.ravel()) - 1
    hits = np.flatnonzero(mag == run_max[run_id])
    first = np.ones(hits.size, dtype=bool)
    first[1:] = run_id[hits[1:]] != run_id[hits[:-1]]
    at = hits[first]
    return starts // G, at % G, starts % G, ends % G


def _trim_reference(xs, es, m):
    xs, es = list(xs), list(es)
    while len(xs) > m:
        if len(xs) == m + 1:
            drop = 0 if abs(es[0]) < abs(es[-1]) else len(xs) - 1
            del xs[drop], es[drop]
            continue
        i = int(np.argmin(np.abs(es)))
        if i == 0 or i == len(xs) - 1:
            del xs[i], es[i]
            continue
        del xs[i], es[i]
        # neighbours i-1 and i now share a sign: keep the larger
        j = i - 1 if abs(es[i - 1]) < abs(es[i]) else i
        del xs[j], es[j]
    return np.array(xs), np.array(es)


_ACTIVE, _DONE, _LOST = 0, 1, 2
# level agreement below this times max|f| is rounding noise
_NOISE = 64 * np.finfo(float).eps


def _remez_batch(F, B, K, tol, max_iter, warp):
    """Remez exchange for ``B`` functions on ``[-1, 1]`` at once.

    ``F(u, rows)`` evaluates function ``rows`` at ``u`` (broadcasting).
    Returns Chebyshev coefficients, levels, references and a status array.
    """
    m = K + 2
    ref = np.tile(-np.cos(np.pi * (np.arange(m) / (K + 1)) ** warp), (B, 1))
    grid = -np.cos(np.linspace(0.0, np.pi, max(1025, 80 * m + 1)))
    grid[0], grid[-1] = -1.0, 1.0
    Tg = C.chebvander(grid, K).T
    coef = np.zeros((B, K + 1))
    level = np.zeros(B)
    status = np.full(B, _ACTIVE)
    spread = np.full(B, np.inf)
    alt = (-1.0) ** np.arange(m)
    chunk = max(1, 2**21 // grid.size)
    for _ in range(max_iter):
        active = np.flatnonzero(status == _ACTIVE)
        if not active.size:
            break
        for start in range(0, active.size, chunk):
            rows = active[start:start + chunk]
            A = np.concatenate((C.chebvander(ref[rows], K), np.broadcast_to(alt, (rows.size, m))[..., None]), axis=2)
            rhs = np.asarray(F(ref[rows], rows[:, None]), dtype=float)
            c = np.linalg.solve(A, rhs[..., None])[..., :-1, 0]
            coef[rows] = c
            Fg = np.asarray(F(grid[None, :], rows[:, None]), dtype=float)
            if not np.all(np.isfinite(Fg)):
                raise ValueError("function returned non-finite values")
            fscale = np.maximum(1.0, np.max(np.abs(Fg), axis=1))
            eg = Fg - c @ Tg
            emax = np.max(np.abs(eg), axis=1)
            exact = emax <= 1e-14 * fscale
            level[rows[exact]] = emax[exact]
            status[rows[exact]] = _DONE
            todo = np.flatnonzero(~exact)
            if not todo.size:
                continue
            signs = _run_signs(eg[todo])
            owner, idx, first, last = _grid_extrema(signs, eg[todo])
            # refine every extremum of every row in one golden-section pass
            lo = grid[np.maximum(idx - 1, first)]
            hi = grid[np.minimum(idx + 1, last)]
            sgn = signs[owner, idx]
            at = rows[todo[owner]]

            def g(u, at=at, sgn=sgn, c=coef):
                return sgn * (np.asarray(F(u, at), dtype=float) - _clenshaw(u, c[at]))

            xs, vals = _golden_max(g, lo, hi)
            grid_vals = sgn * eg[todo[owner], idx]
            better = grid_vals >= vals
            xs = np.where(better, grid[idx], xs)
            es = sgn * np.where(better, grid_vals, vals)
            counts = np.bincount(owner, minlength=todo.size)
            bounds = np.concatenate(([0], np.cumsum(counts)))
            # rows with exactly m extrema need no trimming
            plain = np.flatnonzero(counts == m)
            if plain.size:
                sel = bounds[plain][:, None] + np.arange(m)
                mags = np.abs(es[sel])
                r = rows[todo[plain]]
                ref[r] = xs[sel]
                spread[r] = (mags.max(axis=1) - mags.min(axis=1)) / mags.max(axis=1)
                ok = (spread[r] <= tol) | (np.ptp(mags, axis=1) <= _NOISE * fscale[todo[plain]])
                level[r[ok]] = mags.max(axis=1)[ok]
                status[r[ok]] = _DONE
            for k in np.flatnonzero(counts != m):
                t = todo[k]
                r = rows[t]
                x_r, e_r = xs[bounds[k]:bounds[k + 1]], es[bounds[k]:bounds[k + 1]]
                if x_r.size < m:
                    # fewer alternations than unknowns: numerically exact or a lost alternation
                    if emax[t] <= 1e-12 * fscale[t]:
                        level[r], status[r] = emax[t], _DONE
                    else:
                        status[r] = _LOST
                    continue
                x_r, e_r = _trim_reference(x_r, e_r, m)
                mags = np.abs(e_r)
                spread[r] = (mags.max() - mags.min()) / mags.max()
                ref[r] = x_r
                if spread[r] <= tol or np.ptp(mags) <= _NOISE * fscale[t]:
                    level[r], status[r] = mags.max(), _DONE
    if np.any(status == _ACTIVE):
        worst = float(np.max(spread[status == _ACTIVE]))
        raise RemezError(f"no convergence after {max_iter} exchanges (relative spread {worst:.3e})")
    return coef, level, ref, status


def _remez_unit(F, B, K, tol, max_iter):
    """Best approximations on ``[-1, 1]``; retries lost alternations from a warped start."""
    coef, level, ref, status = _remez_batch(F, B, K, tol, max_iter, warp=1.0)
    lost = np.flatnonzero(status == _LOST)
    if lost.size:
        # symmetric data can cancel an alternation on the first solve
        c2, l2, r2, s2 = _remez_batch(lambda u, rows: F(u, lost[rows]), lost.size, K, tol, max_iter, warp=1.1)
        if np.any(s2 == _LOST):
            raise RemezError(f"lost alternation for degree {K}")
        coef[lost], level[lost], ref[lost] = c2, l2, r2
    return coef, level, ref


def remez_best_approx_family(f: Callable, params, domain: Sequence[float], K: int,
                             tol: float = 1e-12, max_iter: int = 100) -> list:
    """Degree-``K`` best approximations of ``f(., theta)`` for every ``theta`` in ``params``.

    ``f(x, theta)`` must broadcast elementwise over numpy arrays. All
    members share ``domain`` and are solved as one vectorized batch.
    """
    if K < 0:
        raise ValueError("degree must be >= 0")
    params = np.asarray(params, dtype=float)
    if params.ndim != 1:
        raise ValueError("params must be one-dimensional")
    lo, hi = map(float, domain)
    if not lo <= hi:
        raise ValueError("domain needs lo <= hi")
    mid, half = (lo + hi) / 2, (hi - lo) / 2
    if hi - lo < 1e-14:
        v = np.asarray(f(np.full(params.size, mid), params), dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("function returned non-finite values")
        return [PolyCoeffs(np.array([x]), (lo, hi), mid, 1.0, 0.0, np.array([mid])) for x in v]

    def F(u, rows):
        u, rows = np.broadcast_arrays(np.asarray(u, dtype=float), rows)
        return np.asarray(f(mid + half * u.ravel(), params[rows.ravel()]), dtype=float).reshape(u.shape)

    coef, level, ref = _remez_unit(F, params.size, K, tol, max_iter)
    mono = coef @ _cheb_to_monomial(K).T
    return [PolyCoeffs(c, (lo, hi), mid, half, float(e), mid + half * r)
            for c, e, r in zip(mono, level, ref)]


def remez_best_approx(f: Callable, domain: Sequence[float], K: int,
                      tol: float = 1e-12, max_iter: int = 100) -> PolyCoeffs:
    """Degree-``K`` best uniform approximation of ``f`` on ``domain``.

    ``f`` must accept numpy arrays. The reference starts at the Chebyshev
    extrema; every iteration replaces all ``K + 2`` points with the
    alternating extrema of the current error, refined by golden section,
    and stops once their magnitudes agree to relative ``tol``.
    """
    return remez_best_approx_family(lambda x, _: f(x), [0.0], domain, K, tol, max_iter)[0]


def best_abs_poly(K: int, tol: float = 1e-12) -> PolyCoeffs:
    """Best degree-``K`` approximation ``R_K`` of ``|t|`` on ``[-1, 1]``.

    Uses evenness: ``R_K(t) = H(t**2)`` with ``H`` the best degree
    ``K // 2`` approximation of ``sqrt(s)`` on ``[0, 1]``, so every odd
    coefficient is exactly zero. ``sup_error`` carries ``E_K``.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    H = remez_best_approx(np.sqrt, (0.0, 1.0), K // 2, tol=tol)
    r = np.zeros(K + 1)
    r[0 : 2 * (K // 2) + 1 : 2] = H.monomial()
    t_ref = np.sqrt(H.ref_points)
    ref = np.unique(np.concatenate((-t_ref, t_ref)))
    return PolyCoeffs(r, (-1.0, 1.0), 0.0, 1.0, H.sup_error, ref)


# -- bivariate ----------------------------------------------------------------


def _lobatto_unit(N: int) -> np.ndarray:
    """Chebyshev-Lobatto points on ``[0, 1]`` (as ``(t + 1) / 2``)."""
    return (1.0 + np.cos(np.pi * np.arange(N + 1) / N)) / 2.0


def _dct1_matrix(N: int) -> np.ndarray:
    """Values at Lobatto points -> Chebyshev interpolation coefficients."""
    k = np.arange(N + 1)
    M = (2.0 / N) * np.cos(np.pi * np.outer(k, k) / N)
    M[:, [0, N]] *= 0.5
    M[[0, N], :] *= 0.5
    return M


def _cheb_interp_2d(values: np.ndarray) -> np.ndarray:
    M = _dct1_matrix(values.shape[0] - 1)
    return M @ values @ M.T


def vallee_poussin_window(K: int) -> np.ndarray:
    """Weights for Chebyshev degrees ``0..K``: flat up to ``ceil(K/2)``,
    linear taper above. Reproduces every polynomial of degree ``ceil(K/2)``."""
    m = (K + 1) // 2
    k = np.arange(K + 1)
    return np.minimum(1.0, (K + 1 - k) / (K + 1 - m))


def cheb_filtered_2d(f: Callable, K: int, symmetric: bool = False) -> BivarPolyCoeffs:
    """Filtered tensor Chebyshev approximant of ``f`` on ``[0, 1]^2``.

    ``f`` is sampled on the ``(2K+1)^2`` Lobatto grid, interpolated, and the
    coefficients are tapered by :func:`vallee_poussin_window`, leaving
    degree ``<= K`` per variable. ``symmetric`` forces ``h(x,y) = h(y,x)``.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    nodes = _lobatto_unit(2 * K)
    X, Y = np.meshgrid(nodes, nodes, indexing="ij")
    F = np.asarray(f(X, Y), dtype=float)
    if not np.all(np.isfinite(F)):
        raise ValueError("function returned non-finite values")
    coef = _cheb_interp_2d(F)[: K + 1, : K + 1]
    w = vallee_poussin_window(K)
    coef = coef * np.outer(w, w)
    if symmetric:
        coef = (coef + coef.T) / 2
    return BivarPolyCoeffs(coef)


def sqrt_sum_poly(K: int) -> PolyCoeffs:
    """Univariate factor ``g_K`` of ``u_K(x, y) = g_K(x) + g_K(y)``."""
    return remez_best_approx(np.sqrt, (0.0, 1.0), K)


def build_h2k(K: int, L: float = 1.0) -> BivarPolyCoeffs:
    """Approximant of ``|x - y|`` on ``[0, L]^2`` vanishing at the origin.

    ``u_K ~ sqrt(x) + sqrt(y)`` and ``v_K ~ |sqrt(x) - sqrt(y)|`` on the unit
    square; ``h_2K = u_K v_K - u_K(0,0) v_K(0,0)`` has degree ``2K`` per
    variable and is returned rescaled to ``[0, L]^2``.
    """
    if K < 1 or not L > 0:
        raise ValueError("need K >= 1 and L > 0")
    g = sqrt_sum_poly(K)
    v = cheb_filtered_2d(lambda x, y: np.abs(np.sqrt(x) - np.sqrt(y)), K, symmetric=True)
    nodes = _lobatto_unit(2 * K)
    X, Y = np.meshgrid(nodes, nodes, indexing="ij")
    UV = (g(X) + g(Y)) * v.unit(X, Y)
    coef = _cheb_interp_2d(UV)
    coef = (coef + coef.T) / 2
    return BivarPolyCoeffs(coef, float(L), remove_origin=True)


# -- diagnostics ----------------------------------------------------------------


def _dyadic_grid(lo, hi, resolution):
    # nested grids, so a finer request never reports a smaller sup
    levels = max(1, math.ceil(math.log2(max(resolution - 1, 1))))
    return np.linspace(lo, hi, 2**levels + 1)


def approx_error_sup(poly, f: Callable, grid_resolution: int) -> ApproxReport:
    """Grid sup of ``|poly - f|`` over the polynomial's domain.

    A lower bound on the true sup error. The grid is the smallest dyadic
    uniform grid with at least ``grid_resolution`` points per axis.
    """
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be >= 2")
    if isinstance(poly, BivarPolyCoeffs):
        g = _dyadic_grid(0.0, poly.scale, grid_resolution)
        X, Y = np.meshgrid(g, g, indexing="ij")
        err = np.abs(poly(X, Y) - f(X, Y))
    else:
        g = _dyadic_grid(*poly.domain, grid_resolution)
        err = np.abs(poly(g) - f(g))
    return ApproxReport(float(np.max(err)), g.size, poly.ref_points if isinstance(poly, PolyCoeffs) else None)


def coeff_bound_check(poly, A: float) -> CoeffCheck:
    """Check monomial coefficients against the bounded-polynomial estimate.

    For a polynomial of degree ``n`` bounded by ``A`` on ``[a, b]``: if
    ``a + b == 0``, ``|a_v| <= A b**-v (sqrt2 + 1)**n``; otherwise
    ``|a_v| <= 2**(7n/2) A |(a+b)/2|**-v (|(b+a)/(b-a)|**n + 1)``.
    Bivariate polynomials on ``[0, 1]^2`` (unit variables) use the iterated
    form ``|h_ij| <= A (sqrt2 + 1)**(4 n)``.
    """
    if isinstance(poly, BivarPolyCoeffs):
        n = poly.degree
        bound = np.full(poly.coeffs.shape, A * SQRT2P1 ** (4 * n))
        coef = poly.coeffs
    else:
        coef = poly.monomial()
        n = poly.degree
        a, b = poly.domain
        nu = np.arange(n + 1)
        if abs(a + b) <= 1e-15 * max(abs(a), abs(b), 1.0):
            bound = A * b ** (-nu) * SQRT2P1**n
        else:
            mid = abs((a + b) / 2)
            bound = 2 ** (3.5 * n) * A * mid ** (-nu) * (abs((b + a) / (b - a)) ** n + 1)
    ratio = np.abs(coef) / bound
    worst = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    r = float(ratio[worst])
    if r <= 1.0 + 1e-12:
        return CoeffCheck(True, None, r)
    return CoeffCheck(False, tuple(int(i) for i in worst), r)
