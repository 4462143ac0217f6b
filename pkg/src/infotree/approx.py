"""Best uniform polynomial approximation of the entropy kernel -x*ln(x) on [0, 1].

The low-count branch of the entropy estimators pairs the monomial
coefficients produced here with unbiased moment estimates of the symbol
probabilities, so everything is computed internally in the Chebyshev basis
(for conditioning) and converted to the monomial basis exactly once at the
end. ``rescale_to_interval`` carries a [0, 1] approximant to [0, delta].

Monomial coefficients grow like 6**K, so float64 monomial evaluation over
all of [0, 1] is only meaningful up to degree ~20; certification therefore
goes through the Chebyshev form (the same polynomial), and the estimators
only ever evaluate the rescaled polynomial well inside its interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as _cheb

MAX_DEGREE = 40
CERT_GRID_POINTS = 1_000_000

_METHODS = ("remez", "chebyshev_projection")


class RemezConvergenceError(RuntimeError):
    """Exchange iteration failed to produce an equioscillating reference."""


def entropy_kernel(x):
    """f(x) = -x*ln(x), extended continuously with f(0) = 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    pos = x > 0
    out[pos] = -x[pos] * np.log(x[pos])
    return out if out.ndim else float(out)


def eval_poly(coeffs, x):
    """Evaluate sum_k coeffs[k] * x**k by Horner's scheme."""
    c = np.asarray(coeffs, dtype=float)
    xs = np.asarray(x, dtype=float)
    acc = np.full(xs.shape, c[-1])
    for a in c[-2::-1]:
        acc = acc * xs + a
    return acc if acc.ndim else float(acc)


@dataclass(frozen=True, eq=False)
class PolynomialApprox:
    """Near-best uniform approximant of the entropy kernel on [0, 1].

    ``coeffs`` are monomial-basis coefficients a_0..a_K; ``sup_error`` is the
    certified (dense grid + refinement, so lower-bound flavoured) maximum of
    |p(x) - f(x)| on [0, 1]. ``fallback`` marks results where the exchange
    iteration did not converge and the projection was substituted.
    """

    degree: int
    coeffs: np.ndarray
    sup_error: float
    grid_points: int
    method: str
    fallback: bool = False
    reference: np.ndarray | None = field(default=None, repr=False)
    cheb_coeffs: np.ndarray = field(default=None, repr=False)

    def residual(self, x):
        """p(x) - f(x), evaluated through the stable Chebyshev form."""
        xs = np.asarray(x, dtype=float)
        r = _cheb.chebval(2.0 * xs - 1.0, self.cheb_coeffs) - entropy_kernel(xs)
        return r if r.ndim else float(r)


@dataclass(frozen=True, eq=False)
class RescaledPoly:
    """Monomial coefficients approximating -x*ln(x) on [0, interval_width]."""

    coeffs: np.ndarray
    interval_width: float
    sup_error: float


def best_entropy_poly(degree, method="remez", max_degree=MAX_DEGREE):
    """Near-best uniform polynomial approximant of -x*ln(x) on [0, 1].

    method="remez" runs the exchange iteration (Chebyshev-extrema style
    initialisation, 100-iteration cap, 1e-6 relative agreement of the
    alternation magnitudes) and falls back to the Chebyshev projection if it
    does not converge. Results are cached per (degree, method) and immutable.
    """
    if not isinstance(degree, (int, np.integer)) or degree < 0:
        raise ValueError(f"degree must be a non-negative integer, got {degree!r}")
    if degree > max_degree:
        raise ValueError(
            f"degree {degree} exceeds max_degree {max_degree}; the monomial "
            "conversion is not reliable beyond that"
        )
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")
    return _best_entropy_poly_cached(int(degree), method)


@lru_cache(maxsize=None)
def _best_entropy_poly_cached(degree, method):
    fallback = False
    reference = None
    if method == "remez":
        try:
            cheb_coeffs, reference = _remez(degree)
        except RemezConvergenceError:
            cheb_coeffs = _projection_coeffs(degree)
            method = "chebyshev_projection"
            fallback = True
    else:
        cheb_coeffs = _projection_coeffs(degree)

    coeffs = _cheb_to_monomial_unit(cheb_coeffs)
    sup_error = _certify_cheb(cheb_coeffs, CERT_GRID_POINTS)
    coeffs.setflags(write=False)
    cheb_coeffs.setflags(write=False)
    if reference is not None:
        reference.setflags(write=False)
    return PolynomialApprox(
        degree=degree,
        coeffs=coeffs,
        sup_error=sup_error,
        grid_points=CERT_GRID_POINTS,
        method=method,
        fallback=fallback,
        reference=reference,
        cheb_coeffs=cheb_coeffs,
    )


def rescale_to_interval(poly, delta):
    """Carry a [0, 1] approximant of -x*ln(x) to [0, delta].

    If q(y) ~ -y*ln(y) on [0, 1] then delta*q(x/delta) + x*ln(delta) tracks
    -x*ln(x) on [0, delta], which gives b_k = a_k * delta**(1-k) for k != 1
    and b_1 = a_1 - ln(delta); the sup error scales by delta exactly.
    """
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must lie in (0, 1], got {delta!r}")
    a = np.asarray(poly.coeffs, dtype=float)
    if delta == 1.0:
        b = a.copy()
    else:
        # The change of variables adds a -x*ln(delta) term, so even a
        # degree-0 source rescales to a degree-1 polynomial.
        size = max(a.size, 2)
        a_ext = np.zeros(size)
        a_ext[: a.size] = a
        k = np.arange(size)
        b = a_ext * float(delta) ** (1.0 - k)
        b[1] = a_ext[1] - math.log(delta)
    b.setflags(write=False)
    return RescaledPoly(
        coeffs=b,
        interval_width=float(delta),
        sup_error=float(delta) * poly.sup_error,
    )


# ---------------------------------------------------------------------------
# Remez exchange
# ---------------------------------------------------------------------------

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@lru_cache(maxsize=1)
def _working_grid():
    # Alternation points cluster near the kernel's non-smooth endpoint x=0,
    # so a log-spaced tail supplements the uniform grid there.
    lin = np.linspace(0.0, 1.0, 20001)
    geo = np.geomspace(1e-14, 1.0, 8001)
    return np.unique(np.concatenate([lin, geo]))


def _solve_alternant(ref_x, degree):
    t = 2.0 * ref_x - 1.0
    V = _cheb.chebvander(t, degree)
    signs = (-1.0) ** np.arange(ref_x.size)
    A = np.hstack([V, signs[:, None]])
    sol = np.linalg.solve(A, entropy_kernel(ref_x))
    return sol[:-1], sol[-1]


def _golden_max(fun, lo, hi, iters=60):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)


def _extrema_candidates(grid, resid, rfun):
    """One |residual| maximiser per maximal constant-sign run, refined.

    Consecutive runs carry opposite signs, so the returned points alternate.
    """
    sign = np.sign(resid)
    nz = np.flatnonzero(sign != 0)
    if nz.size == 0:
        return np.empty(0), np.empty(0), np.empty(0)
    s_nz = sign[nz]
    starts = np.flatnonzero(np.r_[True, s_nz[1:] != s_nz[:-1]])
    bounds = np.r_[starts, s_nz.size]
    abs_r = np.abs(resid)

    xs, mags, sgns = [], [], []
    for k in range(starts.size):
        seg = nz[bounds[k]:bounds[k + 1]]
        j = seg[np.argmax(abs_r[seg])]
        s = float(s_nz[bounds[k]])
        lo = grid[max(j - 1, 0)]
        hi = grid[min(j + 1, grid.size - 1)]
        # Maximise the signed residual so the search cannot slide across a
        # zero crossing onto a neighbouring run's peak.
        x, mag = _golden_max(lambda u: s * rfun(u), lo, hi)
        if mag < abs_r[j]:  # refinement never regresses below the grid value
            x, mag = grid[j], abs_r[j]
        xs.append(x)
        mags.append(mag)
        sgns.append(s)
    return np.asarray(xs), np.asarray(mags), np.asarray(sgns)


def _select_reference(xs, mags, m):
    """Window of m consecutive (hence alternating) candidates containing the
    global maximum, chosen to maximise the smallest magnitude."""
    if xs.size < m:
        return None
    top = int(np.argmax(mags))
    best = None
    for start in range(xs.size - m + 1):
        if not (start <= top < start + m):
            continue
        lo = mags[start:start + m].min()
        if best is None or lo > best[0]:
            best = (lo, start)
    if best is None:
        return None
    start = best[1]
    return xs[start:start + m], mags[start:start + m]


def _remez(degree, max_iter=100, rel_tol=1e-6):
    m = degree + 2
    grid = _working_grid()
    tgrid = 2.0 * grid - 1.0
    fgrid = entropy_kernel(grid)

    # Initial trial polynomial: Chebyshev interpolant of the kernel. Its
    # residual changes sign degree+1 times, which seeds a full reference even
    # at degree 0 where the kernel vanishes at both endpoints.
    coeffs = _cheb.chebinterpolate(lambda t: entropy_kernel((t + 1.0) / 2.0), degree)

    def rfun(x):
        return float(_cheb.chebval(2.0 * x - 1.0, coeffs)) - float(entropy_kernel(x))

    resid = _cheb.chebval(tgrid, coeffs) - fgrid
    xs, mags, _ = _extrema_candidates(grid, resid, rfun)
    picked = _select_reference(xs, mags, m)
    if picked is None:
        raise RemezConvergenceError(f"degree {degree}: no initial reference")
    ref = picked[0]

    for _ in range(max_iter):
        if np.any(np.diff(np.sort(ref)) <= 0.0):
            raise RemezConvergenceError(f"degree {degree}: degenerate reference")
        try:
            coeffs, _E = _solve_alternant(ref, degree)
        except np.linalg.LinAlgError as exc:
            raise RemezConvergenceError(f"degree {degree}: singular alternant") from exc
        resid = _cheb.chebval(tgrid, coeffs) - fgrid
        xs, mags, _sgns = _extrema_candidates(grid, resid, rfun)
        picked = _select_reference(xs, mags, m)
        if picked is None:
            raise RemezConvergenceError(f"degree {degree}: reference collapsed")
        ref, ref_mags = picked
        top, bot = ref_mags.max(), ref_mags.min()
        if top - bot <= rel_tol * top:
            return coeffs, np.sort(ref)
    raise RemezConvergenceError(f"degree {degree}: no convergence in {max_iter} iterations")


# ---------------------------------------------------------------------------
# Chebyshev projection and basis conversion
# ---------------------------------------------------------------------------

_PROJECTION_POINTS = 8192


def _projection_coeffs(degree):
    # Interpolation at a much higher order, then truncation: the aliasing
    # error on the kept coefficients is negligible next to their k^-3 decay.
    full = _cheb.chebinterpolate(
        lambda t: entropy_kernel((t + 1.0) / 2.0), _PROJECTION_POINTS
    )
    return np.array(full[: degree + 1])


@lru_cache(maxsize=None)
def _shifted_cheb_monomial_rows(max_degree):
    """Exact integer coefficients of T_k(2x - 1) in the monomial basis."""
    rows = [[1], [-1, 2]]
    while len(rows) <= max_degree:
        prev, prev2 = rows[-1], rows[-2]
        nxt = [0] * (len(prev) + 1)
        for j, c in enumerate(prev):
            nxt[j + 1] += 4 * c
            nxt[j] -= 2 * c
        for j, c in enumerate(prev2):
            nxt[j] -= c
        rows.append(nxt)
    return tuple(tuple(r) for r in rows[: max_degree + 1])


def _cheb_to_monomial_unit(cheb_coeffs):
    """Coefficients over T_k(2x-1) -> monomial coefficients over x on [0, 1].

    Exact Fraction arithmetic with a single rounding per output coefficient:
    the integer T_k(2x-1) coefficients reach ~6**K, so naive float products
    would lose the low-order monomial coefficients entirely at high degree.
    """
    K = len(cheb_coeffs) - 1
    rows = _shifted_cheb_monomial_rows(K)
    out = np.empty(K + 1)
    for j in range(K + 1):
        acc = Fraction(0)
        for k in range(j, K + 1):
            acc += Fraction(float(cheb_coeffs[k])) * rows[k][j]
        out[j] = float(acc)
    return out


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------

def _local_max_indices(values):
    inner = np.flatnonzero((values[1:-1] >= values[:-2]) & (values[1:-1] >= values[2:])) + 1
    return np.unique(np.r_[0, inner, values.size - 1])


def _certify_cheb(cheb_coeffs, grid_points):
    """Upper-bound flavoured estimate of sup |p - f| on [0, 1].

    Dense uniform grid, a log-spaced augmentation near the non-smooth
    endpoint, and golden-section refinement around every grid maximum. The
    polynomial is evaluated in its Chebyshev form; the monomial form is the
    same polynomial, so the certificate transfers up to rounding.
    """
    xs = np.unique(np.concatenate([
        np.linspace(0.0, 1.0, grid_points),
        np.geomspace(1e-12, 1e-3, 2001),
    ]))
    r = np.abs(_cheb.chebval(2.0 * xs - 1.0, cheb_coeffs) - entropy_kernel(xs))

    def mag(x):
        return abs(float(_cheb.chebval(2.0 * x - 1.0, cheb_coeffs)) - float(entropy_kernel(x)))

    best = float(r.max())
    for j in _local_max_indices(r):
        lo = xs[max(j - 1, 0)]
        hi = xs[min(j + 1, xs.size - 1)]
        _, refined = _golden_max(mag, lo, hi, iters=40)
        if refined > best:
            best = float(refined)
    return best


# ---------------------------------------------------------------------------
# Compensated monomial evaluation (used by certification cross-checks)
# ---------------------------------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


def _two_sum(a, b):
    s = a + b
    t = s - a
    return s, (a - (s - t)) + (b - t)


def _two_prod(a, b):
    p = a * b
    a1 = a * _SPLITTER
    ah = a1 - (a1 - a)
    al = a - ah
    b1 = b * _SPLITTER
    bh = b1 - (b1 - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def eval_poly_compensated(coeffs, x):
    """Horner evaluation with error-free transformations (double-double-ish).

    Keeps monomial-basis evaluation meaningful at degrees where the raw
    coefficients are large enough for plain Horner to lose the result.
    """
    c = np.asarray(coeffs, dtype=float)
    xs = np.asarray(x, dtype=float)
    acc = np.full(xs.shape, c[-1])
    comp = np.zeros(xs.shape)
    for a in c[-2::-1]:
        p, pe = _two_prod(acc, xs)
        acc, se = _two_sum(p, np.full(xs.shape, a))
        comp = comp * xs + (pe + se)
    out = acc + comp
    return out if out.ndim else float(out)
