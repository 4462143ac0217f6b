"""Entropy and mutual-information estimators on discrete data.

Three entropy estimators share the Histogram interface: the plug-in MLE,
the Miller-Madow corrected MLE, and a two-regime estimator that applies a
first-order bias correction to well-observed symbols and estimates a best
polynomial approximation of -p*ln(p) (via unbiased falling-factorial
moments) for low-count symbols. Mutual information and conditional mutual
information are built from entropies by the decomposition identities
I(X;Y) = H(X)+H(Y)-H(X,Y) and I(X;Y|C) = H(X,C)+H(Y,C)-H(C)-H(X,Y,C).

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .approx import best_entropy_poly, rescale_to_interval
from .histograms import Histogram, JointHistogram, SparseJointHistogram


@dataclass(frozen=True)
class EstimatorConfig:
    """Knobs of the two-regime estimator.

    A symbol with count <= c1*ln(n) is treated as low-count ("non-smooth");
    the polynomial degree is ceil(c2*ln(n)) capped at max_degree_cap and n;
    the approximation interval is interval_slack * c1*ln(n)/n (capped at 1).
    """

    c1: float = 4.0
    c2: float = 1.8
    interval_slack: float = 2.0
    max_degree_cap: int = 30
    smooth_correction: bool = True
    clamp_entropy: bool = False
    clamp_mi_nonnegative: bool = False
    split: bool = False

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("c1 and c2 must be positive")
        if self.interval_slack < 1:
            raise ValueError("interval_slack must be >= 1")
        if self.max_degree_cap < 0:
            raise ValueError("max_degree_cap must be non-negative")


DEFAULT_CONFIG = EstimatorConfig()


def entropy_mle(h: Histogram) -> float:
    """Plug-in entropy sum(-p̂ ln p̂) in nats."""
    if h.n == 0:
        raise ValueError("empty histogram")
    p = h.counts[h.counts > 0] / h.n
    return float(np.sum(-p * np.log(p)))


def entropy_miller_madow(h: Histogram) -> float:
    """Plug-in entropy plus the (S+ - 1)/(2n) first-order bias correction."""
    if h.n == 0:
        raise ValueError("empty histogram")
    s_plus = int(np.count_nonzero(h.counts))
    return entropy_mle(h) + (s_plus - 1) / (2.0 * h.n)


def falling_factorial_moment(x, n, k):
    """(x)_k / (n)_k — the unbiased estimator of p**k from a Binomial(n, p) count x."""
    x, n, k = int(x), int(n), int(k)
    if n <= 0:
        raise ValueError("n must be positive")
    if x < 0 or x > n:
        raise ValueError("x must lie in [0, n]")
    if k < 0 or k > n:
        raise ValueError("p**k is not unbiasedly estimable for k > n")
    out = 1.0
    for i in range(k):
        if x - i == 0:
            return 0.0
        out *= (x - i) / (n - i)
    return out


@lru_cache(maxsize=None)
def _rescaled_coeffs(degree, delta):
    poly = best_entropy_poly(degree)
    return rescale_to_interval(poly, delta).coeffs


def _poly_parameters(n, cfg):
    log_n = math.log(n)
    threshold = cfg.c1 * log_n
    degree = min(math.ceil(cfg.c2 * log_n), cfg.max_degree_cap, n)
    delta = min(1.0, cfg.interval_slack * threshold / n)
    return threshold, degree, delta


def _moment_table(max_count, n, degree):
    # T[x, k] = falling_factorial_moment(x, n, k); zeros propagate once the
    # falling factorial hits x - k + 1 = 0.
    xs = np.arange(max_count + 1, dtype=float)
    T = np.ones((max_count + 1, degree + 1))
    for k in range(1, degree + 1):
        T[:, k] = T[:, k - 1] * (xs - (k - 1)) / (n - (k - 1))
    return T


def _entropy_poly_core(counts, alphabet, n, cfg):
    threshold, degree, delta = _poly_parameters(n, cfg)
    b = _rescaled_coeffs(degree, delta)

    positive = counts[counts > 0]
    smooth = positive[positive > threshold]
    low = positive[positive <= threshold]

    total = 0.0
    if smooth.size:
        p = smooth / n
        total += float(np.sum(-p * np.log(p)))
        if cfg.smooth_correction:
            total += float(np.sum((1.0 - p) / (2.0 * n)))
    if low.size:
        table = _moment_table(int(low.max()), n, len(b) - 1)
        total += float(np.sum(table[low.astype(np.int64)] @ b))
    zeros = alphabet - positive.size
    if zeros:
        total += zeros * float(b[0])
    if cfg.clamp_entropy:
        total = min(max(total, 0.0), math.log(alphabet))
    return total


def _split_counts(counts, rng):
    half_a = rng.binomial(counts, 0.5)
    return half_a, counts - half_a


def entropy_poly(h: Histogram, cfg: EstimatorConfig = DEFAULT_CONFIG, rng=None) -> float:
    """Two-regime entropy estimate in nats.

    Symbols with count > c1*ln(n) contribute -p̂ ln p̂ (+ (1-p̂)/(2n) bias
    correction when enabled); lower counts contribute the best polynomial
    approximation of -p ln p on [0, delta], estimated unbiasedly through
    falling-factorial moments. Zero-count symbols contribute the constant
    coefficient, so the declared alphabet size matters.

    With cfg.split, the counts are binomially thinned in two halves
    (classification on one, estimation on the other); this needs ``rng``.
    """
    if h.n < 2:
        raise ValueError("the two-regime estimator needs n >= 2")
    if not cfg.split:
        return _entropy_poly_core(h.counts, h.alphabet, h.n, cfg)
    if rng is None:
        raise ValueError("cfg.split requires a random generator")
    half_a, half_b = _split_counts(np.asarray(h.counts), rng)
    n_a, n_b = int(half_a.sum()), int(half_b.sum())
    if n_a < 2 or n_b < 2:
        raise ValueError("split halves too small; need n >= 4 in practice")
    threshold = cfg.c1 * math.log(n_a)  # classify on half A
    _, degree, delta = _poly_parameters(n_b, cfg)  # estimate on half B
    b = _rescaled_coeffs(degree, delta)
    smooth_mask = half_a > threshold
    total = 0.0
    smooth_b = half_b[smooth_mask & (half_b > 0)]
    if smooth_b.size:
        p = smooth_b / n_b
        total += float(np.sum(-p * np.log(p)))
        if cfg.smooth_correction:
            total += float(np.sum((1.0 - p) / (2.0 * n_b)))
    low_b = half_b[~smooth_mask]
    table = _moment_table(int(low_b.max()) if low_b.size else 0, n_b, len(b) - 1)
    total += float(np.sum(table[low_b.astype(np.int64)] @ b))
    if cfg.clamp_entropy:
        total = min(max(total, 0.0), math.log(h.alphabet))
    return total


_ENTROPY_KINDS = {
    "mle": lambda h, cfg: entropy_mle(h),
    "mm": lambda h, cfg: entropy_miller_madow(h),
    "poly": lambda h, cfg: entropy_poly(h, cfg),
}


def estimate_entropy(h: Histogram, kind: str, cfg: EstimatorConfig = DEFAULT_CONFIG) -> float:
    """Dispatch to one of the entropy estimators: 'mle', 'mm' or 'poly'."""
    try:
        fn = _ENTROPY_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown estimator kind {kind!r}") from None
    return fn(h, cfg)


def mutual_information(j: JointHistogram, kind: str = "mle",
                       cfg: EstimatorConfig = DEFAULT_CONFIG) -> float:
    """H(X) + H(Y) - H(X,Y) with the chosen entropy estimator, in nats.

    The polynomial-corrected estimate may be negative; it is clipped at 0
    only when cfg.clamp_mi_nonnegative is set.
    """
    if kind not in ("mle", "poly"):
        raise ValueError(f"mutual information supports 'mle' or 'poly', got {kind!r}")
    if j.n == 0:
        raise ValueError("empty joint histogram")
    value = (
        estimate_entropy(j.row_marginal(), kind, cfg)
        + estimate_entropy(j.col_marginal(), kind, cfg)
        - estimate_entropy(j.flatten(), kind, cfg)
    )
    if cfg.clamp_mi_nonnegative:
        value = max(value, 0.0)
    return value


def conditional_mutual_information(t: SparseJointHistogram, kind: str = "mle",
                                   cfg: EstimatorConfig = DEFAULT_CONFIG) -> float:
    """H(X,C) + H(Y,C) - H(C) - H(X,Y,C) over an arity-3 table (X, Y, C)."""
    if t.arity != 3:
        raise ValueError(f"expected an arity-3 table, got arity {t.arity}")
    h_xc = estimate_entropy(t.marginalize((0, 2)).flatten(), kind, cfg)
    h_yc = estimate_entropy(t.marginalize((1, 2)).flatten(), kind, cfg)
    h_c = estimate_entropy(t.marginalize((2,)).flatten(), kind, cfg)
    h_xyc = estimate_entropy(t.flatten(), kind, cfg)
    value = h_xc + h_yc - h_c - h_xyc
    if cfg.clamp_mi_nonnegative:
        value = max(value, 0.0)
    return value
