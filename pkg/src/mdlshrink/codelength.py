"""Normalized-maximum-likelihood code lengths for wavelet coefficient models.

The model class: a binary mask splits the n coefficients into a retained
cluster (k values, variance sigma_I^2) and a noise cluster (n-k values,
variance sigma_N^2), both zero-mean Gaussian.  The NML code length for the
data under a mask, with the variance parameters maximized out and the
normalization restricted to ML estimates inside [sigma^2_min, sigma^2_max],
gives a selection criterion that is free of hyperparameters once the
gamma-independent terms are dropped.

All code lengths are in nats.  Three selection criteria are provided:

* `criterion_flat`       - two-cluster Stirling form, no mask-index cost
* `criterion_flat_with_index` - adds the Stirling-approximated cost of
  transmitting which mask was used (uniform over masks of the same size)
* `criterion_subband`    - per-subband variances plus exact log-binomial
  index costs, with one pooled cluster for all discarded coefficients

plus the exact (log-Gamma) code length for gap analysis and a quadrature
check of the normalizer halving caused by the sigma_N <= sigma_I constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln

__all__ = [
    "DegenerateModelError",
    "OutOfSupportError",
    "SquareStats",
    "SubbandStats",
    "NormalizerBounds",
    "cluster_cost",
    "log_binomial",
    "criterion_flat",
    "criterion_flat_with_index",
    "criterion_subband",
    "exact_codelength_flat",
    "exact_flat_constant",
    "constrained_normalizer_ratio",
]


class DegenerateModelError(ValueError):
    """Raised when a mask size makes the two-cluster model meaningless."""


class OutOfSupportError(ValueError):
    """Raised when an ML variance estimate falls outside the model bounds."""


@dataclass(frozen=True)
class SquareStats:
    """Sufficient statistics of a mask: total and retained sums of squares."""

    total_sq: float
    retained_sq: float
    n: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need at least two coefficients")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"k={self.k} outside [0, {self.n}]")
        if self.retained_sq < 0 or self.total_sq < self.retained_sq:
            raise ValueError("sums of squares must satisfy 0 <= S_retained <= S_total")

    @property
    def noise_sq(self) -> float:
        return self.total_sq - self.retained_sq


@dataclass(frozen=True)
class SubbandStats:
    """Per-subband retained statistics plus the pooled discard cluster.

    bands holds (k_b, n_b, retained_sq_b) for each processed subband; the
    pool aggregates every discarded coefficient across those subbands.
    Frozen subbands never appear here at all.
    """

    bands: tuple[tuple[int, int, float], ...]
    pool_k: int
    pool_sq: float

    def __post_init__(self) -> None:
        for k_b, n_b, s_b in self.bands:
            if not 0 <= k_b <= n_b:
                raise ValueError(f"subband k={k_b} outside [0, {n_b}]")
            if s_b < 0:
                raise ValueError("retained sum of squares must be >= 0")
        if self.pool_k < 0 or self.pool_sq < 0:
            raise ValueError("pool statistics must be >= 0")
        discarded = sum(n_b - k_b for k_b, n_b, _ in self.bands)
        if self.pool_k != discarded:
            raise ValueError(
                f"pool holds {self.pool_k} coefficients but subbands discard {discarded}"
            )


@dataclass(frozen=True)
class NormalizerBounds:
    """Variance support [sigma2_min, sigma2_max] of the NML normalization."""

    sigma2_min: float
    sigma2_max: float

    def __post_init__(self) -> None:
        if not 0 < self.sigma2_min < self.sigma2_max:
            raise ValueError("need 0 < sigma2_min < sigma2_max")

    @property
    def log_ratio(self) -> float:
        return math.log(self.sigma2_max / self.sigma2_min)


def cluster_cost(count, sum_sq):
    """(k/2) ln(S/k) + (1/2) ln k for one variance cluster, elementwise.

    Returns 0 where count == 0 (an absent cluster costs nothing) and +inf
    where count >= 1 but the sum of squares is zero, so selection scans
    skip such candidates instead of blowing up.  Accepts scalars or arrays.
    """
    count_arr = np.asarray(count, dtype=float)
    sum_arr = np.asarray(sum_sq, dtype=float)
    present = count_arr > 0
    valid = present & (sum_arr > 0)
    safe_count = np.where(valid, count_arr, 1.0)
    safe_sum = np.where(valid, sum_arr, 1.0)
    value = 0.5 * safe_count * np.log(safe_sum / safe_count) + 0.5 * np.log(safe_count)
    out = np.where(present, np.where(valid, value, np.inf), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def log_binomial(n, k):
    """Exact ln C(n, k) through log-Gamma, elementwise.

    This is the exact value (gammaln is exact up to rounding), not the
    Stirling shortcut buried inside `criterion_flat_with_index`.
    """
    n_arr = np.asarray(n)
    k_arr = np.asarray(k)
    if np.any(k_arr < 0) or np.any(k_arr > n_arr) or np.any(n_arr < 0):
        raise ValueError("need 0 <= k <= n")
    # subtract in a canonical order so C(n, k) == C(n, n - k) holds
    # bit-exactly, not only up to rounding
    small = np.minimum(k_arr, n_arr - k_arr)
    out = gammaln(n_arr + 1.0) - gammaln(small + 1.0) - gammaln(n_arr - small + 1.0)
    if out.ndim == 0:
        return float(out)
    return out


def _check_split(stats: SquareStats) -> None:
    if stats.k in (0, stats.n):
        raise DegenerateModelError(
            f"k={stats.k} leaves an empty cluster (n={stats.n})"
        )


def criterion_flat(stats: SquareStats) -> float:
    """Two-cluster NML selection criterion, Stirling form, no index cost.

    (n-k)/2 ln(S_N/(n-k)) + k/2 ln(S_I/k) + 1/2 ln(k(n-k)), in nats, up to
    terms that do not depend on the mask.  Returns +inf when either cluster
    has a zero sum of squares; raises DegenerateModelError for k in {0, n}.
    """
    _check_split(stats)
    return float(
        cluster_cost(stats.k, stats.retained_sq)
        + cluster_cost(stats.n - stats.k, stats.noise_sq)
    )


def criterion_flat_with_index(stats: SquareStats) -> float:
    """Flat criterion plus the Stirling-approximated mask-index cost.

    Equals criterion_flat + ln C(n,k) up to a mask-independent constant,
    with ln C(n,k) expanded by Stirling; the expansion cancels the
    1/2 ln(k(n-k)) term and triples the ln k and ln(n-k) denominators:

        (n-k)/2 ln(S_N/(n-k)^3) + k/2 ln(S_I/k^3)
    """
    _check_split(stats)
    k = float(stats.k)
    m = float(stats.n - stats.k)
    if stats.retained_sq <= 0 or stats.noise_sq <= 0:
        return math.inf
    return 0.5 * m * math.log(stats.noise_sq / m**3) + 0.5 * k * math.log(
        stats.retained_sq / k**3
    )


def criterion_subband(stats: SubbandStats) -> float:
    """Per-subband NML criterion with exact mask-index costs.

    Sum over processed subbands of (k_b/2) ln(S_b/k_b) + 1/2 ln k_b
    + ln C(n_b, k_b), plus the same variance cost for the pooled discard
    cluster (which carries no index cost).  Subbands with k_b = 0 and an
    empty pool contribute nothing.  +inf when any present cluster has a
    zero sum of squares.
    """
    total = cluster_cost(stats.pool_k, stats.pool_sq)
    for k_b, n_b, s_b in stats.bands:
        total += cluster_cost(k_b, s_b)
        total += log_binomial(n_b, k_b)
    return float(total)


def exact_codelength_flat(stats: SquareStats, bounds: NormalizerBounds) -> float:
    """Exact two-cluster NML code length (log-Gamma form), in nats.

    k/2 ln S_I + (n-k)/2 ln S_N - ln Gamma(k/2) - ln Gamma((n-k)/2)
    + (n/2) ln pi + 2 ln ln(sigma2_max/sigma2_min)

    Valid when both ML variance estimates S_I/k and S_N/(n-k) lie inside
    the bounds; raises OutOfSupportError otherwise.  Subtracting
    `exact_flat_constant` leaves a quantity the Stirling `criterion_flat`
    approximates with O(1/k + 1/(n-k)) error.
    """
    _check_split(stats)
    if stats.retained_sq <= 0 or stats.noise_sq <= 0:
        raise DegenerateModelError("zero sum of squares has no interior ML estimate")
    k = float(stats.k)
    m = float(stats.n - stats.k)
    var_retained = stats.retained_sq / k
    var_noise = stats.noise_sq / m
    for which, var in (("retained", var_retained), ("noise", var_noise)):
        if not bounds.sigma2_min <= var <= bounds.sigma2_max:
            raise OutOfSupportError(
                f"{which} ML variance {var!r} outside "
                f"[{bounds.sigma2_min}, {bounds.sigma2_max}]"
            )
    return float(
        0.5 * k * math.log(stats.retained_sq)
        + 0.5 * m * math.log(stats.noise_sq)
        - gammaln(0.5 * k)
        - gammaln(0.5 * m)
        + 0.5 * stats.n * math.log(math.pi)
        + 2.0 * math.log(bounds.log_ratio)
    )


def exact_flat_constant(n: int, bounds: NormalizerBounds) -> float:
    """Mask-independent part of the exact code length for n coefficients.

    (n/2) ln(2 pi e) - ln(4 pi) + 2 ln ln(sigma2_max/sigma2_min).
    exact_codelength_flat - exact_flat_constant converges to
    criterion_flat as both clusters grow.
    """
    return float(
        0.5 * n * math.log(2.0 * math.pi * math.e)
        - math.log(4.0 * math.pi)
        + 2.0 * math.log(bounds.log_ratio)
    )


# ---------------------------------------------------------------------------
# normalizer quadrature: the variance-order constraint halves the integral
# ---------------------------------------------------------------------------

def _rectangle_integral(bounds: NormalizerBounds, k: float, m: float) -> float:
    """Integral of 1/(s1 s2) over the full ML-statistic rectangle."""
    value, _ = integrate.dblquad(
        lambda s2, s1: 1.0 / (s1 * s2),
        k * bounds.sigma2_min,
        k * bounds.sigma2_max,
        lambda s1: m * bounds.sigma2_min,
        lambda s1: m * bounds.sigma2_max,
        epsabs=0.0,
        epsrel=1e-10,
    )
    return value


def _constrained_integral(bounds: NormalizerBounds, k: float, m: float) -> float:
    """Same integral restricted to s2/m <= s1/k (noise variance smaller)."""
    value, _ = integrate.dblquad(
        lambda s2, s1: 1.0 / (s1 * s2),
        k * bounds.sigma2_min,
        k * bounds.sigma2_max,
        lambda s1: m * bounds.sigma2_min,
        lambda s1: (m / k) * s1,
        epsabs=0.0,
        epsrel=1e-10,
    )
    return value


def _constrained_integral_reduced(bounds: NormalizerBounds, k: float, m: float) -> float:
    """Constrained integral with the inner s2 integral done in closed form.

    The inner antiderivative is ln s2, so the s2 integral collapses to
    ln(s1/(k sigma2_min)); only a 1-D quadrature over s1 remains.  Kept as
    an independent route for cross-checking the 2-D quadrature.
    """
    lower = k * bounds.sigma2_min
    value, _ = integrate.quad(
        lambda s1: math.log(s1 / lower) / s1,
        lower,
        k * bounds.sigma2_max,
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    return value


def constrained_normalizer_ratio(
    bounds: NormalizerBounds, k: int = 1, m: int = 1
) -> float:
    """Ratio of the NML normalizer integral without / with sigma_N <= sigma_I.

    Both integrals of 1/(s1 s2) (s1, s2 the retained / noise sums of
    squares, each ranging over count * [sigma2_min, sigma2_max]) are
    evaluated by adaptive quadrature; the constrained region keeps the
    noise ML variance below the retained one.  The exact ratio is 2 for
    every choice of bounds and cluster sizes: ignoring the constraint
    costs exactly one bit (ln 2 nats).
    """
    if k < 1 or m < 1:
        raise ValueError("cluster sizes must be >= 1")
    full = _rectangle_integral(bounds, float(k), float(m))
    constrained = _constrained_integral(bounds, float(k), float(m))
    return full / constrained
