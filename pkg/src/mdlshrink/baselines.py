"""Classical wavelet shrinkage baselines: VisuShrink, SureShrink, BayesShrink.

All three share the transform plumbing of the MDL denoiser and the same
freezing rule (scaling/approximation plus any detail subband at or below
the coarseness cutoff is passed through untouched), so PSNR comparisons
in the benchmark isolate the thresholding rule itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .wavelet import (
    CoefficientVector,
    forward_dwt,
    forward_dwt2,
    free_subband_indices,
    inverse_dwt,
    inverse_dwt2,
)

__all__ = [
    "NoiseEstimate",
    "ThresholdResult",
    "soft_threshold",
    "hard_threshold",
    "estimate_sigma",
    "visushrink",
    "sureshrink",
    "bayesshrink",
]

_MAD_TO_SIGMA = 0.6745  # |N(0,1)| median


def soft_threshold(x, t: float) -> np.ndarray:
    """Shrink toward zero by t: sign(x) * max(|x| - t, 0)."""
    arr = np.asarray(x, dtype=float)
    return np.sign(arr) * np.maximum(np.abs(arr) - t, 0.0)


def hard_threshold(x, t: float) -> np.ndarray:
    """Zero everything with |x| <= t, keep the rest unchanged."""
    arr = np.asarray(x, dtype=float)
    return np.where(np.abs(arr) > t, arr, 0.0)


@dataclass(frozen=True)
class NoiseEstimate:
    """Noise scale and where it came from ('mad_finest' or 'known')."""

    sigma: float
    source: str


@dataclass
class ThresholdResult:
    """Baseline output plus the thresholds that produced it."""

    output: np.ndarray
    method: str
    noise: NoiseEstimate
    thresholds: dict[int, float]  # subband index -> threshold (original units)
    k_total: int


def estimate_sigma(coeffs: CoefficientVector) -> NoiseEstimate:
    """Robust noise estimate: median |c| of the finest detail band / 0.6745.

    Uses the level-1 detail subband for signals and the level-1 diagonal
    subband for images, where the clean content is sparsest.
    """
    band = coeffs.layout.finest_detail()
    med = float(np.median(np.abs(coeffs.band_values(band))))
    return NoiseEstimate(sigma=med / _MAD_TO_SIGMA, source="mad_finest")


def _transform(data, filter_name, levels):
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        return arr, forward_dwt(arr, filter_name, levels), inverse_dwt
    if arr.ndim == 2:
        return arr, forward_dwt2(arr, filter_name, levels), inverse_dwt2
    raise ValueError("expected a 1-D signal or 2-D image")


def _noise(coeffs, sigma) -> NoiseEstimate:
    if sigma is not None:
        if sigma < 0:
            raise ValueError("sigma must be >= 0")
        return NoiseEstimate(sigma=float(sigma), source="known")
    return estimate_sigma(coeffs)


def _apply_per_band(coeffs, free_bands, thresholds, shrink) -> tuple[np.ndarray, int]:
    """Threshold each free band, count survivors, leave the rest alone."""
    out = coeffs.values.copy()
    k_total = 0
    for idx in free_bands:
        band = coeffs.layout.subbands[idx]
        t = thresholds[idx]
        if math.isinf(t):
            out[band.slice] = 0.0
            continue
        shrunk = shrink(coeffs.values[band.slice], t)
        out[band.slice] = shrunk
        k_total += int(np.count_nonzero(shrunk))
    return out, k_total


def visushrink(
    data,
    filter_name: str = "d6",
    mode: str = "soft",
    sigma: "float | None" = None,
    levels: "int | None" = None,
    coarse_cutoff: int = 16,
) -> ThresholdResult:
    """Universal threshold sigma * sqrt(2 ln n) on every free detail band.

    mode chooses soft (default) or hard thresholding; n is the total
    sample count of the input.
    """
    if mode not in ("soft", "hard"):
        raise ValueError("mode must be 'soft' or 'hard'")
    arr, coeffs, invert = _transform(data, filter_name, levels)
    free_bands = free_subband_indices(coeffs.layout, coarse_cutoff)
    noise = _noise(coeffs, sigma)
    t = noise.sigma * math.sqrt(2.0 * math.log(arr.size))
    shrink = soft_threshold if mode == "soft" else hard_threshold
    thresholds = {idx: t for idx in free_bands}
    out_values, k_total = _apply_per_band(coeffs, free_bands, thresholds, shrink)
    return ThresholdResult(
        output=invert(CoefficientVector(out_values, coeffs.layout), filter_name),
        method=f"visu-{mode}",
        noise=noise,
        thresholds=thresholds,
        k_total=k_total,
    )


def _sure_threshold(x: np.ndarray) -> float:
    """SURE-minimizing soft threshold for unit-variance coefficients.

    Candidates are the sorted |x| values capped at the universal threshold
    sqrt(2 ln n), plus 0 and the cap itself; ties pick the smaller
    threshold.  Falls back to the universal threshold when the energy test
    flags the band as sparse (the estimator is unreliable there).
    """
    n = x.size
    t_univ = math.sqrt(2.0 * math.log(n))
    energy = float((x**2).sum())
    sparsity = (energy - n) / n
    if sparsity <= math.log2(n) ** 1.5 / math.sqrt(n):
        return t_univ

    a = np.sort(np.abs(x))
    cands = np.concatenate(([0.0], a[a <= t_univ], [t_univ]))
    cnt = np.searchsorted(a, cands, side="right")
    cum_sq = np.concatenate(([0.0], np.cumsum(a**2)))
    risk = n - 2.0 * cnt + cum_sq[cnt] + (n - cnt) * cands**2
    return float(cands[int(np.argmin(risk))])


def sureshrink(
    data,
    filter_name: str = "d6",
    sigma: "float | None" = None,
    levels: "int | None" = None,
    coarse_cutoff: int = 16,
) -> ThresholdResult:
    """Per-subband SURE-optimal soft thresholds (hybrid scheme)."""
    arr, coeffs, invert = _transform(data, filter_name, levels)
    free_bands = free_subband_indices(coeffs.layout, coarse_cutoff)
    noise = _noise(coeffs, sigma)
    thresholds: dict[int, float] = {}
    for idx in free_bands:
        band = coeffs.layout.subbands[idx]
        if noise.sigma <= 0:
            thresholds[idx] = 0.0
            continue
        x = coeffs.values[band.slice] / noise.sigma
        thresholds[idx] = _sure_threshold(x) * noise.sigma
    out_values, k_total = _apply_per_band(coeffs, free_bands, thresholds, soft_threshold)
    return ThresholdResult(
        output=invert(CoefficientVector(out_values, coeffs.layout), filter_name),
        method="sure",
        noise=noise,
        thresholds=thresholds,
        k_total=k_total,
    )


def bayesshrink(
    data,
    filter_name: str = "d6",
    sigma: "float | None" = None,
    levels: "int | None" = None,
    coarse_cutoff: int = 16,
) -> ThresholdResult:
    """Soft threshold sigma^2 / sigma_x per band, sigma_x from the energy gap.

    sigma_x^2 = max(mean(c^2) - sigma^2, 0); a band whose energy does not
    exceed the noise floor is zeroed outright, and sigma = 0 degenerates
    to the identity.
    """
    arr, coeffs, invert = _transform(data, filter_name, levels)
    free_bands = free_subband_indices(coeffs.layout, coarse_cutoff)
    noise = _noise(coeffs, sigma)
    thresholds: dict[int, float] = {}
    for idx in free_bands:
        band = coeffs.layout.subbands[idx]
        if noise.sigma <= 0:
            thresholds[idx] = 0.0
            continue
        mean_sq = float((coeffs.values[band.slice] ** 2).mean())
        sigma_x = math.sqrt(max(mean_sq - noise.sigma**2, 0.0))
        thresholds[idx] = math.inf if sigma_x == 0.0 else noise.sigma**2 / sigma_x
    out_values, k_total = _apply_per_band(coeffs, free_bands, thresholds, soft_threshold)
    return ThresholdResult(
        output=invert(CoefficientVector(out_values, coeffs.layout), filter_name),
        method="bayes",
        noise=noise,
        thresholds=thresholds,
        k_total=k_total,
    )
