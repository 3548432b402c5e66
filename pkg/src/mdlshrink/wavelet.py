"""Orthonormal fast wavelet transforms with periodic boundaries.

Implements the decimating Mallat transform for 1-D signals and 2-D images
with Haar, D4 and D6 filters, keeping an explicit record of where every
subband lives inside the flat coefficient vector.  All transforms are
orthonormal, so round trips are exact to rounding and energy is preserved
(Parseval), which downstream code-length computations rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "WaveletFilter",
    "Subband",
    "SubbandLayout",
    "CoefficientVector",
    "get_filter",
    "forward_dwt",
    "inverse_dwt",
    "forward_dwt2",
    "inverse_dwt2",
    "free_subband_indices",
]

# Standard Daubechies scaling (low-pass analysis) taps, 17 significant
# digits.  Sum = sqrt(2), squared norm = 1, double shifts orthogonal.
_FILTER_TAPS = {
    "haar": (
        0.70710678118654752,
        0.70710678118654752,
    ),
    "d4": (
        0.48296291314453414,
        0.83651630373780791,
        0.22414386804201338,
        -0.12940952255126038,
    ),
    "d6": (
        0.33267055295008262,
        0.80689150931109258,
        0.45987750211849157,
        -0.13501102001025459,
        -0.085441273882026662,
        0.035226291885709537,
    ),
}

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class WaveletFilter:
    """An orthonormal two-channel filter pair.

    Only the low-pass taps are stored; the high-pass filter is the
    quadrature mirror g[i] = (-1)^i h[L-1-i].  Construction validates the
    orthonormality conditions so a bad tap list fails immediately.
    """

    name: str
    lowpass: tuple[float, ...]

    def __post_init__(self) -> None:
        taps = np.asarray(self.lowpass, dtype=float)
        if taps.ndim != 1 or taps.size < 2 or taps.size % 2:
            raise ValueError("filter taps must be a flat even-length list")
        if abs(taps.sum() - _SQRT2) > 1e-12:
            raise ValueError(f"{self.name}: tap sum {taps.sum()!r} != sqrt(2)")
        if abs((taps * taps).sum() - 1.0) > 1e-12:
            raise ValueError(f"{self.name}: squared tap norm is not 1")
        for shift in range(2, taps.size, 2):
            dot = float(taps[:-shift] @ taps[shift:])
            if abs(dot) > 1e-12:
                raise ValueError(
                    f"{self.name}: taps not orthogonal under shift {shift}"
                )

    @property
    def length(self) -> int:
        return len(self.lowpass)

    def filter_pair(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (lowpass, highpass) analysis filters as float arrays."""
        lo = np.asarray(self.lowpass, dtype=float)
        signs = np.where(np.arange(lo.size) % 2 == 0, 1.0, -1.0)
        hi = signs * lo[::-1]
        return lo, hi


def get_filter(filt: "WaveletFilter | str") -> WaveletFilter:
    """Coerce a filter name ('haar', 'd4', 'd6') to a WaveletFilter."""
    if isinstance(filt, WaveletFilter):
        return filt
    name = str(filt).lower()
    if name not in _FILTER_TAPS:
        known = ", ".join(sorted(_FILTER_TAPS))
        raise ValueError(f"unknown wavelet filter {filt!r} (known: {known})")
    return WaveletFilter(name=name, lowpass=_FILTER_TAPS[name])


@dataclass(frozen=True)
class Subband:
    """One subband's position inside the flat coefficient vector.

    level runs from 1 (finest) to the transform depth; the scaling /
    approximation subband carries the depth as its level.  shape is (m,)
    for 1-D subbands and (rows, cols) for 2-D ones, flattened C-order.
    """

    level: int
    orientation: str  # scaling|detail (1-D); approx|horizontal|vertical|diagonal
    offset: int
    length: int
    shape: tuple[int, ...]

    @property
    def slice(self) -> slice:
        return slice(self.offset, self.offset + self.length)

    @property
    def is_detail(self) -> bool:
        return self.orientation not in ("scaling", "approx")


@dataclass(frozen=True)
class SubbandLayout:
    """Partition of the flat coefficient vector into subbands."""

    subbands: tuple[Subband, ...]
    n: int
    signal_shape: tuple[int, ...]
    levels: int
    filter_name: str

    def __post_init__(self) -> None:
        covered = 0
        for band in self.subbands:
            if band.offset != covered:
                raise ValueError("subbands must tile the vector in order")
            if band.length != int(np.prod(band.shape)):
                raise ValueError("subband shape inconsistent with its length")
            covered += band.length
        if covered != self.n:
            raise ValueError(f"subbands cover {covered} of {self.n} slots")
        if int(np.prod(self.signal_shape)) != self.n:
            raise ValueError("signal shape inconsistent with coefficient count")

    @property
    def ndim(self) -> int:
        return len(self.signal_shape)

    def finest_detail(self) -> Subband:
        """The level-1 detail subband ('detail' in 1-D, 'diagonal' in 2-D)."""
        want = "detail" if self.ndim == 1 else "diagonal"
        for band in self.subbands:
            if band.level == 1 and band.orientation == want:
                return band
        raise ValueError("layout has no level-1 detail subband")


@dataclass
class CoefficientVector:
    """Flat coefficient storage plus the layout that interprets it."""

    values: np.ndarray
    layout: SubbandLayout

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size != self.layout.n:
            raise ValueError("coefficient values do not match the layout")

    def band_values(self, band: Subband) -> np.ndarray:
        return self.values[band.slice]

    def copy(self) -> "CoefficientVector":
        return CoefficientVector(self.values.copy(), self.layout)


def free_subband_indices(layout: SubbandLayout, coarse_cutoff: int) -> list[int]:
    """Indices of detail subbands larger than the coarse cutoff.

    Everything else (scaling/approximation, and any detail subband with at
    most `coarse_cutoff` coefficients) is frozen: retained untouched by
    every selection and thresholding rule in this package.
    """
    return [
        i
        for i, band in enumerate(layout.subbands)
        if band.is_detail and band.length > coarse_cutoff
    ]


# ---------------------------------------------------------------------------
# core periodic analysis / synthesis steps (vectorized along the last axis)
# ---------------------------------------------------------------------------

def _split(x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = x.shape[-1]
    taps = lo.size
    idx = (2 * np.arange(n // 2)[:, None] + np.arange(taps)[None, :]) % n
    windows = x[..., idx]
    return windows @ lo, windows @ hi


def _merge(a: np.ndarray, d: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    half = a.shape[-1]
    n = 2 * half
    out = np.zeros(a.shape[:-1] + (n,), dtype=float)
    base = 2 * np.arange(half)
    for t in range(lo.size):
        # positions (2j + t) mod n are distinct for fixed t, so a fancy
        # in-place add accumulates correctly
        out[..., (base + t) % n] += lo[t] * a + hi[t] * d
    return out


def _require_power_of_two(n: int, what: str) -> int:
    if n < 2 or n & (n - 1):
        raise ValueError(f"{what} must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


def _resolve_levels(levels: "int | None", max_levels: int) -> int:
    if levels is None:
        return max_levels
    levels = int(levels)
    if not 1 <= levels <= max_levels:
        raise ValueError(
            f"levels must be in [1, {max_levels}] for this size, got {levels}"
        )
    return levels


def _as_finite_array(data, ndim: int) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains non-finite values")
    return arr


# ---------------------------------------------------------------------------
# 1-D transforms
# ---------------------------------------------------------------------------

def forward_dwt(signal, filt="d6", levels: "int | None" = None) -> CoefficientVector:
    """Full decimating DWT of a 1-D signal with periodic boundaries.

    Parameters
    ----------
    signal : array_like
        Power-of-two length, finite values.
    filt : WaveletFilter or str
    levels : int, optional
        Decomposition depth; default is the maximum (scaling subband of
        length 1).

    Returns
    -------
    CoefficientVector
        Flat storage ordered [scaling, coarsest detail, ..., finest detail].
    """
    wavelet = get_filter(filt)
    x = _as_finite_array(signal, 1)
    max_levels = _require_power_of_two(x.size, "signal length")
    depth = _resolve_levels(levels, max_levels)
    lo, hi = wavelet.filter_pair()

    approx = x
    details: list[np.ndarray] = []
    for _ in range(depth):
        approx, detail = _split(approx, lo, hi)
        details.append(detail)

    bands = [Subband(depth, "scaling", 0, approx.size, (approx.size,))]
    chunks = [approx]
    offset = approx.size
    for level in range(depth, 0, -1):
        detail = details[level - 1]
        bands.append(Subband(level, "detail", offset, detail.size, (detail.size,)))
        chunks.append(detail)
        offset += detail.size

    layout = SubbandLayout(
        subbands=tuple(bands),
        n=x.size,
        signal_shape=(x.size,),
        levels=depth,
        filter_name=wavelet.name,
    )
    return CoefficientVector(np.concatenate(chunks), layout)


def inverse_dwt(coeffs: CoefficientVector, filt="d6") -> np.ndarray:
    """Invert forward_dwt.  The filter must match the analysis filter."""
    wavelet = get_filter(filt)
    layout = coeffs.layout
    if layout.ndim != 1:
        raise ValueError("inverse_dwt expects 1-D layout; use inverse_dwt2")
    lo, hi = wavelet.filter_pair()

    by_key = {(b.level, b.orientation): b for b in layout.subbands}
    approx = coeffs.band_values(by_key[(layout.levels, "scaling")]).copy()
    for level in range(layout.levels, 0, -1):
        detail = coeffs.band_values(by_key[(level, "detail")])
        approx = _merge(approx, detail, lo, hi)
    return approx


# ---------------------------------------------------------------------------
# 2-D transforms (separable Mallat decomposition)
# ---------------------------------------------------------------------------

def forward_dwt2(image, filt="d6", levels: "int | None" = None) -> CoefficientVector:
    """Separable 2-D DWT: rows then columns at each level.

    Each level splits the running approximation into four quadrants; the
    three detail orientations are 'horizontal' (detail across rows, i.e.
    horizontal edges), 'vertical', and 'diagonal' (detail in both
    directions).  Flat storage is [approx, then per level coarsest->finest:
    horizontal, vertical, diagonal], each quadrant flattened row-major.
    """
    wavelet = get_filter(filt)
    img = _as_finite_array(image, 2)
    levels_r = _require_power_of_two(img.shape[0], "image rows")
    levels_c = _require_power_of_two(img.shape[1], "image cols")
    depth = _resolve_levels(levels, min(levels_r, levels_c))
    lo, hi = wavelet.filter_pair()

    approx = img
    details: list[dict[str, np.ndarray]] = []
    for _ in range(depth):
        low_x, high_x = _split(approx, lo, hi)
        approx, horiz = _split(low_x.T, lo, hi)
        approx = approx.T
        vert, diag = _split(high_x.T, lo, hi)
        details.append({
            "horizontal": horiz.T,
            "vertical": vert.T,
            "diagonal": diag.T,
        })

    bands = [Subband(depth, "approx", 0, approx.size, approx.shape)]
    chunks = [approx.ravel()]
    offset = approx.size
    for level in range(depth, 0, -1):
        for orientation in ("horizontal", "vertical", "diagonal"):
            quad = details[level - 1][orientation]
            bands.append(Subband(level, orientation, offset, quad.size, quad.shape))
            chunks.append(quad.ravel())
            offset += quad.size

    layout = SubbandLayout(
        subbands=tuple(bands),
        n=img.size,
        signal_shape=img.shape,
        levels=depth,
        filter_name=wavelet.name,
    )
    return CoefficientVector(np.concatenate(chunks), layout)


def inverse_dwt2(coeffs: CoefficientVector, filt="d6") -> np.ndarray:
    """Invert forward_dwt2."""
    wavelet = get_filter(filt)
    layout = coeffs.layout
    if layout.ndim != 2:
        raise ValueError("inverse_dwt2 expects 2-D layout; use inverse_dwt")
    lo, hi = wavelet.filter_pair()

    by_key = {(b.level, b.orientation): b for b in layout.subbands}

    def quad(level: int, orientation: str) -> np.ndarray:
        band = by_key[(level, orientation)]
        return coeffs.band_values(band).reshape(band.shape)

    approx = quad(layout.levels, "approx").copy()
    for level in range(layout.levels, 0, -1):
        horiz = quad(level, "horizontal")
        vert = quad(level, "vertical")
        diag = quad(level, "diagonal")
        low_x = _merge(approx.T, horiz.T, lo, hi).T
        high_x = _merge(vert.T, diag.T, lo, hi).T
        approx = _merge(low_x, high_x, lo, hi)
    return approx
