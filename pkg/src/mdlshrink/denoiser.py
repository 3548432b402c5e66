"""MDL coefficient selection and denoising.

Four variants of the same idea: keep the wavelet coefficients whose
retention shortens the normalized-maximum-likelihood code length of the
whole coefficient vector, zero (or shrink) the rest.

* original - flat two-cluster criterion, no mask-index cost, k in [1, n-1]
* a        - adds the mask-index cost and the 0.95 retention cap, which
             removes the high-noise overfitting collapse
* ab       - per-subband variances optimized by coordinate descent
* abc      - same selection, but coefficients are scaled by posterior
             odds instead of being kept/killed outright

Subbands at or below the coarseness cutoff (16 coefficients by default),
and the scaling/approximation subband always, are frozen: they are always
retained.  The flat criteria treat them as forced members of the retained
class (they count toward k and the retained energy); the per-subband
criterion optimizes only the free subbands, to which frozen subbands
would add selection-independent terms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .codelength import cluster_cost, log_binomial
from .wavelet import (
    CoefficientVector,
    SubbandLayout,
    forward_dwt,
    forward_dwt2,
    free_subband_indices,
    inverse_dwt,
    inverse_dwt2,
)

__all__ = [
    "DenoiseConfig",
    "FlatSelection",
    "Selection",
    "DenoiseResult",
    "select_flat",
    "select_subband",
    "mixture_weights",
    "denoise",
]

_VARIANTS = ("original", "a", "ab", "abc")


@dataclass(frozen=True)
class DenoiseConfig:
    """Knobs for `denoise`.

    levels=None means full decomposition depth.  The cap fraction bounds
    the retained share of the model space being scanned — the whole
    vector for variant a, each free subband for ab/abc; variant original
    deliberately runs uncapped (that is its failure mode).  Coordinate
    descent stops when a sweep changes nothing or after max_iterations
    sweeps.
    """

    variant: str = "abc"
    filter_name: str = "d6"
    levels: "int | None" = None
    coarse_cutoff: int = 16
    k_cap_fraction: float = 0.95
    max_iterations: int = 50

    def __post_init__(self) -> None:
        if self.variant not in _VARIANTS:
            raise ValueError(f"variant must be one of {_VARIANTS}, got {self.variant!r}")
        if not 0.0 < self.k_cap_fraction <= 1.0:
            raise ValueError("k_cap_fraction must be in (0, 1]")
        if self.coarse_cutoff < 0:
            raise ValueError("coarse_cutoff must be >= 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class FlatSelection:
    """Result of a flat top-k scan over the free coefficients.

    k counts retained FREE coefficients only; frozen coefficients are
    forced members of the retained class inside the criterion but are
    reported separately (the retained mask is False there — callers OR
    the frozen positions back in).
    """

    k: int
    retained: np.ndarray  # bool, same length as the scanned vector
    code_length: float
    warning: "str | None" = None


@dataclass
class Selection:
    """A retained/discarded split of a full coefficient vector.

    retained covers frozen coefficients too (always True there);
    k_by_band is aligned with layout.subbands and reports n_b for frozen
    bands.  update_log holds (before, after, incumbent_in_scan) criterion
    totals for every coordinate update of the subband optimizer; whenever
    incumbent_in_scan is True the scan included the incumbent count, so
    after <= before exactly.  It is False only on a band's first visit
    while its initial fully-retained count still exceeds the per-band
    cap — that update projects the band into the feasible range and may
    raise the objective.
    """

    retained: np.ndarray
    free_mask: np.ndarray
    free_bands: tuple[int, ...]
    k_by_band: tuple[int, ...]
    code_length: float
    sweeps: int = 0
    converged: bool = True
    update_log: tuple[tuple[float, float, bool], ...] = ()
    objective_trace: tuple[float, ...] = ()
    warning: "str | None" = None

    @property
    def k_free_total(self) -> int:
        return int(self.retained[self.free_mask].sum())


@dataclass
class DenoiseResult:
    """Denoised data plus the selection diagnostics that produced it."""

    output: np.ndarray
    variant: str
    selection: Selection
    weights: "np.ndarray | None"
    k_total: int
    code_length: float
    sweeps: int
    converged: bool

    @property
    def k_by_band(self) -> tuple[int, ...]:
        return self.selection.k_by_band


def _magnitude_order(values: np.ndarray) -> np.ndarray:
    """Indices sorting by |value| descending, ties broken by lower index."""
    return np.argsort(-np.abs(values), kind="stable")


def _prefix_suffix(sorted_sq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """prefix[k] = top-k sum, suffix[k] = remainder, both length m+1.

    The suffix is accumulated from the small end directly rather than by
    subtraction, so an all-zero tail is exactly zero.
    """
    prefix = np.concatenate(([0.0], np.cumsum(sorted_sq)))
    suffix = np.concatenate((np.cumsum(sorted_sq[::-1])[::-1], [0.0]))
    return prefix, suffix


def select_flat(
    values,
    include_index_cost: bool = True,
    cap: "float | None" = 0.95,
    free: "np.ndarray | None" = None,
) -> FlatSelection:
    """Minimize the flat criterion, retaining the j largest free |c|.

    The criterion models the whole vector: frozen coefficients (where the
    free mask is False) are forced members of the retained class, adding
    their count and energy to its statistics, while only free
    coefficients are candidates for discarding.  The scan covers
    j = j_lo .. min(m-1, floor(cap*n) - n_frozen) retained free
    coefficients, where j_lo is 0 when anything is frozen and 1
    otherwise (both classes must be non-empty); among equal minima the
    smallest j wins.  At fixed j the criterion is minimized at an
    extreme of the attainable retained energy, so with nothing frozen
    the magnitude scan is exhaustive over all subsets.  An all-zero pool
    yields an empty selection with a warning.
    """
    vec = np.asarray(values, dtype=float)
    if vec.ndim != 1:
        raise ValueError("select_flat expects a flat coefficient vector")
    if free is None:
        free = np.ones(vec.size, dtype=bool)
    free = np.asarray(free, dtype=bool)
    if free.shape != vec.shape:
        raise ValueError("free mask must match the coefficient vector")

    retained = np.zeros(vec.size, dtype=bool)
    free_positions = np.flatnonzero(free)
    n = vec.size
    m = free_positions.size
    k0 = n - m  # frozen count, forced into the retained class
    s0 = float((vec[~free] ** 2).sum())
    if m < 2:
        return FlatSelection(0, retained, math.inf, warning="fewer than two free coefficients")

    pool = vec[free_positions]
    order = _magnitude_order(pool)
    sorted_sq = pool[order] ** 2
    if sorted_sq.sum() == 0.0:
        return FlatSelection(0, retained, math.inf, warning="all free coefficients are zero")
    prefix, suffix = _prefix_suffix(sorted_sq)

    cap_fraction = 1.0 if cap is None else float(cap)
    if not 0.0 < cap_fraction <= 1.0:
        raise ValueError("cap must be in (0, 1] or None")
    j_lo = 0 if k0 >= 1 else 1
    j_hi = min(m - 1, int(math.floor(cap_fraction * n)) - k0)
    if j_hi < j_lo:
        return FlatSelection(0, retained, math.inf, warning="no admissible split")
    j_arr = np.arange(j_lo, j_hi + 1)
    k_arr = k0 + j_arr
    ret = s0 + prefix[j_lo : j_hi + 1]
    noi = suffix[j_lo : j_hi + 1]

    if include_index_cost:
        nk = n - k_arr
        valid = (ret > 0) & (noi > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = 0.5 * nk * np.log(noi / nk.astype(float) ** 3) + 0.5 * k_arr * np.log(
                ret / k_arr.astype(float) ** 3
            )
        vals = np.where(valid, vals, np.inf)
    else:
        vals = cluster_cost(k_arr, ret) + cluster_cost(n - k_arr, noi)

    if not np.any(np.isfinite(vals)):
        return FlatSelection(0, retained, math.inf, warning="no admissible split")

    best = int(np.argmin(vals))
    j = int(j_arr[best])
    retained[free_positions[order[:j]]] = True
    return FlatSelection(j, retained, float(vals[best]), warning=None)


# ---------------------------------------------------------------------------
# per-subband coordinate descent
# ---------------------------------------------------------------------------

@dataclass
class _BandState:
    index: int          # position in layout.subbands
    offset: int
    n: int
    order: np.ndarray   # within-band indices, |c| descending
    prefix: np.ndarray
    suffix: np.ndarray
    k: int = 0

    @property
    def retained_sq(self) -> float:
        return float(self.prefix[self.k])

    @property
    def discarded_sq(self) -> float:
        return float(self.suffix[self.k])

    def term(self) -> float:
        return float(cluster_cost(self.k, self.prefix[self.k])) + log_binomial(self.n, self.k)


def _band_states(coeffs: CoefficientVector, free_bands: list[int]) -> list["_BandState"]:
    states = []
    for idx in free_bands:
        band = coeffs.layout.subbands[idx]
        vals = coeffs.band_values(band)
        order = _magnitude_order(vals)
        prefix, suffix = _prefix_suffix(vals[order] ** 2)
        states.append(_BandState(idx, band.offset, band.length, order, prefix, suffix))
    return states


def _selection_from_states(
    coeffs: CoefficientVector,
    states: list["_BandState"],
    free_mask: np.ndarray,
    free_bands: tuple[int, ...],
    **extra,
) -> Selection:
    layout = coeffs.layout
    retained = ~free_mask  # frozen coefficients stay
    k_by_band = [band.length for band in layout.subbands]
    for st in states:
        keep = st.order[: st.k]
        retained[st.offset + keep] = True
        k_by_band[st.index] = st.k
    pool_k = sum(st.n - st.k for st in states)
    pool_sq = sum(st.discarded_sq for st in states)
    code = sum(st.term() for st in states) + float(cluster_cost(pool_k, pool_sq))
    return Selection(
        retained=retained,
        free_mask=free_mask,
        free_bands=free_bands,
        k_by_band=tuple(k_by_band),
        code_length=code,
        **extra,
    )


def _free_coefficient_mask(layout: SubbandLayout, free_bands: list[int]) -> np.ndarray:
    mask = np.zeros(layout.n, dtype=bool)
    for idx in free_bands:
        mask[layout.subbands[idx].slice] = True
    return mask


def select_subband(coeffs: CoefficientVector, config: DenoiseConfig) -> Selection:
    """Coordinate-descent minimization of the per-subband criterion.

    Every free subband starts fully retained and is re-optimized in
    turn, finest subband first, against the criterion with all other
    counts held fixed; each scan is O(n_b) thanks to prefix / suffix
    sums.  The retention cap applies per band (k_b <= cap * n_b): full
    retention of a band zeroes its index cost and lets pure noise pose
    as maximally regular data, the same near-k=n failure the cap guards
    against in the flat variants.  A band's incumbent count therefore
    exceeds the cap on its first visit only, the one update allowed to
    raise the objective; every later scan includes the incumbent, so
    from then on the objective never increases.  Stops when a sweep
    changes nothing.
    """
    layout = coeffs.layout
    free_bands = free_subband_indices(layout, config.coarse_cutoff)
    free_mask = _free_coefficient_mask(layout, free_bands)

    if not free_bands:
        return Selection(
            retained=np.ones(layout.n, dtype=bool),
            free_mask=free_mask,
            free_bands=(),
            k_by_band=tuple(b.length for b in layout.subbands),
            code_length=0.0,
            warning="no free subbands at this size",
        )

    states = _band_states(coeffs, free_bands)
    if sum(st.suffix[0] for st in states) == 0.0:
        for st in states:
            st.k = 0
        return _selection_from_states(
            coeffs, states, free_mask, tuple(free_bands),
            warning="all free coefficients are zero",
        )

    for st in states:
        st.k = st.n

    # finest-first visiting order: reversed layout order within the free set
    visit = sorted(states, key=lambda st: st.offset, reverse=True)

    update_log: list[tuple[float, float, bool]] = []
    trace: list[float] = []

    def objective() -> float:
        pool_k = sum(st.n - st.k for st in states)
        pool_sq = sum(st.discarded_sq for st in states)
        return sum(st.term() for st in states) + float(cluster_cost(pool_k, pool_sq))

    trace.append(objective())

    sweeps = 0
    converged = False
    while sweeps < config.max_iterations:
        sweeps += 1
        changed = False
        for st in visit:
            others_term = sum(s.term() for s in states if s is not st)
            pool_k_other = sum(s.n - s.k for s in states if s is not st)
            pool_sq_other = sum(s.discarded_sq for s in states if s is not st)

            before = others_term + st.term() + float(
                cluster_cost(pool_k_other + (st.n - st.k), pool_sq_other + st.discarded_sq)
            )
            kmax = int(math.floor(config.k_cap_fraction * st.n))
            in_scan = st.k <= kmax
            k_arr = np.arange(0, kmax + 1)
            band_vals = cluster_cost(k_arr, st.prefix[: kmax + 1]) + log_binomial(st.n, k_arr)
            pool_vals = cluster_cost(
                pool_k_other + (st.n - k_arr), pool_sq_other + st.suffix[: kmax + 1]
            )
            totals = others_term + band_vals + pool_vals

            if not np.any(np.isfinite(totals)):
                update_log.append((before, before, in_scan))
                trace.append(before)
                continue
            choice = int(np.argmin(totals))
            after = float(totals[choice])
            update_log.append((before, after, in_scan))
            trace.append(after)
            if choice != st.k:
                st.k = choice
                changed = True
        if not changed:
            converged = True
            break

    return _selection_from_states(
        coeffs, states, free_mask, tuple(free_bands),
        sweeps=sweeps,
        converged=converged,
        update_log=tuple(update_log),
        objective_trace=tuple(trace),
        warning=None if converged else "coordinate descent hit the sweep limit",
    )


# ---------------------------------------------------------------------------
# mixture shrinkage weights
# ---------------------------------------------------------------------------

def mixture_weights(
    coeffs: CoefficientVector, selection: Selection, config: DenoiseConfig
) -> np.ndarray:
    """Posterior-odds shrinkage weight for every coefficient.

    For coefficient i, r_i is the posterior probability ratio of the two
    masks that differ from the selected one only at i (in vs out), with
    mask probabilities proportional to exp(-code length); the weight is
    r_i/(1+r_i).  Weights are 1 on frozen coefficients, and saturate to
    exactly 0/1 when the code-length difference passes +-700 nats.

    A band whose incumbent code length is not finite (an exactly-zero
    discard pool makes the criterion degenerate) has no defined posterior
    odds; such a band falls back to its hard selection (weights 0/1).
    """
    layout = coeffs.layout
    weights = np.ones(layout.n, dtype=float)

    # current per-band and pool statistics under the selection
    band_stats: list[tuple[int, int, float]] = []  # (band index, k_b, S_b)
    pool_k = 0
    pool_sq = 0.0
    for idx in selection.free_bands:
        band = layout.subbands[idx]
        vals = coeffs.band_values(band)
        kept = selection.retained[band.slice]
        k_b = int(kept.sum())
        s_b = float((vals[kept] ** 2).sum())
        band_stats.append((idx, k_b, s_b))
        pool_k += band.length - k_b
        pool_sq += float((vals[~kept] ** 2).sum())

    pool_term = float(cluster_cost(pool_k, pool_sq))

    for idx, k_b, s_b in band_stats:
        band = layout.subbands[idx]
        vals = coeffs.band_values(band)
        kept = selection.retained[band.slice]
        c2 = vals**2
        base = float(cluster_cost(k_b, s_b)) + log_binomial(band.length, k_b) + pool_term
        if not math.isfinite(base):
            weights[band.slice] = kept.astype(float)
            continue

        delta = np.empty(band.length, dtype=float)
        with np.errstate(invalid="ignore"):
            if np.any(kept):
                c2_in = c2[kept]
                drop_band = cluster_cost(k_b - 1, np.maximum(s_b - c2_in, 0.0)) + log_binomial(
                    band.length, k_b - 1
                )
                drop_pool = cluster_cost(pool_k + 1, pool_sq + c2_in)
                delta[kept] = (drop_band + drop_pool) - base
            if np.any(~kept):
                c2_out = c2[~kept]
                add_band = cluster_cost(k_b + 1, s_b + c2_out) + log_binomial(
                    band.length, k_b + 1
                )
                add_pool = cluster_cost(pool_k - 1, np.maximum(pool_sq - c2_out, 0.0))
                delta[~kept] = base - (add_band + add_pool)

        w = expit(np.clip(delta, -745.0, 745.0))
        w = np.where(delta > 700.0, 1.0, np.where(delta < -700.0, 0.0, w))
        # an indeterminate difference (inf - inf) falls back to hard selection
        w = np.where(np.isnan(delta), kept.astype(float), w)
        weights[band.slice] = w

    return weights


# ---------------------------------------------------------------------------
# top-level entry point
# ---------------------------------------------------------------------------

def denoise(data, config: "DenoiseConfig | None" = None) -> DenoiseResult:
    """Transform, select (and possibly reweight), reconstruct.

    Accepts a 1-D signal or a 2-D image (power-of-two sizes).  Dispatches
    on config.variant; see the module docstring for what each variant does.
    """
    if config is None:
        config = DenoiseConfig()
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        coeffs = forward_dwt(arr, config.filter_name, config.levels)
        invert = inverse_dwt
    elif arr.ndim == 2:
        coeffs = forward_dwt2(arr, config.filter_name, config.levels)
        invert = inverse_dwt2
    else:
        raise ValueError("denoise expects a 1-D signal or 2-D image")

    layout = coeffs.layout
    free_bands = free_subband_indices(layout, config.coarse_cutoff)
    free_mask = _free_coefficient_mask(layout, free_bands)

    if config.variant in ("original", "a"):
        with_index = config.variant == "a"
        cap = config.k_cap_fraction if with_index else None
        flat = select_flat(
            coeffs.values, include_index_cost=with_index, cap=cap, free=free_mask
        )
        if flat.warning:
            warnings.warn(flat.warning, stacklevel=2)
        retained = flat.retained | ~free_mask
        k_by_band = []
        for band in layout.subbands:
            k_by_band.append(int(retained[band.slice].sum()))
        selection = Selection(
            retained=retained,
            free_mask=free_mask,
            free_bands=tuple(free_bands),
            k_by_band=tuple(k_by_band),
            code_length=flat.code_length,
            warning=flat.warning,
        )
    else:
        selection = select_subband(coeffs, config)
        if selection.warning:
            warnings.warn(selection.warning, stacklevel=2)

    if config.variant == "abc":
        weights = mixture_weights(coeffs, selection, config)
        out_values = coeffs.values * weights
    else:
        weights = None
        out_values = np.where(selection.retained, coeffs.values, 0.0)

    output = invert(CoefficientVector(out_values, layout), config.filter_name)
    return DenoiseResult(
        output=output,
        variant=config.variant,
        selection=selection,
        weights=weights,
        k_total=selection.k_free_total,
        code_length=selection.code_length,
        sweeps=selection.sweeps,
        converged=selection.converged,
    )
