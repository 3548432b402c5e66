"""Orthonormal periodic wavelet transform: filters, layouts, round trips."""

from __future__ import annotations

import math

import numpy as np
import pytest

from mdlshrink.wavelet import (
    CoefficientVector,
    Subband,
    forward_dwt,
    forward_dwt2,
    free_subband_indices,
    get_filter,
    inverse_dwt,
    inverse_dwt2,
)

FILTERS = ("haar", "d4", "d6")


# ---------------------------------------------------------------------------
# filter banks
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", FILTERS)
def test_lowpass_tap_identities(name):
    taps = np.asarray(get_filter(name).lowpass)
    assert taps.sum() == pytest.approx(math.sqrt(2.0), rel=1e-14)
    assert (taps**2).sum() == pytest.approx(1.0, rel=1e-14)
    for shift in range(2, taps.size, 2):
        assert float(taps[:-shift] @ taps[shift:]) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("name", FILTERS)
def test_highpass_is_alternating_flip(name):
    filt = get_filter(name)
    lo, hi = filt.filter_pair()
    n = lo.size
    expected = [(-1.0) ** i * lo[n - 1 - i] for i in range(n)]
    np.testing.assert_allclose(hi, expected, rtol=0, atol=0)


def test_get_filter_unknown_name():
    with pytest.raises(ValueError, match="unknown wavelet filter"):
        get_filter("sym8")


def test_get_filter_passthrough():
    filt = get_filter("d4")
    assert get_filter(filt) is filt


# ---------------------------------------------------------------------------
# 1-D analysis: exactness, orthonormality, linearity
# ---------------------------------------------------------------------------

def test_haar_two_level_values():
    # averages/differences of [1,2,3,4]: coarse mean*2, coarse diff, fine diffs
    coeffs = forward_dwt([1.0, 2.0, 3.0, 4.0], "haar")
    expected = [5.0, -2.0, -1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0)]
    np.testing.assert_allclose(coeffs.values, expected, rtol=1e-12)


@pytest.mark.parametrize("name", FILTERS)
@pytest.mark.parametrize("n", [2, 4, 8, 64, 256])
def test_roundtrip_and_energy_1d(name, n):
    rng = np.random.default_rng(n)
    x = rng.standard_normal(n)
    coeffs = forward_dwt(x, name)
    assert float((coeffs.values**2).sum()) == pytest.approx(float((x**2).sum()), rel=1e-11)
    np.testing.assert_allclose(inverse_dwt(coeffs, name), x, rtol=0, atol=1e-11)


@pytest.mark.parametrize("name", FILTERS)
def test_analysis_matrix_is_orthonormal(name):
    n = 8
    rows = [forward_dwt(np.eye(n)[i], name).values for i in range(n)]
    w = np.asarray(rows).T  # column i = transform of e_i
    np.testing.assert_allclose(w.T @ w, np.eye(n), rtol=0, atol=1e-12)


@pytest.mark.parametrize("name", FILTERS)
def test_transform_linearity(name):
    rng = np.random.default_rng(5)
    x = rng.standard_normal(64)
    y = rng.standard_normal(64)
    a, b = 2.5, -1.25
    combo = forward_dwt(a * x + b * y, name).values
    parts = a * forward_dwt(x, name).values + b * forward_dwt(y, name).values
    np.testing.assert_allclose(combo, parts, rtol=0, atol=1e-9)


def test_partial_depth_roundtrip():
    rng = np.random.default_rng(9)
    x = rng.standard_normal(128)
    for levels in range(1, 8):
        coeffs = forward_dwt(x, "d4", levels=levels)
        assert coeffs.layout.levels == levels
        np.testing.assert_allclose(inverse_dwt(coeffs, "d4"), x, atol=1e-11)


def test_input_validation_1d():
    with pytest.raises(ValueError, match="power of two"):
        forward_dwt(np.ones(12))
    with pytest.raises(ValueError, match="levels"):
        forward_dwt(np.ones(16), levels=0)
    with pytest.raises(ValueError, match="levels"):
        forward_dwt(np.ones(16), levels=5)
    with pytest.raises(ValueError, match="non-finite"):
        forward_dwt([1.0, np.nan, 0.0, 2.0])
    with pytest.raises(ValueError, match="expected a 1-D"):
        forward_dwt(np.ones((4, 4)))


def test_inverse_rejects_mismatched_dimension():
    c1 = forward_dwt(np.ones(8))
    c2 = forward_dwt2(np.ones((8, 8)))
    with pytest.raises(ValueError, match="1-D layout"):
        inverse_dwt(c2)
    with pytest.raises(ValueError, match="2-D layout"):
        inverse_dwt2(c1)


# ---------------------------------------------------------------------------
# layouts
# ---------------------------------------------------------------------------

def test_layout_1d_order_and_partition():
    coeffs = forward_dwt(np.arange(16.0), "haar", levels=2)
    bands = coeffs.layout.subbands
    assert [(b.level, b.orientation, b.offset, b.length) for b in bands] == [
        (2, "scaling", 0, 4),
        (2, "detail", 4, 4),
        (1, "detail", 8, 8),
    ]
    # slices tile the vector exactly, in order
    rebuilt = np.concatenate([coeffs.band_values(b) for b in bands])
    np.testing.assert_array_equal(rebuilt, coeffs.values)


def test_layout_2d_order_and_partition():
    coeffs = forward_dwt2(np.arange(64.0).reshape(8, 8), "haar", levels=2)
    bands = coeffs.layout.subbands
    assert [(b.level, b.orientation, b.shape) for b in bands] == [
        (2, "approx", (2, 2)),
        (2, "horizontal", (2, 2)),
        (2, "vertical", (2, 2)),
        (2, "diagonal", (2, 2)),
        (1, "horizontal", (4, 4)),
        (1, "vertical", (4, 4)),
        (1, "diagonal", (4, 4)),
    ]
    assert sum(b.length for b in bands) == coeffs.layout.n == 64
    offsets = [b.offset for b in bands]
    assert offsets == sorted(offsets)
    assert coeffs.layout.ndim == 2


def test_finest_detail_band():
    sig = forward_dwt(np.ones(32), "haar")
    band = sig.layout.finest_detail()
    assert (band.level, band.orientation, band.length) == (1, "detail", 16)
    img = forward_dwt2(np.ones((16, 16)), "haar")
    band2 = img.layout.finest_detail()
    assert (band2.level, band2.orientation, band2.length) == (1, "diagonal", 64)


def test_free_subband_indices_cutoff():
    layout = forward_dwt(np.ones(2048), "d6").layout
    free = free_subband_indices(layout, 16)
    assert len(free) == 6
    lengths = [layout.subbands[i].length for i in free]
    assert lengths == [32, 64, 128, 256, 512, 1024]
    assert all(layout.subbands[i].is_detail for i in free)
    # the scaling band is never free, even with a tiny cutoff
    assert 0 not in free_subband_indices(layout, 0)


def test_coefficient_vector_validation():
    layout = forward_dwt(np.ones(8)).layout
    with pytest.raises(ValueError, match="do not match"):
        CoefficientVector(np.zeros(9), layout)


def test_subband_slice_and_detail_flag():
    band = Subband(level=1, orientation="detail", offset=4, length=4, shape=(4,))
    assert band.slice == slice(4, 8)
    assert band.is_detail
    approx = Subband(level=3, orientation="approx", offset=0, length=4, shape=(2, 2))
    assert not approx.is_detail


# ---------------------------------------------------------------------------
# 2-D analysis
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", FILTERS)
@pytest.mark.parametrize("shape", [(8, 8), (16, 32), (32, 32)])
def test_roundtrip_and_energy_2d(name, shape):
    rng = np.random.default_rng(shape[0] * 100 + shape[1])
    img = rng.standard_normal(shape)
    coeffs = forward_dwt2(img, name)
    assert float((coeffs.values**2).sum()) == pytest.approx(float((img**2).sum()), rel=1e-11)
    np.testing.assert_allclose(inverse_dwt2(coeffs, name), img, rtol=0, atol=1e-10)


def test_2d_depth_limited_by_smaller_side():
    coeffs = forward_dwt2(np.ones((8, 64)), "haar")
    assert coeffs.layout.levels == 3
    with pytest.raises(ValueError, match="levels"):
        forward_dwt2(np.ones((8, 64)), "haar", levels=4)
