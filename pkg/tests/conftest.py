"""Shared fixtures: the expensive benchmark runs are computed once per session.

The piecewise-test-signal PSNR table and the natural-image runs are reused
by several acceptance criteria, so they live here with their wall-clock
cost attached (the criteria that own a time budget assert on it).
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from mdlshrink.bench import ExperimentSpec, run_experiment
from mdlshrink.denoiser import DenoiseConfig, mixture_weights, select_subband
from mdlshrink.wavelet import forward_dwt2


@pytest.fixture(scope="session")
def blocks_table():
    """All four selection variants on blocks (n=2048, d6, 15 reps).

    Returns ({(method, sigma): (mean_psnr, sd)}, elapsed_seconds).
    """
    spec = ExperimentSpec(
        signal="blocks",
        methods=("mdl-original", "mdl-a", "mdl-ab", "mdl-abc"),
        sigmas=(0.5, 1.0, 2.0),
        reps=15,
        seed=0,
        n=2048,
        filter_name="d6",
    )
    start = time.perf_counter()
    result = run_experiment(spec)
    elapsed = time.perf_counter() - start
    bad = [r for r in result.records if r.error]
    assert not bad, f"benchmark records failed: {bad[:3]}"
    return result.aggregates(), elapsed


@pytest.fixture(scope="session")
def camera_image():
    """256x256 crop of the scikit-image camera photograph, float 0..255."""
    from skimage import data

    return data.camera()[:256, :256].astype(float)


@pytest.fixture(scope="session")
def camera_runs(camera_image):
    """Image benchmark at noise SD 30: mixture variant vs flat vs universal.

    Returns ({(method, sigma): (mean_psnr, sd)}, elapsed_seconds).
    """
    spec = ExperimentSpec(
        signal=camera_image,
        methods=("mdl-abc", "mdl-original", "visu"),
        sigmas=(30.0,),
        reps=15,
        seed=0,
        signal_name="camera",
        filter_name="d6",
    )
    start = time.perf_counter()
    result = run_experiment(spec)
    elapsed = time.perf_counter() - start
    bad = [r for r in result.records if r.error]
    assert not bad, f"image benchmark records failed: {bad[:3]}"
    return result.aggregates(), elapsed


@pytest.fixture(scope="session")
def camera_mixture(camera_image):
    """Subband selection + mixture weights on the noiseless camera image.

    Returns (coeffs, selection, weights, config).
    """
    config = DenoiseConfig(variant="abc")
    coeffs = forward_dwt2(camera_image, config.filter_name)
    selection = select_subband(coeffs, config)
    weights = mixture_weights(coeffs, selection, config)
    assert np.all(np.isfinite(weights))
    return coeffs, selection, weights, config
