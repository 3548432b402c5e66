"""MDL wavelet denoising.

Selects wavelet coefficients by minimizing a normalized-maximum-likelihood
code length (flat, index-aware, and per-subband variants, plus posterior
mixture shrinkage) and ships the classical VisuShrink / SureShrink /
BayesShrink baselines and a PSNR benchmark harness for comparison.
"""

from .baselines import (
    NoiseEstimate,
    ThresholdResult,
    bayesshrink,
    estimate_sigma,
    hard_threshold,
    soft_threshold,
    sureshrink,
    visushrink,
)
from .bench import (
    BenchmarkRecord,
    ExperimentSpec,
    add_noise,
    aggregate,
    generate_signal,
    mse,
    psnr,
    run_experiment,
    write_csv,
)
from .codelength import (
    DegenerateModelError,
    NormalizerBounds,
    OutOfSupportError,
    SquareStats,
    SubbandStats,
    cluster_cost,
    constrained_normalizer_ratio,
    criterion_flat,
    criterion_flat_with_index,
    criterion_subband,
    exact_codelength_flat,
    exact_flat_constant,
    log_binomial,
)
from .denoiser import (
    DenoiseConfig,
    DenoiseResult,
    Selection,
    denoise,
    mixture_weights,
    select_flat,
    select_subband,
)
from .wavelet import (
    CoefficientVector,
    Subband,
    SubbandLayout,
    WaveletFilter,
    forward_dwt,
    forward_dwt2,
    get_filter,
    inverse_dwt,
    inverse_dwt2,
)

__version__ = "0.1.0"
