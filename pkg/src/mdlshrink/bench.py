"""Benchmark harness: test signals, seeded noise, PSNR, experiment runner.

The four classical piecewise test signals are generated from their
standard closed forms on the grid t_i = i/n.  Noise is drawn from
numpy's PCG64 generator seeded per repetition (seed = base + repetition),
so every record is reproducible in isolation and identical runs produce
identical results.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import bayesshrink, sureshrink, visushrink
from .denoiser import DenoiseConfig, denoise

__all__ = [
    "TEST_SIGNALS",
    "BENCH_METHODS",
    "CSV_HEADER",
    "generate_signal",
    "add_noise",
    "mse",
    "psnr",
    "ExperimentSpec",
    "BenchmarkRecord",
    "run_experiment",
    "aggregate",
    "write_csv",
]

TEST_SIGNALS = ("blocks", "bumps", "heavisine", "doppler")

BENCH_METHODS = (
    "mdl-original",
    "mdl-a",
    "mdl-ab",
    "mdl-abc",
    "visu",
    "visu-hard",
    "sure",
    "bayes",
)

CSV_HEADER = "method,signal,sigma,seed,psnr,mse,runtime_s,k_total"

_BLOCKS_POS = (0.1, 0.13, 0.15, 0.23, 0.25, 0.4, 0.44, 0.65, 0.76, 0.78, 0.81)
_BLOCKS_H = (4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2)
_BUMPS_H = (4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2)
_BUMPS_W = (0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005)


def _grid(n: int) -> np.ndarray:
    return np.arange(1, n + 1) / n


def _blocks(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    for pos, h in zip(_BLOCKS_POS, _BLOCKS_H):
        out += h * (1 + np.sign(t - pos)) / 2
    return out


def _bumps(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    for pos, h, w in zip(_BLOCKS_POS, _BUMPS_H, _BUMPS_W):
        out += h / (1 + np.abs((t - pos) / w)) ** 4
    return out


def _heavisine(t: np.ndarray) -> np.ndarray:
    return 4 * np.sin(4 * np.pi * t) - np.sign(t - 0.3) - np.sign(0.72 - t)


def _doppler(t: np.ndarray) -> np.ndarray:
    return np.sqrt(t * (1 - t)) * np.sin(2 * np.pi * 1.05 / (t + 0.05))


_GENERATORS = {
    "blocks": _blocks,
    "bumps": _bumps,
    "heavisine": _heavisine,
    "doppler": _doppler,
}


def generate_signal(name: str, n: int = 2048) -> np.ndarray:
    """One of blocks/bumps/heavisine/doppler on t_i = i/n.

    n must be a power of two >= 64 so the signal can feed the transforms
    with a sensible number of free subbands.
    """
    key = str(name).lower()
    if key not in _GENERATORS:
        known = ", ".join(TEST_SIGNALS)
        raise ValueError(f"unknown test signal {name!r} (known: {known})")
    if n < 64 or n & (n - 1):
        raise ValueError(f"signal length must be a power of two >= 64, got {n}")
    return _GENERATORS[key](_grid(n))


def add_noise(signal, sigma: float, seed: int) -> np.ndarray:
    """signal + sigma * N(0,1) draws from PCG64 seeded with `seed`."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    arr = np.asarray(signal, dtype=float)
    rng = np.random.default_rng(seed)
    return arr + sigma * rng.standard_normal(arr.shape)


def mse(reference, estimate) -> float:
    ref = np.asarray(reference, dtype=float)
    est = np.asarray(estimate, dtype=float)
    if ref.shape != est.shape:
        raise ValueError("reference and estimate shapes differ")
    return float(((ref - est) ** 2).mean())


def psnr(reference, estimate, peak_range: "float | None" = None) -> float:
    """10 log10(range^2 / MSE) in dB; +inf for an exact match.

    peak_range defaults to max - min of the reference (the 1-D signal
    convention); pass 255.0 for 8-bit images.
    """
    ref = np.asarray(reference, dtype=float)
    err = mse(ref, estimate)
    if peak_range is None:
        peak_range = float(ref.max() - ref.min())
    if peak_range <= 0:
        raise ValueError("reference has zero range; pass peak_range explicitly")
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(peak_range**2 / err)


@dataclass(frozen=True)
class ExperimentSpec:
    """What to run: data x methods x noise levels x repetitions.

    signal is a generator name (with `n` samples) or an actual 1-D/2-D
    array; signal_name labels the CSV rows when an array is supplied.
    rescale_sd, if set, rescales the clean signal to that sample standard
    deviation before any noise is added.
    """

    signal: "str | np.ndarray"
    methods: tuple[str, ...]
    sigmas: tuple[float, ...]
    reps: int = 15
    seed: int = 0
    n: int = 2048
    filter_name: str = "d6"
    signal_name: "str | None" = None
    rescale_sd: "float | None" = None

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise ValueError("need at least one repetition")
        if not self.methods:
            raise ValueError("need at least one method")
        for m in self.methods:
            if m not in BENCH_METHODS:
                raise ValueError(f"unknown method {m!r} (known: {', '.join(BENCH_METHODS)})")
        if not self.sigmas:
            raise ValueError("need at least one sigma")


@dataclass
class BenchmarkRecord:
    """One (method, sigma, repetition) outcome."""

    method: str
    signal: str
    sigma: float
    seed: int
    psnr: float
    mse: float
    runtime_s: float
    k_total: int
    error: "str | None" = None


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    records: list[BenchmarkRecord] = field(default_factory=list)

    def aggregates(self) -> dict[tuple[str, float], tuple[float, float]]:
        return aggregate(self.records)


def _clean_signal(spec: ExperimentSpec) -> tuple[np.ndarray, str]:
    if isinstance(spec.signal, str):
        clean = generate_signal(spec.signal, spec.n)
        name = spec.signal_name or spec.signal
    else:
        clean = np.asarray(spec.signal, dtype=float)
        name = spec.signal_name or "custom"
    if spec.rescale_sd is not None:
        sd = float(clean.std(ddof=1))
        if sd == 0:
            raise ValueError("cannot rescale a constant signal")
        clean = clean * (spec.rescale_sd / sd)
    return clean, name


def _run_method(method: str, noisy: np.ndarray, filter_name: str) -> tuple[np.ndarray, int]:
    if method.startswith("mdl-"):
        variant = method.removeprefix("mdl-")
        result = denoise(noisy, DenoiseConfig(variant=variant, filter_name=filter_name))
        return result.output, result.k_total
    if method == "visu":
        r = visushrink(noisy, filter_name, mode="soft")
    elif method == "visu-hard":
        r = visushrink(noisy, filter_name, mode="hard")
    elif method == "sure":
        r = sureshrink(noisy, filter_name)
    elif method == "bayes":
        r = bayesshrink(noisy, filter_name)
    else:
        raise ValueError(f"unknown method {method!r}")
    return r.output, r.k_total


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run the full grid; record every outcome, keep going on failures.

    Rows come out in (method, sigma, repetition) iteration order; the
    noise for repetition r uses seed spec.seed + r, so all methods and
    noise levels of a repetition share the same underlying draw.
    """
    clean, name = _clean_signal(spec)
    peak = 255.0 if clean.ndim == 2 else None
    result = ExperimentResult(spec=spec)
    for method in spec.methods:
        for sigma in spec.sigmas:
            for rep in range(spec.reps):
                seed = spec.seed + rep
                noisy = add_noise(clean, sigma, seed)
                start = time.perf_counter()
                try:
                    output, k_total = _run_method(method, noisy, spec.filter_name)
                    runtime = time.perf_counter() - start
                    record = BenchmarkRecord(
                        method=method,
                        signal=name,
                        sigma=float(sigma),
                        seed=seed,
                        psnr=psnr(clean, output, peak),
                        mse=mse(clean, output),
                        runtime_s=runtime,
                        k_total=k_total,
                    )
                except Exception as exc:  # noqa: BLE001 - a record must not kill the run
                    record = BenchmarkRecord(
                        method=method,
                        signal=name,
                        sigma=float(sigma),
                        seed=seed,
                        psnr=math.nan,
                        mse=math.nan,
                        runtime_s=time.perf_counter() - start,
                        k_total=-1,
                        error=f"{type(exc).__name__}: {exc}",
                    )
                result.records.append(record)
    return result


def aggregate(records) -> dict[tuple[str, float], tuple[float, float]]:
    """Mean and sample standard deviation (n-1) of PSNR per (method, sigma)."""
    groups: dict[tuple[str, float], list[float]] = {}
    for rec in records:
        groups.setdefault((rec.method, rec.sigma), []).append(rec.psnr)
    out = {}
    for key, values in groups.items():
        arr = np.asarray(values)
        sd = float(arr.std(ddof=1)) if arr.size > 1 else math.nan
        out[key] = (float(arr.mean()), sd)
    return out


def _fmt_float(x: float) -> str:
    return repr(float(x))


def write_csv(records, stream, timing: bool = False) -> None:
    """Emit the fixed-schema CSV.

    Every column except runtime_s is deterministic for a given spec; by
    default runtime_s is written as 0.000000 so identical runs produce
    byte-identical files, and real wall-clock numbers are opt-in.
    """
    stream.write(CSV_HEADER + "\n")
    for rec in records:
        runtime = f"{rec.runtime_s:.6f}" if timing else "0.000000"
        stream.write(
            f"{rec.method},{rec.signal},{_fmt_float(rec.sigma)},{rec.seed},"
            f"{_fmt_float(rec.psnr)},{_fmt_float(rec.mse)},{runtime},{rec.k_total}\n"
        )
