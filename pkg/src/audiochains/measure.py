"""Chain characterization: MLS impulse-response latency, THD and THD+N.

Latency comes from the impulse response recovered by circular
cross-correlation against a repeated maximum-length sequence; the first
period is discarded as warm-up and the rest are averaged.  The sequence's
two-valued autocorrelation makes the raw correlation R a scaled copy of the
impulse response sitting on a uniform background (the DC-gain term plus any
standing output offset leaking through the sequence's +/-1 imbalance), so

    h[tau] = (R[tau] - median(R)) / ((L + 1) * amplitude**2)

is exact for any affine time-invariant system whose response is sparse
relative to the period and settles within it; an identity system yields a
unit impulse at lag zero.

THD integrates each harmonic's power over +/-3 bins of a Hann-windowed
spectrum (ENBW-corrected) and ratios it against the fundamental band.  For
THD+N the fundamental (and DC) is removed exactly by a least-squares
sin/cos fit at the stated frequency; binwise notching would leave window
sidelobe leakage of the fundamental in the residual, putting a floor well
above the quantization-level residuals this suite has to resolve.  The
analysis window is first trimmed to a whole number of fundamental cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EmptySignal, FundamentalNotFound, NoPeak, TruncatedResponse
from .mls import MlsConfig, generate_mls
from .signals import Signal
from .spectrum import window_samples

SystemTransform = Callable[[Signal], Signal]

HARMONIC_HALF_BINS = 3
MAX_HARMONICS = 20
_FLOOR = 1e-300


@dataclass(frozen=True)
class LatencyReport:
    latency_seconds: float
    peak_sample_index: int
    peak_to_noise_db: float


@dataclass(frozen=True)
class DistortionReport:
    fundamental_hz: float
    fundamental_power_dbv: float
    thd_db: float
    thdn_db: float
    harmonic_levels: tuple[tuple[int, float], ...]


def measure_impulse_response(
    system: SystemTransform, cfg: MlsConfig, periods: int = 4
) -> Signal:
    """Impulse response of `system` via repeated-MLS cross-correlation."""
    if periods < 2:
        raise ValueError("need at least 2 periods (the first is discarded)")
    probe = generate_mls(cfg)
    length = len(probe)
    stimulus = Signal(np.tile(probe.samples, periods), cfg.sample_rate)
    response = system(stimulus)
    if len(response) < periods * length:
        raise TruncatedResponse(
            f"system returned {len(response)} of {periods * length} samples"
        )
    steady = response.samples[length : periods * length].reshape(periods - 1, length)
    y = steady.mean(axis=0)

    spec_y = np.fft.rfft(y)
    spec_s = np.fft.rfft(probe.samples)
    corr = np.fft.irfft(spec_y * np.conj(spec_s), n=length)
    h = (corr - np.median(corr)) / ((length + 1) * cfg.amplitude**2)
    return Signal(h, cfg.sample_rate)


def estimate_latency(ir: Signal) -> LatencyReport:
    """Nearest-sample latency from the impulse-response peak."""
    if len(ir) == 0:
        raise EmptySignal("empty impulse response")
    magnitude = np.abs(ir.samples)
    if not magnitude.any():
        raise NoPeak("impulse response is identically zero")
    peak = int(np.argmax(magnitude))
    keep = np.ones(len(ir), dtype=bool)
    keep[max(peak - 8, 0) : peak + 9] = False
    if keep.any():
        noise_rms = float(np.sqrt(np.mean(ir.samples[keep] ** 2)))
    else:
        noise_rms = 0.0
    if noise_rms > 0.0:
        peak_to_noise = 20.0 * np.log10(magnitude[peak] / noise_rms)
    else:
        peak_to_noise = np.inf
    return LatencyReport(
        latency_seconds=peak / ir.sample_rate,
        peak_sample_index=peak,
        peak_to_noise_db=float(peak_to_noise),
    )


def _trim_whole_cycles(sig: Signal, fundamental_hz: float) -> np.ndarray:
    n = len(sig)
    cycles = int(np.floor((n - 1) * fundamental_hz / sig.sample_rate))
    if cycles < 10:
        raise ValueError("signal must span at least 10 fundamental periods")
    n_trim = int(round(cycles * sig.sample_rate / fundamental_hz))
    while n_trim > n:
        cycles -= 1
        n_trim = int(round(cycles * sig.sample_rate / fundamental_hz))
    return sig.samples[:n_trim]


def _analyze(sig: Signal, fundamental_hz: float, max_harmonics: int) -> DistortionReport:
    if len(sig) == 0:
        raise EmptySignal("cannot analyze an empty signal")
    if not 0.0 < fundamental_hz < sig.sample_rate / 2.0:
        raise ValueError("fundamental must lie below Nyquist")
    fs = sig.sample_rate
    x = _trim_whole_cycles(sig, fundamental_hz)
    n = len(x)

    # Exact fundamental + DC removal: residual power is all harmonics+noise.
    t = np.arange(n) / fs
    basis = np.column_stack(
        [np.ones(n), np.cos(2 * np.pi * fundamental_hz * t), np.sin(2 * np.pi * fundamental_hz * t)]
    )
    coef, *_ = np.linalg.lstsq(basis, x, rcond=None)
    residual = x - basis @ coef
    p1_fit = (coef[1] ** 2 + coef[2] ** 2) / 2.0
    if p1_fit <= 0.0:
        raise FundamentalNotFound("no energy at the stated fundamental")
    thdn_db = 10.0 * np.log10(max(float(np.mean(residual**2)), _FLOOR) / p1_fit)

    # Banded harmonic powers from one Hann-windowed spectrum.
    w = window_samples("hann", n)
    coherent_gain = w.sum()
    enbw_bins = n * float(np.sum(w * w)) / coherent_gain**2
    spec = np.fft.rfft((x - x.mean()) * w)
    powers = 2.0 * np.abs(spec) ** 2 / coherent_gain**2
    powers[0] /= 2.0

    def band(freq: float) -> float:
        center = int(round(freq * n / fs))
        lo = max(center - HARMONIC_HALF_BINS, 0)
        hi = min(center + HARMONIC_HALF_BINS, len(powers) - 1)
        return float(powers[lo : hi + 1].sum()) / enbw_bins

    fundamental_bin = int(round(fundamental_hz * n / fs))
    search = powers.copy()
    search[: HARMONIC_HALF_BINS + 1] = 0.0  # ignore the DC main lobe
    peak_bin = int(np.argmax(search))
    if abs(peak_bin - fundamental_bin) > HARMONIC_HALF_BINS:
        raise FundamentalNotFound(
            f"spectrum peak at bin {peak_bin}, fundamental at bin {fundamental_bin}"
        )

    p1_band = band(fundamental_hz)
    harmonic_levels = []
    harmonic_power = 0.0
    k = 2
    while k <= max_harmonics:
        freq = k * fundamental_hz
        if freq * n / fs > len(powers) - 1 - HARMONIC_HALF_BINS:
            break  # band would cross Nyquist
        p_k = band(freq)
        harmonic_power += p_k
        harmonic_levels.append((k, 10.0 * np.log10(max(p_k, _FLOOR) / p1_band)))
        k += 1
    thd_db = 10.0 * np.log10(max(harmonic_power, _FLOOR) / p1_band)

    return DistortionReport(
        fundamental_hz=fundamental_hz,
        fundamental_power_dbv=10.0 * np.log10(p1_fit),
        thd_db=float(thd_db),
        thdn_db=float(thdn_db),
        harmonic_levels=tuple(harmonic_levels),
    )


def measure_thd(
    sig: Signal, fundamental_hz: float, max_harmonics: int = MAX_HARMONICS
) -> DistortionReport:
    """Harmonic-to-fundamental power ratio in dB (see module docstring)."""
    return _analyze(sig, fundamental_hz, max_harmonics)


def measure_thdn(sig: Signal, fundamental_hz: float) -> DistortionReport:
    """Everything-but-the-fundamental to fundamental power ratio in dB."""
    return _analyze(sig, fundamental_hz, MAX_HARMONICS)
