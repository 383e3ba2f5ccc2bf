"""Uniform quantizer with an effective-number-of-bits noise model."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidCode


def round_half_away(x):
    """Round to the nearest integer with ties away from zero.

    np.round ties to even; the converter model needs a fixed directional
    rule so code values are reproducible bit for bit.
    """
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


@dataclass(frozen=True)
class QuantizerSpec:
    """Bit depth, full-scale range and optional ENOB of one converter.

    Codes 0 .. 2**bits - 1 map linearly onto [v_min, v_max] with both
    endpoints representable, so the step is (v_max - v_min) / (2**bits - 1).
    """

    bits: int
    v_min: float
    v_max: float
    enob: float | None = None

    def __post_init__(self):
        if not 1 <= self.bits <= 32:
            raise ValueError("bits must be in [1, 32]")
        if not self.v_max > self.v_min:
            raise ValueError("v_max must exceed v_min")
        if self.enob is not None and not 0.0 < self.enob <= self.bits:
            raise ValueError("enob must be in (0, bits]")

    @property
    def max_code(self) -> int:
        return (1 << self.bits) - 1

    @property
    def lsb(self) -> float:
        return (self.v_max - self.v_min) / self.max_code

    def noise_rms(self) -> float:
        """Input-referred Gaussian noise rms implied by the ENOB.

        Sized so a full-scale sine through the quantizer reads
        SINAD = 6.02 * enob + 1.76 dB (within a millidecibel; the step-based
        form is used so enob == bits yields exactly zero noise).
        """
        if self.enob is None:
            return 0.0
        span = self.v_max - self.v_min
        q_eff = span / (2.0 ** self.enob - 1.0)
        q_raw = span / self.max_code
        return math.sqrt(max(q_eff * q_eff - q_raw * q_raw, 0.0) / 12.0)


def quantize_uniform(v, spec: QuantizerSpec, rng: np.random.Generator | None = None):
    """Convert volts to integer codes, saturating at the rails.

    With an ENOB present the calibrated Gaussian noise is added first and
    rng is required; without one (or with enob == bits) the conversion is
    bit-deterministic and no random numbers are consumed.

    Accepts a scalar or an array; returns an int or an int64 array.
    """
    scalar = np.isscalar(v)
    v = np.asarray(v, dtype=np.float64)
    sigma = spec.noise_rms()
    if sigma > 0.0:
        if rng is None:
            raise ValueError("quantizer with ENOB noise requires an rng")
        v = v + rng.normal(0.0, sigma, size=v.shape)
    scaled = (v - spec.v_min) / (spec.v_max - spec.v_min) * spec.max_code
    codes = np.clip(round_half_away(scaled), 0, spec.max_code).astype(np.int64)
    return int(codes) if scalar else codes


def dequantize(code, spec: QuantizerSpec):
    """Map integer codes back to volts; rejects out-of-range codes."""
    scalar = np.isscalar(code)
    codes = np.asarray(code)
    if codes.size and (codes.min() < 0 or codes.max() > spec.max_code):
        raise InvalidCode(f"code outside [0, {spec.max_code}]")
    v = spec.v_min + codes.astype(np.float64) * (spec.v_max - spec.v_min) / spec.max_code
    return float(v) if scalar else v
