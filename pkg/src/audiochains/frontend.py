"""Three-stage analog conditioning in front of the SAR ADC.

Stage 1 AC-couples the input and re-centers it on the mid-supply bias,
stage 2 is a second-order Sallen-Key low-pass (anti-aliasing), and the
rail-to-rail output stage clamps a few tens of millivolts inside the
supplies.  Filters are discretized at the signal's own rate: the biquad by
bilinear transform with frequency prewarping, the coupling pole by an exact
one-pole recurrence (its sub-hertz corner would otherwise underflow).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .errors import DamageVoltage
from .signals import Signal


@dataclass(frozen=True)
class FrontEndConfig:
    bias_voltage: float = 1.65
    coupling_cutoff: float = 0.040
    sallen_key_cutoff: float = 40000.0
    sallen_key_q: float = 0.7071
    rail_low: float = 0.030
    rail_high: float = 3.270
    damage_low: float = -0.2
    damage_high: float = 3.5

    def __post_init__(self):
        if not 0.0 < self.coupling_cutoff < self.sallen_key_cutoff:
            raise ValueError("coupling cutoff must sit below the low-pass cutoff")
        if not self.rail_low < self.bias_voltage < self.rail_high:
            raise ValueError("bias must lie between the output rails")
        if not (self.damage_low < self.rail_low and self.damage_high > self.rail_high):
            raise ValueError("damage limits must lie outside the rails")
        if self.sallen_key_q <= 0:
            raise ValueError("filter Q must be positive")


def highpass_coeffs(cutoff: float, sample_rate: float) -> tuple[np.ndarray, np.ndarray]:
    """DC-blocker b, a with the pole matched to exp(-2*pi*fc/fs)."""
    p = math.exp(-2.0 * math.pi * cutoff / sample_rate)
    return np.array([p, -p]), np.array([1.0, -p])


def sallen_key_coeffs(cutoff: float, q: float, sample_rate: float) -> tuple[np.ndarray, np.ndarray]:
    """Unity-gain 2nd-order low-pass b, a (bilinear transform, prewarped)."""
    if cutoff >= sample_rate / 2.0:
        raise ValueError("low-pass cutoff must be below Nyquist")
    w0 = 2.0 * math.pi * cutoff / sample_rate
    alpha = math.sin(w0) / (2.0 * q)
    b = np.array([(1 - math.cos(w0)) / 2.0, 1 - math.cos(w0), (1 - math.cos(w0)) / 2.0])
    a = np.array([1 + alpha, -2.0 * math.cos(w0), 1 - alpha])
    return b / a[0], a / a[0]


def filter_gain_db(b: np.ndarray, a: np.ndarray, freq: float, sample_rate: float) -> float:
    """Closed-form magnitude of a rational digital filter at one frequency."""
    z = np.exp(-2j * np.pi * freq / sample_rate)
    num = np.polyval(b[::-1], z)
    den = np.polyval(a[::-1], z)
    return 20.0 * math.log10(abs(num / den))


def _condition(samples: np.ndarray, cfg: FrontEndConfig, sample_rate: float) -> np.ndarray:
    """Coupling, bias and low-pass; no clamp (the raw pin voltage)."""
    bh, ah = highpass_coeffs(cfg.coupling_cutoff, sample_rate)
    x = sps.lfilter(bh, ah, samples)
    x = x + cfg.bias_voltage
    bl, al = sallen_key_coeffs(cfg.sallen_key_cutoff, cfg.sallen_key_q, sample_rate)
    return sps.lfilter(bl, al, x)


def front_end_filter(sig: Signal, cfg: FrontEndConfig) -> Signal:
    """Conditioned pin voltage: AC-couple, bias, Sallen-Key, rail clamp."""
    x = _condition(sig.samples, cfg, sig.sample_rate)
    return Signal(np.clip(x, cfg.rail_low, cfg.rail_high), sig.sample_rate)


def check_damage(v, cfg: FrontEndConfig) -> None:
    """Raise DamageVoltage when any value leaves the absolute-maximum window.

    Applies to the raw pin voltage before the rail-clamp protection; it
    flags a misconfigured scenario rather than a recoverable sample fault.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        return
    low, high = float(v.min()), float(v.max())
    if high > cfg.damage_high or low < cfg.damage_low:
        raise DamageVoltage(
            f"voltage range [{low:.3f}, {high:.3f}] V exceeds "
            f"[{cfg.damage_low}, {cfg.damage_high}] V absolute maximum"
        )
