"""16-bit PCM WAV reading and writing.

Analog volts map onto the integer codes through a full-scale field:
+/-full_scale volts corresponds to +/-32767 (default 1 V peak), so a write
followed by a read is exact to within half an LSB per sample.  Files are
little-endian RIFF/WAVE with the canonical 44-byte header; anything else is
rejected as UnsupportedWav.
"""

from __future__ import annotations

import wave

import numpy as np

from .errors import UnsupportedWav
from .quantize import round_half_away
from .signals import Signal

_CODE_MAX = 32767.0


def write_wav(
    sig: Signal,
    path: str,
    full_scale: float = 1.0,
    right: Signal | None = None,
) -> None:
    """Write one (mono) or two (stereo) channels of 16-bit PCM."""
    channels = [sig] if right is None else [sig, right]
    if right is not None and (
        len(right) != len(sig) or right.sample_rate != sig.sample_rate
    ):
        raise ValueError("stereo channels must share length and sample rate")
    data = np.stack([c.samples for c in channels], axis=1)
    if np.any(np.abs(data) > full_scale):
        raise ValueError("samples exceed full scale and are not representable")
    codes = round_half_away(data / full_scale * _CODE_MAX).astype("<i2")
    with wave.open(path, "wb") as f:
        f.setnchannels(len(channels))
        f.setsampwidth(2)
        f.setframerate(int(round(sig.sample_rate)))
        f.writeframes(codes.tobytes())


def read_wav(path: str, full_scale: float = 1.0) -> list[Signal]:
    """Read a 16-bit PCM WAV; returns one Signal per channel (mono or stereo)."""
    try:
        with wave.open(path, "rb") as f:
            n_channels = f.getnchannels()
            width = f.getsampwidth()
            rate = f.getframerate()
            frames = f.readframes(f.getnframes())
    except (wave.Error, EOFError) as exc:
        raise UnsupportedWav(f"not a readable RIFF/WAVE file: {exc}") from exc
    if width != 2:
        raise UnsupportedWav(f"only 16-bit PCM is supported, got {8 * width}-bit")
    if n_channels not in (1, 2):
        raise UnsupportedWav(f"only mono or stereo is supported, got {n_channels} channels")
    codes = np.frombuffer(frames, dtype="<i2").reshape(-1, n_channels)
    volts = codes.astype(np.float64) / _CODE_MAX * full_scale
    return [Signal(volts[:, ch], float(rate)) for ch in range(n_channels)]
