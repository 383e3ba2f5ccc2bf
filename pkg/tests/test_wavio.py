import numpy as np
import pytest

from audiochains.errors import UnsupportedWav
from audiochains.signals import Signal, generate_sine
from audiochains.wavio import read_wav, write_wav


def test_silence_file_size_is_header_plus_two_bytes_per_sample(tmp_path):
    path = str(tmp_path / "silence.wav")
    write_wav(Signal(np.zeros(44100), 44100.0), path)
    assert (tmp_path / "silence.wav").stat().st_size == 44 + 2 * 44100


def test_round_trip_within_half_lsb(tmp_path):
    path = str(tmp_path / "sine.wav")
    sig = generate_sine(1000.0, 0.5, 0.1, 44100.0)
    write_wav(sig, path)
    (back,) = read_wav(path)
    assert back.sample_rate == 44100.0
    assert len(back) == len(sig)
    assert np.max(np.abs(back.samples - sig.samples)) <= 1.0 / 65534.0


def test_stereo_round_trip(tmp_path):
    path = str(tmp_path / "stereo.wav")
    left = generate_sine(500.0, 0.3, 0.05, 48000.0)
    right = generate_sine(750.0, 0.2, 0.05, 48000.0)
    write_wav(left, path, right=right)
    channels = read_wav(path)
    assert len(channels) == 2
    assert len(channels[0]) == len(channels[1]) == len(left)
    assert np.max(np.abs(channels[0].samples - left.samples)) <= 1.0 / 65534.0
    assert np.max(np.abs(channels[1].samples - right.samples)) <= 1.0 / 65534.0


def test_full_scale_field_scales_the_volts(tmp_path):
    path = str(tmp_path / "scaled.wav")
    sig = Signal(np.array([3.3, -3.3, 0.0]), 96000.0)
    write_wav(sig, path, full_scale=3.3)
    (back,) = read_wav(path, full_scale=3.3)
    assert np.max(np.abs(back.samples - sig.samples)) <= 0.5 * 3.3 / 32767.0


def test_unrepresentable_samples_rejected(tmp_path):
    path = str(tmp_path / "clip.wav")
    with pytest.raises(ValueError):
        write_wav(Signal(np.array([1.5]), 44100.0), path)


def test_mismatched_stereo_rejected(tmp_path):
    path = str(tmp_path / "bad.wav")
    left = Signal(np.zeros(10), 44100.0)
    right = Signal(np.zeros(9), 44100.0)
    with pytest.raises(ValueError):
        write_wav(left, path, right=right)


def test_malformed_file_rejected(tmp_path):
    path = tmp_path / "junk.wav"
    path.write_bytes(b"RIFFxxxxNOTAWAVE" + b"\x00" * 64)
    with pytest.raises(UnsupportedWav):
        read_wav(str(path))


def test_non_16bit_rejected(tmp_path):
    import wave

    path = str(tmp_path / "8bit.wav")
    with wave.open(path, "wb") as f:
        f.setnchannels(1)
        f.setsampwidth(1)
        f.setframerate(8000)
        f.writeframes(b"\x80" * 100)
    with pytest.raises(UnsupportedWav):
        read_wav(path)
