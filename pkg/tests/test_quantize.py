from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from audiochains.errors import InvalidCode
from audiochains.measure import measure_thdn
from audiochains.quantize import QuantizerSpec, dequantize, quantize_uniform, round_half_away
from audiochains.signals import Signal, generate_sine

SPEC_3V3 = QuantizerSpec(bits=16, v_min=0.0, v_max=3.3)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuantizerSpec(bits=0, v_min=0.0, v_max=1.0)
    with pytest.raises(ValueError):
        QuantizerSpec(bits=33, v_min=0.0, v_max=1.0)
    with pytest.raises(ValueError):
        QuantizerSpec(bits=16, v_min=1.0, v_max=1.0)
    with pytest.raises(ValueError):
        QuantizerSpec(bits=16, v_min=0.0, v_max=1.0, enob=17.0)
    with pytest.raises(ValueError):
        QuantizerSpec(bits=16, v_min=0.0, v_max=1.0, enob=0.0)


def test_round_half_away():
    assert round_half_away(0.5) == 1.0
    assert round_half_away(-0.5) == -1.0
    assert round_half_away(2.4) == 2.0
    assert round_half_away(-2.5) == -3.0
    assert np.array_equal(round_half_away(np.array([1.5, -1.5, 0.49])), [2.0, -2.0, 0.0])


def test_rails():
    assert quantize_uniform(0.0, SPEC_3V3) == 0
    assert quantize_uniform(3.3, SPEC_3V3) == 65535
    # saturating outside the range
    assert quantize_uniform(-1.0, SPEC_3V3) == 0
    assert quantize_uniform(5.0, SPEC_3V3) == 65535


def test_midpoint_ties_away_from_zero():
    # Exact-rational oracle: 1.65/3.3 is exactly one half in binary floating
    # point, so the scaled value is the exact tie 32767.5.
    scaled = Fraction(165, 330) * 65535
    assert scaled == Fraction(65535, 2)
    assert quantize_uniform(1.65, SPEC_3V3) == 32768


def test_dequantize_examples():
    assert dequantize(0, SPEC_3V3) == 0.0
    assert dequantize(65535, SPEC_3V3) == pytest.approx(3.3, abs=1e-15)
    oracle = Fraction(32768) * Fraction(33, 10) / 65535
    assert dequantize(32768, SPEC_3V3) == pytest.approx(float(oracle), abs=1e-12)


def test_dequantize_rejects_out_of_range():
    with pytest.raises(InvalidCode):
        dequantize(-1, SPEC_3V3)
    with pytest.raises(InvalidCode):
        dequantize(65536, SPEC_3V3)


def test_roundtrip_within_half_lsb_full_sweep():
    v = np.linspace(-0.5, 3.8, 100001)
    codes = quantize_uniform(v, SPEC_3V3)
    back = dequantize(codes, SPEC_3V3)
    clamped = np.clip(v, 0.0, 3.3)
    assert np.max(np.abs(back - clamped)) <= SPEC_3V3.lsb / 2 + 1e-12


@settings(max_examples=200)
@given(
    v1=st.floats(min_value=-1.0, max_value=4.0),
    v2=st.floats(min_value=-1.0, max_value=4.0),
)
def test_noiseless_quantizer_is_monotone(v1, v2):
    lo, hi = min(v1, v2), max(v1, v2)
    assert quantize_uniform(lo, SPEC_3V3) <= quantize_uniform(hi, SPEC_3V3)


def test_enob_equal_bits_is_exactly_noiseless():
    spec = QuantizerSpec(bits=16, v_min=0.0, v_max=3.3, enob=16.0)
    assert spec.noise_rms() == 0.0
    v = np.linspace(0.0, 3.3, 4096)
    rng = np.random.default_rng(0)
    state_before = rng.bit_generator.state
    codes = quantize_uniform(v, spec, rng)
    assert rng.bit_generator.state == state_before  # no randomness consumed
    assert np.array_equal(codes, quantize_uniform(v, SPEC_3V3))


def test_enob_noise_requires_rng():
    spec = QuantizerSpec(bits=16, v_min=0.0, v_max=3.3, enob=13.0)
    with pytest.raises(ValueError):
        quantize_uniform(1.0, spec)


def test_enob_noise_rms_value():
    # sigma^2 = (q_eff^2 - q_raw^2)/12 with q_x = span/(2**x - 1)
    spec = QuantizerSpec(bits=16, v_min=0.0, v_max=3.3, enob=13.0)
    q13 = 3.3 / (2**13 - 1)
    q16 = 3.3 / (2**16 - 1)
    assert spec.noise_rms() == pytest.approx(np.sqrt((q13**2 - q16**2) / 12), rel=1e-12)


def test_enob_13_full_scale_sine_reaches_sinad_formula():
    # SINAD of a full-scale sine through the noisy quantizer should land on
    # 6.02*enob + 1.76 dB; THD+N of the reconstruction is exactly -SINAD.
    spec = QuantizerSpec(bits=16, v_min=0.0, v_max=3.3, enob=13.0)
    fs = 96000.0
    amp_rms = (3.3 / 2) / np.sqrt(2.0)
    sine = generate_sine(997.0, amp_rms, 1.0, fs)
    shifted = sine.samples + 1.65
    codes = quantize_uniform(shifted, spec, np.random.default_rng(42))
    out = Signal(dequantize(codes, spec), fs)
    report = measure_thdn(out, 997.0)
    assert -report.thdn_db == pytest.approx(6.02 * 13 + 1.76, abs=0.2)
