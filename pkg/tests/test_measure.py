import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import signal as sps

from audiochains.errors import (
    EmptySignal,
    FundamentalNotFound,
    NoPeak,
    TruncatedResponse,
)
from audiochains.measure import (
    estimate_latency,
    measure_impulse_response,
    measure_thd,
    measure_thdn,
)
from audiochains.mls import MlsConfig
from audiochains.signals import Signal, generate_sine

FS = 44100.0


def _tone(freq, amp_rms, duration=1.0, fs=FS, phase=0.0):
    return generate_sine(freq, amp_rms, duration, fs, phase=phase).samples


# ---------------------------------------------------------------- impulse response


def test_identity_system_unit_impulse():
    ir = measure_impulse_response(lambda s: s, MlsConfig(12, 0.5, 1, FS))
    assert ir.samples[0] == pytest.approx(1.0, abs=1e-6)
    assert np.max(np.abs(ir.samples[1:])) < 1e-9


def test_pure_delay_100_samples():
    def system(s):
        out = np.zeros(len(s))
        out[100:] = s.samples[:-100]
        return Signal(out, s.sample_rate)

    ir = measure_impulse_response(system, MlsConfig(12, 1.0, 3, FS))
    report = estimate_latency(ir)
    assert report.peak_sample_index == 100
    assert report.latency_seconds == pytest.approx(2.2676e-3, abs=1e-7)
    assert ir.samples[100] == pytest.approx(1.0, abs=1e-6)


def test_gain_half_system():
    ir = measure_impulse_response(
        lambda s: Signal(0.5 * s.samples, s.sample_rate), MlsConfig(12, 0.5, 1, FS)
    )
    assert ir.samples[0] == pytest.approx(0.5, abs=1e-6)


def test_output_dc_offset_does_not_disturb_the_peak():
    def system(s):
        out = np.zeros(len(s))
        out[37:] = s.samples[:-37]
        return Signal(out + 1.275, s.sample_rate)

    ir = measure_impulse_response(system, MlsConfig(12, 0.5, 1, FS))
    report = estimate_latency(ir)
    assert report.peak_sample_index == 37
    assert ir.samples[37] == pytest.approx(1.0, abs=1e-3)


def test_truncated_response_detected():
    def system(s):
        return Signal(s.samples[:-5], s.sample_rate)

    with pytest.raises(TruncatedResponse):
        measure_impulse_response(system, MlsConfig(10, 0.5, 1, FS))


def test_periods_precondition():
    with pytest.raises(ValueError):
        measure_impulse_response(lambda s: s, MlsConfig(10, 0.5, 1, FS), periods=1)


def test_mls_ir_matches_direct_impulse_response_lti():
    # FIR and IIR test systems; the MLS route must agree with a unit-impulse
    # probe to 1e-4 rms.
    fir = np.array([0.5, 0.25, -0.125, 0.0625, 0.2])
    b, a = sps.butter(2, 0.3)
    systems = [
        lambda s: Signal(sps.lfilter(fir, [1.0], s.samples), s.sample_rate),
        lambda s: Signal(sps.lfilter(b, a, s.samples), s.sample_rate),
    ]
    impulse = np.zeros(4095)
    impulse[0] = 1.0
    for system in systems:
        direct = system(Signal(impulse, FS)).samples
        ir = measure_impulse_response(system, MlsConfig(12, 0.5, 1, FS))
        err = np.sqrt(np.mean((ir.samples - direct) ** 2))
        assert err < 1e-4


# ---------------------------------------------------------------- latency report


def test_estimate_latency_errors():
    with pytest.raises(EmptySignal):
        estimate_latency(Signal(np.array([]), FS))
    with pytest.raises(NoPeak):
        estimate_latency(Signal(np.zeros(100), FS))


def test_latency_report_fields_consistent():
    h = np.zeros(1000)
    h[300] = 2.0
    h[:250] = 1e-4
    report = estimate_latency(Signal(h, FS))
    assert report.peak_sample_index == 300
    assert report.latency_seconds == pytest.approx(300 / FS)
    assert report.peak_to_noise_db > 60.0


@settings(max_examples=50)
@given(gain=st.floats(min_value=1e-6, max_value=1e6))
def test_latency_invariant_under_gain(gain):
    h = np.zeros(512)
    h[77] = -0.5
    h[100] = 0.02
    base = estimate_latency(Signal(h, FS))
    scaled = estimate_latency(Signal(gain * h, FS))
    assert scaled.peak_sample_index == base.peak_sample_index == 77
    assert scaled.peak_to_noise_db == pytest.approx(base.peak_to_noise_db, abs=1e-9)


# ---------------------------------------------------------------- THD


def test_thd_single_harmonic_minus_40db():
    x = _tone(1000.0, 1.0) + _tone(2000.0, 0.01, phase=0.7)
    report = measure_thd(Signal(x, FS), 1000.0)
    assert report.thd_db == pytest.approx(-40.0, abs=0.1)
    assert dict(report.harmonic_levels)[2] == pytest.approx(-40.0, abs=0.1)


def test_thd_two_equal_harmonics():
    x = _tone(1000.0, 1.0) + _tone(2000.0, 0.01) + _tone(3000.0, 0.01, phase=1.1)
    report = measure_thd(Signal(x, FS), 1000.0)
    assert report.thd_db == pytest.approx(10 * np.log10(2e-4), abs=0.1)


def test_pure_sine_reports_floor():
    report = measure_thd(Signal(_tone(997.3, 0.5), FS), 997.3)
    assert report.thd_db <= -120.0
    assert measure_thdn(Signal(_tone(997.3, 0.5), FS), 997.3).thdn_db <= -120.0


def test_thd_randomized_profiles_match_closed_form():
    rng = np.random.default_rng(11)
    for _ in range(20):
        f0 = rng.uniform(300.0, 2500.0)
        rels = 10 ** (rng.uniform(-80.0, -45.0, size=4) / 20.0)
        x = _tone(f0, 0.7)
        for k, rel in zip(range(2, 6), rels):
            x = x + _tone(k * f0, 0.7 * rel, phase=rng.uniform(0, 2 * np.pi))
        expected = 10 * np.log10(np.sum(rels**2))
        report = measure_thd(Signal(x, FS), f0)
        assert report.thd_db == pytest.approx(expected, abs=0.1)


def test_harmonics_above_nyquist_excluded():
    # 15 kHz fundamental at 44.1 kHz: no harmonic band fits below Nyquist
    report = measure_thd(Signal(_tone(15000.0, 0.5), FS), 15000.0)
    assert report.harmonic_levels == ()
    assert report.thd_db < -200.0


def test_fundamental_not_found():
    x = _tone(5000.0, 1.0) + _tone(1000.0, 0.001)
    with pytest.raises(FundamentalNotFound):
        measure_thd(Signal(x, FS), 1000.0)


def test_too_short_signal_rejected():
    with pytest.raises(ValueError):
        measure_thd(Signal(_tone(1000.0, 0.5, duration=0.005), FS), 1000.0)


# ---------------------------------------------------------------- THD+N


def test_thdn_sine_plus_white_noise_at_68db_snr():
    rng = np.random.default_rng(5)
    x = _tone(1000.0, 0.5, duration=2.0)
    x = x + rng.normal(0.0, 0.5 * 10 ** (-68 / 20), size=len(x))
    report = measure_thdn(Signal(x, FS), 1000.0)
    assert report.thdn_db == pytest.approx(-68.0, abs=0.5)


def test_thdn_equals_thd_for_harmonic_only_signal():
    x = _tone(1000.0, 1.0) + _tone(2000.0, 0.01, phase=0.4)
    report = measure_thdn(Signal(x, FS), 1000.0)
    assert report.thdn_db == pytest.approx(-40.0, abs=0.1)
    assert report.thdn_db == pytest.approx(report.thd_db, abs=0.1)


def test_thdn_never_below_thd():
    rng = np.random.default_rng(9)
    for _ in range(10):
        f0 = rng.uniform(400.0, 3000.0)
        x = _tone(f0, 0.5) + _tone(2 * f0, 0.5 * 10 ** (rng.uniform(-70, -50) / 20))
        x = x + rng.normal(0.0, 10 ** (rng.uniform(-90, -60) / 20), size=len(x))
        report = measure_thdn(Signal(x, FS), f0)
        assert report.thdn_db >= report.thd_db - 1e-6


def test_dc_offset_is_removed_before_the_ratio():
    x = _tone(1000.0, 0.5) + 1.275
    report = measure_thdn(Signal(x, FS), 1000.0)
    assert report.thdn_db <= -120.0
    assert report.fundamental_power_dbv == pytest.approx(20 * np.log10(0.5), abs=0.01)
