"""Command-line scenarios reproducing the characterization tables.

Each run measures one chain (block codec or sample ADC/DAC) and writes a
CSV report; sweeps map one row per swept parameter.  CSV layouts:

    latency      parameter,latency_seconds
    thd / thdn   parameter,thd_db,thdn_db
    spectrum     frequency_hz,power_dbv

The first line is a ``#`` comment holding the exact command line, numbers
carry 17 significant digits, and rows are LF-terminated, so identical flags
reproduce byte-identical files.  Exit codes: 0 success, 2 usage error,
3 chain fault (damage voltage), 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import adcdac, i2s
from .distortion import calibrate_distortion
from .errors import DamageVoltage, EmptySignal, FundamentalNotFound, UnsupportedWav
from .frontend import FrontEndConfig
from .measure import estimate_latency, measure_impulse_response, measure_thd
from .mls import MlsConfig
from .signals import Signal, generate_sine
from .spectrum import power_spectrum
from .wavio import read_wav, write_wav

PROG = "audiochains"

DEFAULT_BLOCK_SWEEP = (16, 32, 64, 128)
DEFAULT_SPEED_SWEEP = (adcdac.SamplingSpeed.LOW_SPEED, adcdac.SamplingSpeed.HIGH_SPEED)
DEFAULT_I2S_RATE = 44100.0
DEFAULT_ADCDAC_RATE = 96000.0
LATENCY_OVERSAMPLE = 16  # latency runs simulate at 16x the nominal 96 kHz

# Characterization targets the distortion polynomial is calibrated against.
THD_TARGETS_DB = {
    ("i2s", None): -80.0,
    ("adcdac", adcdac.SamplingSpeed.LOW_SPEED): -76.0,
    ("adcdac", adcdac.SamplingSpeed.HIGH_SPEED): -67.0,
}

STIMULUS_HZ = 1000.0
STIMULUS_VRMS = 0.5
# long enough that broadband noise pooled over the analyzer's twenty
# harmonic bands stays well under the harmonic power itself
STIMULUS_SECONDS = 3.0
WARMUP_SECONDS = 0.15
ADCDAC_WAV_FULL_SCALE = 2.5  # output carries the DAC's standing offset
MLS_ORDER_I2S = 16
MLS_ORDER_ADCDAC = 12
MLS_AMPLITUDE = 0.5
SPECTRUM_SEGMENT = 16384


@dataclass(frozen=True)
class Scenario:
    chain: str
    measurement: str
    block_sizes: tuple[int, ...]
    speeds: tuple[adcdac.SamplingSpeed, ...]
    sample_rate: float | None
    seed: int
    out_path: str
    wav_in: str | None
    wav_out: str | None
    command_line: str


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Run a characterization scenario on a simulated audio chain.",
    )
    parser.add_argument("--chain", required=True, choices=("i2s", "adcdac"))
    parser.add_argument(
        "--measure", required=True, choices=("latency", "thd", "thdn", "spectrum")
    )
    parser.add_argument(
        "--block-samples",
        type=int,
        action="append",
        metavar="N",
        help="i2s block size; repeat the flag to sweep (default 16 32 64 128)",
    )
    parser.add_argument("--sampling-speed", choices=("low", "high"))
    parser.add_argument("--sample-rate", type=float, metavar="HZ")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True, metavar="PATH")
    parser.add_argument("--wav-in", metavar="PATH")
    parser.add_argument("--wav-out", metavar="PATH")
    return parser


def _scenario_from_args(args: argparse.Namespace, argv: list[str]) -> Scenario:
    if args.chain == "i2s":
        if args.sampling_speed is not None:
            raise ValueError("--sampling-speed applies only to --chain adcdac")
        blocks = tuple(args.block_samples) if args.block_samples else DEFAULT_BLOCK_SWEEP
        speeds = ()
    else:
        if args.block_samples:
            raise ValueError("--block-samples applies only to --chain i2s")
        blocks = ()
        if args.sampling_speed is None:
            speeds = DEFAULT_SPEED_SWEEP
        else:
            speeds = (
                adcdac.SamplingSpeed.LOW_SPEED
                if args.sampling_speed == "low"
                else adcdac.SamplingSpeed.HIGH_SPEED,
            )
    if args.wav_in and args.measure == "latency":
        raise ValueError("--wav-in does not combine with the MLS latency scenario")
    if args.wav_out and args.measure == "latency":
        raise ValueError("--wav-out does not combine with the MLS latency scenario")
    n_params = len(blocks) if args.chain == "i2s" else len(speeds)
    if args.measure == "spectrum" and n_params > 1:
        raise ValueError("spectrum reports have no parameter column; sweep one value")
    return Scenario(
        chain=args.chain,
        measurement=args.measure,
        block_sizes=blocks,
        speeds=speeds,
        sample_rate=args.sample_rate,
        seed=args.seed,
        out_path=args.out,
        wav_in=args.wav_in,
        wav_out=args.wav_out,
        command_line=f"# {PROG} " + " ".join(argv),
    )


def _format_value(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def write_csv(path: str, comment: str, header: tuple[str, ...], rows) -> None:
    if not rows:
        raise ValueError("refusing to write an empty report")
    with open(path, "w", newline="\n") as f:
        f.write(comment + "\n")
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_format_value(v) for v in row) + "\n")


def read_csv(path: str) -> tuple[list[str], list[str], list[list[str]]]:
    """Parse a report written by write_csv: (comments, header, rows)."""
    comments, header, rows = [], [], []
    with open(path, newline="\n") as f:
        for line in f:
            line = line.rstrip("\n")
            if line.startswith("#"):
                comments.append(line)
            elif not header:
                header = line.split(",")
            elif line:
                rows.append(line.split(","))
    return comments, header, rows


def _param_rng(seed: int, index: int) -> np.random.Generator:
    # Per-parameter stream: parallel and serial sweeps draw identically.
    return np.random.default_rng([seed, index])


def _stimulus(scenario: Scenario, sample_rate: float) -> tuple[Signal, Signal]:
    if scenario.wav_in is not None:
        channels = read_wav(scenario.wav_in)
        if len(channels) == 1:
            return channels[0], channels[0]
        return channels[0], channels[1]
    sine = generate_sine(STIMULUS_HZ, STIMULUS_VRMS, STIMULUS_SECONDS, sample_rate)
    return sine, sine


def _discard_warmup(sig: Signal) -> Signal:
    skip = int(WARMUP_SECONDS * sig.sample_rate)
    if len(sig) - skip < int(0.1 * sig.sample_rate):
        raise ValueError(
            f"stimulus too short: need at least {WARMUP_SECONDS + 0.1:.2f} s "
            f"(warm-up plus analysis), got {sig.duration:.3f} s"
        )
    return Signal(sig.samples[skip:], sig.sample_rate)


def _i2s_config(scenario: Scenario, block: int, sample_rate: float, with_distortion: bool):
    distortion = None
    if with_distortion:
        distortion = calibrate_distortion(
            target_hd3_db=THD_TARGETS_DB[("i2s", None)],
            peak_amplitude=STIMULUS_VRMS * np.sqrt(2.0),
        )
    return i2s.BlockPipelineConfig(
        block_samples=block, sample_rate=sample_rate, distortion=distortion
    )


def _adcdac_config(
    scenario: Scenario,
    speed: adcdac.SamplingSpeed,
    sample_rate: float,
    with_distortion: bool,
):
    distortion = None
    if with_distortion:
        distortion = calibrate_distortion(
            target_hd3_db=THD_TARGETS_DB[("adcdac", speed)],
            peak_amplitude=STIMULUS_VRMS * np.sqrt(2.0),
        )
    return adcdac.SampleChainConfig(
        sample_rate=sample_rate, sampling_speed=speed, distortion=distortion
    )


def _run_latency(scenario: Scenario) -> list[tuple]:
    rows = []
    if scenario.chain == "i2s":
        sample_rate = scenario.sample_rate or DEFAULT_I2S_RATE
        for index, block in enumerate(scenario.block_sizes):
            rng = _param_rng(scenario.seed, index)
            cfg = _i2s_config(scenario, block, sample_rate, with_distortion=False)

            def system(stimulus: Signal) -> Signal:
                left, _ = i2s.run_block_pipeline(stimulus, stimulus, cfg, rng=rng)
                return left

            mls = MlsConfig(MLS_ORDER_I2S, MLS_AMPLITUDE, seed=1, sample_rate=sample_rate)
            report = estimate_latency(measure_impulse_response(system, mls))
            rows.append((str(block), report.latency_seconds))
    else:
        sample_rate = scenario.sample_rate or DEFAULT_ADCDAC_RATE * LATENCY_OVERSAMPLE
        for index, speed in enumerate(scenario.speeds):
            rng = _param_rng(scenario.seed, index)
            cfg = _adcdac_config(scenario, speed, sample_rate, with_distortion=False)
            bias = FrontEndConfig().bias_voltage

            def system(stimulus: Signal) -> Signal:
                # Conditioning bypassed: its group delay is already folded
                # into the calibrated conversion time.  Bias keeps the MLS
                # inside the converter range.
                shifted = Signal(stimulus.samples + bias, stimulus.sample_rate)
                return adcdac.run_sample_pipeline(shifted, shifted, None, cfg, rng)

            mls = MlsConfig(MLS_ORDER_ADCDAC, MLS_AMPLITUDE, seed=1, sample_rate=sample_rate)
            report = estimate_latency(measure_impulse_response(system, mls))
            rows.append((speed.value, report.latency_seconds))
    return rows


def _chain_output(scenario: Scenario, index: int, param, sample_rate: float):
    """Processed 1 kHz stimulus (or the wav-in payload) for one parameter."""
    rng = _param_rng(scenario.seed, index)
    in0, in1 = _stimulus(scenario, sample_rate)
    if scenario.chain == "i2s":
        cfg = _i2s_config(scenario, param, in0.sample_rate, with_distortion=True)
        left, right = i2s.run_block_pipeline(in0, in1, cfg, rng=rng)
        return left, (left, right)
    cfg = _adcdac_config(scenario, param, in0.sample_rate, with_distortion=True)
    out = adcdac.run_sample_pipeline(in0, in1, FrontEndConfig(), cfg, rng)
    return out, (out,)


def _run_distortion(scenario: Scenario) -> list[tuple]:
    rows = []
    params = scenario.block_sizes if scenario.chain == "i2s" else scenario.speeds
    sample_rate = scenario.sample_rate or (
        DEFAULT_I2S_RATE if scenario.chain == "i2s" else DEFAULT_ADCDAC_RATE
    )
    for index, param in enumerate(params):
        measured, wav_channels = _chain_output(scenario, index, param, sample_rate)
        report = measure_thd(_discard_warmup(measured), STIMULUS_HZ)
        label = str(param) if scenario.chain == "i2s" else param.value
        rows.append((label, report.thd_db, report.thdn_db))
        if index == 0 and scenario.wav_out:
            _write_wav_out(scenario, wav_channels)
    return rows


def _run_spectrum(scenario: Scenario) -> list[tuple]:
    params = scenario.block_sizes if scenario.chain == "i2s" else scenario.speeds
    sample_rate = scenario.sample_rate or (
        DEFAULT_I2S_RATE if scenario.chain == "i2s" else DEFAULT_ADCDAC_RATE
    )
    measured, wav_channels = _chain_output(scenario, 0, params[0], sample_rate)
    trimmed = _discard_warmup(measured)
    # AC-couple before the estimate: the sample chain output carries its
    # standing DAC offset.
    ac = Signal(trimmed.samples - trimmed.samples.mean(), trimmed.sample_rate)
    segment = min(SPECTRUM_SEGMENT, 1 << (len(ac).bit_length() - 1))
    spec = power_spectrum(ac, window="hann", segment_len=segment)
    if scenario.wav_out:
        _write_wav_out(scenario, wav_channels)
    return list(zip(spec.bin_frequencies, spec.bin_powers_dbv))


def _write_wav_out(scenario: Scenario, channels: tuple[Signal, ...]) -> None:
    if len(channels) == 2:
        write_wav(channels[0], scenario.wav_out, right=channels[1])
    else:
        write_wav(channels[0], scenario.wav_out, full_scale=ADCDAC_WAV_FULL_SCALE)


def run_scenario(scenario: Scenario) -> None:
    if scenario.measurement == "latency":
        rows = _run_latency(scenario)
        header = ("parameter", "latency_seconds")
    elif scenario.measurement in ("thd", "thdn"):
        rows = _run_distortion(scenario)
        header = ("parameter", "thd_db", "thdn_db")
    else:
        rows = _run_spectrum(scenario)
        header = ("frequency_hz", "power_dbv")
    write_csv(scenario.out_path, scenario.command_line, header, rows)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = _scenario_from_args(args, argv)
    except ValueError as exc:
        parser.error(str(exc))  # exits 2
    try:
        run_scenario(scenario)
    except DamageVoltage as exc:
        print(f"{PROG}: chain fault: {exc}", file=sys.stderr)
        return 3
    except (OSError, UnsupportedWav) as exc:
        print(f"{PROG}: i/o error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, EmptySignal, FundamentalNotFound) as exc:
        # unusable scenario data, e.g. a wav-in too short or off-frequency
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
