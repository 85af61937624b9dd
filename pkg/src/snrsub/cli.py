"""Command-line surface: simulate, estimate, select-block, mc, bandwidth.

Primary outputs are deterministic given --seed: JSON reports carry a
schema_version, echo the resolved statistical config, and never include
wall-clock or thread-count information unless --timings is passed, so
identical seeds produce byte-identical output at any --threads value.
Operational failures print a single machine-readable JSON object with a
stable error code on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import csv as csv_mod
import json
import math
import os
import sys
import time
import wave
from dataclasses import dataclass

import numpy as np

from .core import TimeSeries, snr_db
from .harness import ExperimentSpec, mse_signal_power, quantile_mae
from .simgen import (
    SignalSpec,
    calibrate_amplitude,
    derive_rng,
    gen_ar1,
    gen_design,
    gen_powerlaw,
    gen_sine,
)
from .smoother import select_bandwidth
from .subsample import (
    ExcessiveSkipsError,
    SubsampleConfig,
    confidence_interval,
    default_b1,
    estimate_snr_distribution,
    select_block_size,
)

SCHEMA_VERSION = 1
THREADS_ENV = "SNRSUB_THREADS"

DEFAULT_LEVELS = "0.1,0.25,0.5,0.75,0.9"
DEFAULT_CI = "0.9,0.95"


class CliError(Exception):
    """Operational failure with a stable machine-readable code."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class InputDescriptor:
    """Where and how to read a series: path, format, rate override, channel."""

    path: str
    format: str  # 'wav16' | 'csv' | 'raw_f64le'
    sample_rate_hz: float | None = None
    channel: int = 0


@dataclass(frozen=True)
class RunReport:
    """Everything one estimation run reports, consistent with its distribution.

    ``config`` echoes the resolved statistical settings; ``results`` holds the
    counts, bandwidth summary, quantile table, and confidence intervals.
    Wall-clock timings are kept out of the default serialization so identical
    seeds produce byte-identical reports at any worker count.
    """

    config: dict
    results: dict
    timings: dict

    def to_json(self, include_timings: bool = False) -> str:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "estimate",
            "config": self.config,
            "results": self.results,
        }
        if include_timings:
            payload["timings"] = self.timings
        return _dump_json(payload)


# ---------------------------------------------------------------- file I/O

def read_input(desc: InputDescriptor) -> TimeSeries:
    """Load a series from WAV (PCM 16-bit), CSV (last column), or raw float64.

    WAV amplitudes are scaled to [-1, 1) by 1/32768 and the header rate is
    used unless overridden; CSV and raw files require an explicit rate.
    """
    if desc.format == "wav16":
        return _read_wav16(desc)
    if desc.format == "csv":
        return _read_csv(desc)
    if desc.format == "raw_f64le":
        return _read_raw(desc)
    raise ValueError(f"unknown input format {desc.format!r}")


def _read_wav16(desc: InputDescriptor) -> TimeSeries:
    try:
        with wave.open(desc.path, "rb") as wf:
            if wf.getcomptype() != "NONE":
                raise ValueError(f"wav: compressed encoding {wf.getcomptype()!r} not supported")
            if wf.getsampwidth() != 2:
                raise ValueError(f"wav: only PCM 16-bit supported, got {8 * wf.getsampwidth()}-bit")
            nch = wf.getnchannels()
            fs = float(wf.getframerate())
            frames = wf.readframes(wf.getnframes())
    except wave.Error as e:
        raise ValueError(f"wav: malformed header in {desc.path}: {e}") from e
    data = np.frombuffer(frames, dtype="<i2")
    if data.size == 0:
        raise ValueError(f"wav: zero samples in {desc.path}")
    data = data.reshape(-1, nch)
    if not (0 <= desc.channel < nch):
        raise ValueError(f"wav: channel {desc.channel} out of range for {nch} channels")
    samples = data[:, desc.channel].astype(np.float64) / 32768.0
    return TimeSeries(samples, desc.sample_rate_hz or fs)


def _read_csv(desc: InputDescriptor) -> TimeSeries:
    if not desc.sample_rate_hz:
        raise ValueError("csv input requires an explicit sample rate (--fs)")
    values = []
    with open(desc.path, newline="") as f:
        for rownum, row in enumerate(csv_mod.reader(f), start=1):
            if not row:
                continue
            cell = row[-1].strip()
            try:
                v = float(cell)
            except ValueError:
                if rownum == 1 and not values:
                    continue  # header row
                raise ValueError(f"csv: non-numeric cell {cell!r} at row {rownum}") from None
            if not math.isfinite(v):
                raise ValueError(f"csv: non-finite value at row {rownum}")
            values.append(v)
    if not values:
        raise ValueError(f"csv: zero samples in {desc.path}")
    return TimeSeries(np.array(values), desc.sample_rate_hz)


def _read_raw(desc: InputDescriptor) -> TimeSeries:
    if not desc.sample_rate_hz:
        raise ValueError("raw input requires an explicit sample rate (--fs)")
    samples = np.fromfile(desc.path, dtype="<f8")
    if samples.size == 0:
        raise ValueError(f"raw: zero samples in {desc.path}")
    return TimeSeries(samples, desc.sample_rate_hz)


def write_raw_f64le(path: str, samples: np.ndarray) -> None:
    np.ascontiguousarray(samples, dtype="<f8").tofile(path)


def write_wav16(path: str, samples: np.ndarray, fs_hz: float) -> float:
    """Write mono PCM 16-bit; returns the gain applied to avoid clipping."""
    limit = 32767.0 / 32768.0
    peak = float(np.max(np.abs(samples))) if samples.size else 0.0
    gain = 1.0 if peak <= limit else limit / peak
    ints = np.clip(np.rint(samples * gain * 32768.0), -32768, 32767).astype("<i2")
    with wave.open(path, "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(int(round(fs_hz)))
        wf.writeframes(ints.tobytes())
    return gain


# ---------------------------------------------------------------- helpers

def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _error_json(code: str, message: str) -> None:
    sys.stderr.write(_dump_json({
        "schema_version": SCHEMA_VERSION,
        "error": {"code": code, "message": message},
    }))


def _parse_levels(text: str, name: str) -> tuple[float, ...]:
    try:
        levels = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise CliError("invalid-config", f"{name}: cannot parse {text!r}") from None
    if not levels or any(not (0.0 < g < 1.0) for g in levels):
        raise CliError("invalid-config", f"{name}: levels must lie in (0, 1)")
    if any(a >= b for a, b in zip(levels, levels[1:])):
        raise CliError("invalid-config", f"{name}: levels must be strictly increasing")
    return levels


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError("invalid-config", f"{THREADS_ENV}={env!r} is not an integer") from None
    return 1


def _resolve_block_samples(args, fs_hz: float) -> int:
    given = [name for name, v in (("--block-samples", args.block_samples),
                                  ("--block-ms", args.block_ms),
                                  ("--block-s", args.block_s)) if v is not None]
    if len(given) != 1:
        raise CliError("config-conflict",
                       f"exactly one of --block-samples/--block-ms/--block-s required, got {given or 'none'}")
    if args.block_samples is not None:
        return int(args.block_samples)
    if args.block_ms is not None:
        return int(round(args.block_ms * fs_hz / 1000.0))
    return int(round(args.block_s * fs_hz))


def _input_descriptor(args) -> InputDescriptor:
    fmt = args.format
    if fmt is None:
        ext = os.path.splitext(args.input)[1].lower()
        fmt = {"wav": "wav16", "csv": "csv"}.get(ext.lstrip("."), "raw")
    fmt = {"raw": "raw_f64le", "wav16": "wav16", "csv": "csv", "raw_f64le": "raw_f64le"}[fmt]
    return InputDescriptor(args.input, fmt, args.fs, args.channel)


def _load_series(args) -> tuple[TimeSeries, InputDescriptor]:
    desc = _input_descriptor(args)
    try:
        return read_input(desc), desc
    except FileNotFoundError as e:
        raise CliError("io-error", str(e)) from e
    except ValueError as e:
        raise CliError("bad-input", str(e)) from e


# ---------------------------------------------------------------- commands

def cmd_simulate(args) -> int:
    fs = args.fs if args.fs else 44100.0
    if not 50.0 < fs / 2 and args.design in ("ar", "p1", "p2", "sine-only"):
        raise CliError("nyquist", f"50 Hz signal violates Nyquist at rate {fs} Hz")
    seed = args.seed
    design = args.design
    noise_var = args.noise_variance
    manifest: dict = {
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "config": {
            "design": design,
            "snr_db": args.snr,
            "fs_hz": fs,
            "duration_s": args.duration,
            "seed": seed,
            "format": args.format,
            "noise_variance": noise_var,
            "amplitude": args.amplitude,
            "noise": args.noise,
            "out": args.out,
        },
    }
    try:
        if design in ("ar", "p1", "p2"):
            series = gen_design(design, args.snr, fs, args.duration, seed, noise_var)
            amp = calibrate_amplitude(args.snr, noise_var)
            noise_desc = {"ar": {"kind": "ar1", "phi": -0.7},
                          "p1": {"kind": "powerlaw", "beta": 0.2},
                          "p2": {"kind": "powerlaw", "beta": 0.6}}[design]
            noise_desc["variance"] = noise_var
            derived = {"amplitude": amp, "signal_power": amp * amp / 2.0,
                       "noise": noise_desc, "true_snr_db": args.snr}
        elif design == "sine-only":
            spec = SignalSpec(args.amplitude, 50.0, fs, args.duration)
            series = gen_sine(spec)
            derived = {"amplitude": args.amplitude,
                       "signal_power": args.amplitude ** 2 / 2.0,
                       "noise": None, "true_snr_db": None}
        elif design == "noise-only":
            n = int(round(args.duration * fs))
            rng = derive_rng(seed)
            kind = args.noise
            if kind == "white":
                samples = rng.normal(0.0, math.sqrt(noise_var), size=n)
                noise_desc = {"kind": "white", "variance": noise_var}
            elif kind == "ar":
                samples = gen_ar1(-0.7, noise_var, n, rng)
                noise_desc = {"kind": "ar1", "phi": -0.7, "variance": noise_var}
            elif kind in ("p1", "p2"):
                beta = 0.2 if kind == "p1" else 0.6
                samples = gen_powerlaw(beta, noise_var, n, rng)
                noise_desc = {"kind": "powerlaw", "beta": beta, "variance": noise_var}
            else:
                raise CliError("invalid-config", f"unknown noise kind {kind!r}")
            series = TimeSeries(samples, fs)
            derived = {"amplitude": 0.0, "signal_power": 0.0,
                       "noise": noise_desc, "true_snr_db": None}
        else:
            raise CliError("invalid-config", f"unknown design {design!r}")
    except ValueError as e:
        code = "nyquist" if "Nyquist" in str(e) else "invalid-config"
        raise CliError(code, str(e)) from e

    try:
        if args.format == "wav16":
            gain = write_wav16(args.out, series.samples, fs)
            derived["wav_gain"] = gain
        else:
            write_raw_f64le(args.out, series.samples)
    except OSError as e:
        raise CliError("io-error", f"cannot write {args.out}: {e}") from e

    derived["n"] = series.n
    manifest["derived"] = derived
    text = _dump_json(manifest)
    manifest_path = args.manifest or (args.out + ".manifest.json")
    try:
        with open(manifest_path, "w") as f:
            f.write(text)
    except OSError as e:
        raise CliError("io-error", f"cannot write {manifest_path}: {e}") from e
    sys.stdout.write(text)
    return 0


def cmd_estimate(args) -> int:
    series, desc = _load_series(args)
    b = _resolve_block_samples(args, series.sample_rate_hz)
    levels = _parse_levels(args.levels, "--levels")
    ci_levels = _parse_levels(args.ci, "--ci")
    threads = _threads(args)
    n = series.n
    if b > n:
        raise CliError("invalid-config", f"block length {b} exceeds series length {n}")
    if args.k > n - b + 1:
        raise CliError("k-too-large", f"k={args.k} exceeds the {n - b + 1} admissible starts")
    try:
        cfg = SubsampleConfig(b=b, k_blocks=args.k, seed=args.seed, b1=args.b1,
                              workers=threads, shared_bandwidth=args.shared_bandwidth)
    except ValueError as e:
        raise CliError("invalid-config", str(e)) from e

    t0 = time.perf_counter()
    dist = estimate_snr_distribution(series, cfg)
    elapsed = time.perf_counter() - t0

    hs = [e.h_hat for e in dist.estimates if not e.skipped]
    report = RunReport(
        config={
            "input": desc.path,
            "format": desc.format,
            "channel": desc.channel,
            "fs_hz": series.sample_rate_hz,
            "n": n,
            "b": cfg.b,
            "b1": cfg.b1,
            "k": cfg.k_blocks,
            "seed": cfg.seed,
            "shared_bandwidth": cfg.shared_bandwidth,
            "grid": {"c1": cfg.grid.c1, "c2": cfg.grid.c2, "points": cfg.grid.points},
            "levels": list(levels),
            "ci_levels": list(ci_levels),
        },
        results={
            "retained": dist.count,
            "skipped": dist.skipped,
            "bandwidth_summary": {
                "median_h": float(np.median(hs)),
                "min_h": float(np.min(hs)),
                "max_h": float(np.max(hs)),
            },
            "quantiles_db": {f"{g:g}": dist.quantile(g) for g in levels},
            "ci_db": {f"{lv:g}": list(confidence_interval(dist, lv)) for lv in ci_levels},
        },
        timings={"estimate_s": elapsed, "threads": threads},
    )
    _emit(report.to_json(include_timings=args.timings), args.out)
    if args.snr_csv:
        lines = ["snr_db"] + [repr(float(v)) for v in dist.snr_values]
        with open(args.snr_csv, "w") as f:
            f.write("\n".join(lines) + "\n")
    return 0


def cmd_select_block(args) -> int:
    series, desc = _load_series(args)
    fs = series.sample_rate_hz
    threads = _threads(args)
    to_samples = {"ms": fs / 1000.0, "s": fs, "samples": 1.0}[args.grid_unit]
    raw = np.linspace(args.grid_min, args.grid_max, args.grid_steps)
    cand = sorted({int(round(v * to_samples)) for v in raw})
    cand = [b for b in cand if 16 <= b <= series.n and args.k <= series.n - b + 1]
    if len(cand) < 5:
        raise CliError("grid-infeasible",
                       f"grid reduces to {len(cand)} feasible candidates; need at least 5")
    cfg = SubsampleConfig(b=cand[0], k_blocks=args.k, seed=args.seed, workers=threads)
    try:
        sel = select_block_size(series, cand, cfg)
    except ValueError as e:
        raise CliError("grid-infeasible", str(e)) from e

    table = [
        {
            "b": b,
            "b_ms": b / fs * 1000.0,
            "q_low": sel.q_low[i],
            "q_high": sel.q_high[i],
            "volatility": None if math.isnan(sel.volatility[i]) else sel.volatility[i],
        }
        for i, b in enumerate(sel.candidates)
    ]
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "select-block",
        "config": {
            "input": desc.path,
            "format": desc.format,
            "fs_hz": fs,
            "n": series.n,
            "grid_min": args.grid_min,
            "grid_max": args.grid_max,
            "grid_unit": args.grid_unit,
            "grid_steps": args.grid_steps,
            "k": args.k,
            "seed": args.seed,
            "levels": list(sel.levels),
        },
        "results": {
            "chosen_b_samples": sel.chosen_b,
            "chosen_b_ms": sel.chosen_b / fs * 1000.0,
            "table": table,
        },
    }
    _emit(_dump_json(report), args.out)
    if args.table_csv:
        lines = ["b,b_ms,q_low,q_high,volatility"]
        for row in table:
            vol = "" if row["volatility"] is None else repr(row["volatility"])
            lines.append(f'{row["b"]},{row["b_ms"]!r},{row["q_low"]!r},{row["q_high"]!r},{vol}')
        with open(args.table_csv, "w") as f:
            f.write("\n".join(lines) + "\n")
    return 0


def cmd_mc(args) -> int:
    threads = _threads(args)
    replicas = args.replicas
    duration = args.duration
    k = args.k
    oracle_replicas = args.oracle_replicas
    if args.quick:
        replicas, duration, k, oracle_replicas = 3, 0.5, 48, 500
    levels = _parse_levels(args.levels, "--levels")
    blocks = tuple(int(round(float(ms) * args.fs / 1000.0)) for ms in args.b_ms.split(","))
    try:
        spec = ExperimentSpec(
            design=args.design,
            true_snr_db=args.snr,
            fs_hz=args.fs,
            duration_s=duration,
            block_lengths=blocks,
            k_blocks=k,
            replicas=replicas,
            seed=args.seed,
            levels=levels,
        )
    except ValueError as e:
        raise CliError("invalid-config", str(e)) from e

    reports = {}
    if args.metric in ("mse", "both"):
        reports["mse"] = mse_signal_power(spec, workers=threads)
    if args.metric in ("qmae", "both"):
        reports["qmae"] = quantile_mae(spec, oracle_replicas=oracle_replicas, workers=threads)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "mc",
        "config": {
            "design": spec.design,
            "snr_db": spec.true_snr_db,
            "fs_hz": spec.fs_hz,
            "duration_s": spec.duration_s,
            "block_lengths": list(spec.block_lengths),
            "k": spec.k_blocks,
            "replicas": spec.replicas,
            "seed": spec.seed,
            "levels": list(spec.levels),
            "metric": args.metric,
            "quick": args.quick,
            "oracle_replicas": oracle_replicas,
        },
        "reports": {name: json.loads(rep.to_json()) for name, rep in reports.items()},
    }
    _emit(_dump_json(payload), args.out)
    if args.csv:
        chunks = []
        for name in sorted(reports):
            body = reports[name].to_csv()
            chunks.append(body if not chunks else "".join(body.splitlines(True)[1:]))
        with open(args.csv, "w") as f:
            f.writelines(chunks)
    return 0


def cmd_bandwidth(args) -> int:
    series, _ = _load_series(args)
    b = _resolve_block_samples(args, series.sample_rate_hz)
    start = args.start
    if not (1 <= start and start + b - 1 <= series.n):
        raise CliError("invalid-config",
                       f"block [{start}, {start + b - 1}] outside series of length {series.n}")
    block = series.samples[start - 1:start - 1 + b]
    try:
        fit = select_bandwidth(block)
    except ValueError as e:
        raise CliError("invalid-config", str(e)) from e
    lines = ["h,cv,selected"]
    for h, cv in fit.cv_curve:
        cv_text = "inf" if math.isinf(cv) else repr(cv)
        lines.append(f"{h!r},{cv_text},{1 if h == fit.h_hat else 0}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------- parser

def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="input data file")
    p.add_argument("--format", choices=["wav16", "csv", "raw", "raw_f64le"],
                   help="input format (default: by extension, else raw float64)")
    p.add_argument("--fs", type=float, help="sample rate in Hz (required for csv/raw)")
    p.add_argument("--channel", type=int, default=0, help="wav channel index")


def _add_block_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--block-ms", type=float, help="block length in milliseconds")
    p.add_argument("--block-samples", type=int, help="block length in samples")
    p.add_argument("--block-s", type=float, help="block length in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snrsub",
        description="Subsampled SNR distribution estimation for long uniformly sampled series",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate synthetic design data")
    p.add_argument("--design", required=True,
                   choices=["ar", "p1", "p2", "sine-only", "noise-only"])
    p.add_argument("--snr", type=float, default=10.0, help="target SNR in dB")
    p.add_argument("--fs", type=float, default=44100.0)
    p.add_argument("--duration", type=float, required=True, help="seconds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["raw", "wav16"], default="raw")
    p.add_argument("--amplitude", type=float, default=1.0, help="sine-only amplitude")
    p.add_argument("--noise", choices=["white", "ar", "p1", "p2"], default="white",
                   help="noise-only process")
    p.add_argument("--noise-variance", type=float, default=1.0)
    p.add_argument("--out", required=True, help="output data file")
    p.add_argument("--manifest", help="manifest path (default: <out>.manifest.json)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate the subsample SNR distribution")
    _add_input_flags(p)
    _add_block_flags(p)
    p.add_argument("--b1", type=int, help="secondary window (default: floor(b**0.4))")
    p.add_argument("--k", type=int, default=200, help="number of blocks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--levels", default=DEFAULT_LEVELS, help="quantile levels, comma-separated")
    p.add_argument("--ci", default=DEFAULT_CI, help="confidence levels, comma-separated")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker processes (default: ${THREADS_ENV} or 1)")
    p.add_argument("--shared-bandwidth", action="store_true",
                   help="cross-validate once on the first block (approximation)")
    p.add_argument("--timings", action="store_true", help="include wall-clock in the report")
    p.add_argument("--out", help="report JSON path (default: stdout)")
    p.add_argument("--snr-csv", help="write sorted subsample SNR values as CSV")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("select-block", help="data-driven block length selection")
    _add_input_flags(p)
    p.add_argument("--grid-min", type=float, default=2.0)
    p.add_argument("--grid-max", type=float, default=20.0)
    p.add_argument("--grid-steps", type=int, default=10)
    p.add_argument("--grid-unit", choices=["ms", "s", "samples"], default="ms")
    p.add_argument("--k", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", help="report JSON path (default: stdout)")
    p.add_argument("--table-csv", help="write candidate quantile/volatility table as CSV")
    p.set_defaults(func=cmd_select_block)

    p = sub.add_parser("mc", help="Monte Carlo experiment tables at desk scale")
    p.add_argument("--design", required=True, choices=["ar", "p1", "p2"])
    p.add_argument("--snr", type=float, required=True)
    p.add_argument("--metric", choices=["mse", "qmae", "both"], default="both")
    p.add_argument("--fs", type=float, default=44100.0)
    p.add_argument("--duration", type=float, default=3.0)
    p.add_argument("--b-ms", default="10,15", help="block lengths in ms, comma-separated")
    p.add_argument("--k", type=int, default=200)
    p.add_argument("--replicas", type=int, default=100)
    p.add_argument("--oracle-replicas", type=int, default=4000)
    p.add_argument("--levels", default=DEFAULT_LEVELS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true",
                   help="tiny smoke configuration (3 replicas, 0.5 s)")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", help="report JSON path (default: stdout)")
    p.add_argument("--csv", help="write cells as CSV")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("bandwidth", help="dump the CV curve for one block")
    _add_input_flags(p)
    _add_block_flags(p)
    p.add_argument("--start", type=int, default=1, help="1-based block start")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_bandwidth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        _error_json(e.code, str(e))
        return 1
    except ExcessiveSkipsError as e:
        _error_json("excessive-skips", str(e))
        return 1
    except OSError as e:
        _error_json("io-error", str(e))
        return 1
    except ValueError as e:
        _error_json("invalid-config", str(e))
        return 1


if __name__ == "__main__":
    sys.exit(main())
