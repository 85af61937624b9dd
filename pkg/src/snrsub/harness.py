"""Monte Carlo experiment driver for the synthetic designs.

Reproduces, at desk scale, the evaluation summaries for the subsampled SNR
method: signal-power mean squared error per block length, oracle quantiles of
the per-block SNR statistic with known signal and noise, and the absolute
deviation of estimated quantiles from the oracle.  Replicas own derived seed
streams keyed by replica index, so execution order and scheduling never
change a reported number.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import TimeSeries, empirical_quantile
from .simgen import calibrate_amplitude, derive_rng, derive_seed, gen_ar1, gen_design, gen_powerlaw
from .subsample import (
    ExcessiveSkipsError,
    SnrDistribution,
    SubsampleConfig,
    block_estimate,
    default_b1,
    estimate_snr_distribution,
)

__all__ = [
    "ExperimentSpec",
    "McCell",
    "McReport",
    "mse_signal_power",
    "oracle_quantiles",
    "quantile_mae",
    "exhaustive_subsample_check",
    "ExhaustiveComparison",
    "replica_distribution",
    "ks_distance",
]

# seed stream tags: master seed splits into (tag, ...) keyed streams
_STREAM_SERIES = 0
_STREAM_BLOCKS = 1
_STREAM_ORACLE = 2

ORACLE_NOISE_LEN = 4096  # synthesis length from which oracle noise windows are cut


@dataclass(frozen=True)
class ExperimentSpec:
    """One Monte Carlo experiment cell family.

    Desk-scale defaults: 3 s at 44.1 kHz (n = 132,300), 100 replicas, K = 200
    blocks, block lengths 10 ms and 15 ms in samples.
    """

    design: str
    true_snr_db: float
    fs_hz: float = 44100.0
    duration_s: float = 3.0
    block_lengths: tuple[int, ...] = (441, 662)
    k_blocks: int = 200
    replicas: int = 100
    seed: int = 0
    levels: tuple[float, ...] = (0.1, 0.25, 0.5, 0.75, 0.9)
    noise_variance: float = 1.0

    def __post_init__(self):
        if self.replicas < 1:
            raise ValueError(f"replicas must be >= 1, got {self.replicas}")
        lv = tuple(float(g) for g in self.levels)
        if any(not (0.0 < g < 1.0) for g in lv) or any(a >= b for a, b in zip(lv, lv[1:])):
            raise ValueError(f"levels must be strictly increasing in (0, 1), got {lv}")
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "block_lengths", tuple(int(b) for b in self.block_lengths))


@dataclass(frozen=True)
class McCell:
    """One reported cell: a metric at (design, snr, b[, level])."""

    design: str
    true_snr_db: float
    b: int
    metric: str
    level: float | None
    mean: float | None
    se: float | None
    replicas: int
    failures: int = 0
    values: tuple[float, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class McReport:
    """Cells plus an echo of the producing experiment spec."""

    spec: ExperimentSpec
    cells: tuple[McCell, ...]

    def to_json(self) -> str:
        payload = {
            "schema_version": 1,
            "spec": asdict(self.spec),
            "cells": [
                {k: v for k, v in asdict(c).items() if k != "values"}
                for c in self.cells
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"

    def to_csv(self) -> str:
        lines = ["design,snr_db,b,metric,level,mean,se,replicas,failures"]
        for c in self.cells:
            lines.append(",".join([
                c.design,
                repr(float(c.true_snr_db)),
                str(c.b),
                c.metric,
                "" if c.level is None else repr(float(c.level)),
                "" if c.mean is None else repr(float(c.mean)),
                "" if c.se is None else repr(float(c.se)),
                str(c.replicas),
                str(c.failures),
            ]))
        return "\n".join(lines) + "\n"


def _replica_series(spec: ExperimentSpec, r: int) -> TimeSeries:
    return gen_design(spec.design, spec.true_snr_db, spec.fs_hz, spec.duration_s,
                      derive_seed(spec.seed, _STREAM_SERIES, r), spec.noise_variance)


def _replica_config(spec: ExperimentSpec, r: int, b: int) -> SubsampleConfig:
    return SubsampleConfig(b=b, k_blocks=spec.k_blocks,
                           seed=derive_seed(spec.seed, _STREAM_BLOCKS, r, b))


def replica_distribution(spec: ExperimentSpec, b: int, replica: int) -> SnrDistribution:
    """Subsample SNR distribution for one replica at block length b."""
    series = _replica_series(spec, replica)
    return estimate_snr_distribution(series, _replica_config(spec, replica, b))


def _mse_replica(args) -> tuple[int, dict[int, float | None]]:
    spec, r = args
    series = _replica_series(spec, r)
    target = calibrate_amplitude(spec.true_snr_db, spec.noise_variance) ** 2 / 2.0
    out: dict[int, float | None] = {}
    for b in spec.block_lengths:
        try:
            dist = estimate_snr_distribution(series, _replica_config(spec, r, b))
        except ExcessiveSkipsError:
            out[b] = None
            continue
        errs = np.array([e.signal_power - target for e in dist.estimates if not e.skipped])
        out[b] = float(errs @ errs) / errs.size
    return r, out


def _qmae_replica(args) -> tuple[int, dict[int, dict[float, float] | None]]:
    spec, r = args
    series = _replica_series(spec, r)
    out: dict[int, dict[float, float] | None] = {}
    for b in spec.block_lengths:
        try:
            dist = estimate_snr_distribution(series, _replica_config(spec, r, b))
        except ExcessiveSkipsError:
            out[b] = None
            continue
        out[b] = {g: dist.quantile(g) for g in spec.levels}
    return r, out


def _run_replicas(fn, spec: ExperimentSpec, workers: int, replica_order) -> dict:
    order = list(range(spec.replicas)) if replica_order is None else list(replica_order)
    if sorted(order) != list(range(spec.replicas)):
        raise ValueError("replica_order must be a permutation of range(replicas)")
    args = [(spec, r) for r in order]
    if workers == 1:
        results = [fn(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, args))
    return dict(results)


def _aggregate(per_replica_values: list[float | None]):
    """(mean, se, failures) over replicas, summed in fixed replica-index order."""
    vals = [v for v in per_replica_values if v is not None]
    failures = len(per_replica_values) - len(vals)
    if not vals:
        return None, None, failures, ()
    arr = np.array(vals)
    mean = float(arr.sum() / arr.size)
    se = float(np.std(arr, ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else None
    return mean, se, failures, tuple(float(v) for v in vals)


def mse_signal_power(spec: ExperimentSpec, workers: int = 1, replica_order=None) -> McReport:
    """Monte Carlo MSE of the per-block signal power against A**2/2.

    Per replica the error is averaged over the K blocks; cells report the
    replica average with its standard error.  Replicas where estimation
    aborts on excessive skips are counted as failures and excluded.
    """
    by_r = _run_replicas(_mse_replica, spec, workers, replica_order)
    cells = []
    for b in spec.block_lengths:
        series_vals = [by_r[r][b] for r in range(spec.replicas)]
        mean, se, failures, vals = _aggregate(series_vals)
        cells.append(McCell(spec.design, spec.true_snr_db, b, "mse_signal_power",
                            None, mean, se, spec.replicas, failures, vals))
    return McReport(spec, tuple(cells))


def oracle_quantiles(design: str, true_snr_db: float, b: int, b1: int | None,
                     levels, replicas: int, seed: int,
                     fs_hz: float = 44100.0, duration_s: float = 3.0,
                     noise_variance: float = 1.0) -> dict[float, float]:
    """Quantiles of the per-block SNR statistic with known signal and noise.

    Each draw places a block uniformly on the sample index range, computes
    the true signal power over the block and the sample variance of freshly
    generated design noise over the first b1 points, and takes their ratio
    in dB.  The empirical quantiles of these draws are the ground truth the
    estimated quantiles are compared against.
    """
    if b1 is None:
        b1 = default_b1(b)
    amp = calibrate_amplitude(true_snr_db, noise_variance)
    n = int(round(duration_s * fs_hz))
    if b > n:
        raise ValueError(f"block length {b} exceeds n={n}")
    rng = derive_rng(seed)
    starts = rng.integers(1, n - b + 2, size=replicas)
    # true signal power per draw, vectorized over blocks
    idx = starts[:, None] + np.arange(b)[None, :]
    s = amp * np.sin(2.0 * np.pi * 50.0 * (idx - 1) / fs_hz)
    u = np.mean(s * s, axis=1)
    v = np.empty(replicas)
    if design == "ar":
        for r in range(replicas):
            v[r] = np.var(gen_ar1(-0.7, noise_variance, b1, rng))
    elif design in ("p1", "p2"):
        beta = 0.2 if design == "p1" else 0.6
        for r in range(replicas):
            v[r] = np.var(gen_powerlaw(beta, noise_variance, ORACLE_NOISE_LEN, rng)[:b1])
    else:
        raise ValueError(f"unknown design {design!r}")
    snr = 10.0 * np.log10(u / v)
    return {float(g): empirical_quantile(snr, g) for g in levels}


def quantile_mae(spec: ExperimentSpec, oracle_replicas: int = 4000,
                 workers: int = 1, replica_order=None) -> McReport:
    """Mean absolute deviation of estimated quantiles from the oracle, in dB.

    One cell per (block length, level); the oracle for each block length is
    computed once on its own derived seed stream.
    """
    oracle = {
        b: oracle_quantiles(spec.design, spec.true_snr_db, b, None, spec.levels,
                            oracle_replicas, derive_seed(spec.seed, _STREAM_ORACLE, b),
                            spec.fs_hz, spec.duration_s, spec.noise_variance)
        for b in spec.block_lengths
    }
    by_r = _run_replicas(_qmae_replica, spec, workers, replica_order)
    cells = []
    for b in spec.block_lengths:
        for g in spec.levels:
            per_rep = [
                None if by_r[r][b] is None else abs(by_r[r][b][g] - oracle[b][g])
                for r in range(spec.replicas)
            ]
            mean, se, failures, vals = _aggregate(per_rep)
            cells.append(McCell(spec.design, spec.true_snr_db, b, "quantile_mae",
                                g, mean, se, spec.replicas, failures, vals))
    return McReport(spec, tuple(cells))


def ks_distance(a, b) -> float:
    """Kolmogorov-Smirnov distance between two empirical distributions."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    pooled = np.concatenate([a, b])
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


@dataclass(frozen=True)
class ExhaustiveComparison:
    """Randomized vs exhaustive subsample SNR distributions on a small series."""

    randomized: np.ndarray
    exhaustive: np.ndarray
    ks: float
    k: int
    n_starts: int


def exhaustive_subsample_check(series: TimeSeries, b: int, b1: int | None = None,
                               k: int | None = None, seed: int = 0) -> ExhaustiveComparison:
    """Compare the randomized draw against enumeration of every block start.

    With k equal to the number of admissible starts the randomized multiset
    must equal the exhaustive one exactly; with smaller k it subsamples it.
    Only practical at small n (the exhaustive side smooths every block).
    """
    n = series.n
    n_starts = n - b + 1
    if k is None:
        k = n_starts
    cfg = SubsampleConfig(b=b, k_blocks=k, seed=seed, b1=b1)
    dist = estimate_snr_distribution(series, cfg)
    ex = [block_estimate(series, t, cfg) for t in range(1, n_starts + 1)]
    ex_values = np.sort(np.array([e.snr_db for e in ex if not e.skipped]))
    return ExhaustiveComparison(
        randomized=dist.snr_values,
        exhaustive=ex_values,
        ks=ks_distance(dist.snr_values, ex_values),
        k=k,
        n_starts=n_starts,
    )
