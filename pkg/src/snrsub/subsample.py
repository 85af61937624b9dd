"""Randomized block subsampling of the SNR statistic.

Draws K block starts uniformly without replacement, smooths each block on
its own local time grid, forms the per-block SNR from the fitted signal
power and the residual variance over a short secondary window, and exposes
the K values as an empirical distribution with quantile and confidence
interval accessors.  No step ever computes over the full series, so cost is
governed by the block length rather than the sample size.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import TimeSeries, empirical_quantile
from .simgen import derive_rng, derive_seed
from .smoother import BandwidthGrid, priestley_chao_fit, select_bandwidth

__all__ = [
    "SubsampleConfig",
    "SubsampleEstimate",
    "SnrDistribution",
    "BlockSizeSelection",
    "ExcessiveSkipsError",
    "default_b1",
    "draw_blocks",
    "block_estimate",
    "estimate_snr_distribution",
    "confidence_interval",
    "select_block_size",
]

# below this fraction of the signal power the residual variance is treated as
# degenerate and the block is skipped (the dB statistic is undefined at 0)
VARIANCE_FLOOR = 1e-12
SKIP_BUDGET = 0.10


class ExcessiveSkipsError(RuntimeError):
    """More than the tolerated share of blocks had degenerate noise variance."""

    def __init__(self, skipped: int, total: int):
        self.skipped = skipped
        self.total = total
        super().__init__(
            f"{skipped} of {total} blocks skipped (budget {SKIP_BUDGET:.0%}); "
            "quantiles would be biased by silent mass-skipping"
        )


def default_b1(b: int) -> int:
    """Secondary window floor(b**(2/5)), floored at 4 to keep the variance meaningful."""
    return max(4, int(math.floor(b ** 0.4 + 1e-9)))


@dataclass(frozen=True)
class SubsampleConfig:
    """Block-subsampling parameters.

    ``b`` is the primary block length in samples (at least 16 so the
    smoother has a workable window), ``b1`` the secondary window for the
    noise variance (defaults to floor(b**(2/5)), never below 4), ``k_blocks``
    the number of random blocks, and ``seed`` the master seed.  With
    ``shared_bandwidth`` the cross-validation runs once on the first drawn
    block and its bandwidth is reused everywhere; this is an approximation
    that trades the per-block adaptation for speed.
    """

    b: int
    k_blocks: int
    seed: int = 0
    b1: int | None = None
    grid: BandwidthGrid = field(default=BandwidthGrid())
    workers: int = 1
    shared_bandwidth: bool = False

    def __post_init__(self):
        if self.b < 16:
            raise ValueError(f"block length must be >= 16 samples, got {self.b}")
        if self.k_blocks < 1:
            raise ValueError(f"k_blocks must be >= 1, got {self.k_blocks}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        b1 = default_b1(self.b) if self.b1 is None else int(self.b1)
        if not (4 <= b1 < self.b):
            raise ValueError(f"need 4 <= b1 < b, got b1={b1}, b={self.b}")
        object.__setattr__(self, "b1", b1)


@dataclass(frozen=True)
class SubsampleEstimate:
    """One block's statistics.

    ``start`` is the 1-based position of the first sample of the block;
    ``signal_power`` the mean squared fitted signal over the block;
    ``noise_variance`` the sample variance of the residuals over the first
    b1 block points; ``snr_db`` their ratio in decibels (NaN when skipped).
    """

    start: int
    signal_power: float
    noise_variance: float
    snr_db: float
    h_hat: float
    skipped: bool = False


@dataclass(frozen=True)
class SnrDistribution:
    """The retained per-block SNR values with quantile accessors."""

    snr_values: np.ndarray
    estimates: tuple[SubsampleEstimate, ...]
    config: SubsampleConfig
    skipped: int

    @property
    def count(self) -> int:
        return int(self.snr_values.size)

    def quantile(self, gamma2: float) -> float:
        return empirical_quantile(self.snr_values, gamma2)

    def quantiles(self, levels) -> dict[float, float]:
        return {float(g): self.quantile(g) for g in levels}


def draw_blocks(n: int, b: int, k: int, seed: int) -> np.ndarray:
    """K distinct block starts drawn uniformly from {1, ..., n-b+1}.

    Starts are 1-based sample positions, returned in draw order; the draw is
    a pure function of the seed.
    """
    if not (1 <= b <= n):
        raise ValueError(f"need 1 <= b <= n, got b={b}, n={n}")
    n_starts = n - b + 1
    if not (1 <= k <= n_starts):
        raise ValueError(f"k={k} exceeds the {n_starts} admissible block starts")
    rng = derive_rng(seed)
    return rng.choice(n_starts, size=k, replace=False).astype(np.int64) + 1


def _block_values(block: np.ndarray, b1: int, grid: BandwidthGrid,
                  shared_h: float | None):
    """Per-block statistics from raw block samples.

    Returns (signal_power, noise_variance, snr_db, h_hat, skipped).
    """
    if shared_h is None:
        fit = select_bandwidth(block, grid=grid)
        fitted, residuals, h = fit.fitted, fit.residuals, fit.h_hat
    else:
        fitted = priestley_chao_fit(block, shared_h)
        residuals = block - fitted
        h = shared_h
    u = float(fitted @ fitted) / fitted.size
    v = float(np.var(residuals[:b1]))
    if v < VARIANCE_FLOOR * max(u, 1.0):
        return u, v, math.nan, h, True
    snr = 10.0 * math.log10(u / v)
    if not math.isfinite(snr):
        return u, v, math.nan, h, True
    return u, v, snr, h, False


def _worker(payload):
    block, b1, grid, shared_h = payload
    return _block_values(block, b1, grid, shared_h)


def block_estimate(series: TimeSeries, start: int, cfg: SubsampleConfig) -> SubsampleEstimate:
    """Estimate one block starting at 1-based position ``start``.

    The block is smoothed on its local grid (i - start + 1)/b with a
    CV-selected bandwidth; the residuals feeding the noise variance come from
    the first b1 points of the block.
    """
    n = series.n
    if not (1 <= start and start + cfg.b - 1 <= n):
        raise ValueError(f"block [{start}, {start + cfg.b - 1}] outside series of length {n}")
    block = series.samples[start - 1:start - 1 + cfg.b]
    u, v, snr, h, skipped = _block_values(block, cfg.b1, cfg.grid, None)
    return SubsampleEstimate(int(start), u, v, snr, h, skipped)


def estimate_snr_distribution(series: TimeSeries, cfg: SubsampleConfig) -> SnrDistribution:
    """Run the full randomized subsampling pass and collect the SNR values.

    Starts are drawn from the seeded generator before any parallel work, so
    the result is a pure function of (series, cfg) regardless of worker
    count.  Fails if more than 10% of blocks are skipped.
    """
    n = series.n
    if cfg.b > n:
        raise ValueError(f"block length {cfg.b} exceeds series length {n}")
    starts = draw_blocks(n, cfg.b, cfg.k_blocks, cfg.seed)
    blocks = [series.samples[t - 1:t - 1 + cfg.b] for t in starts]

    shared_h = None
    if cfg.shared_bandwidth:
        shared_h = select_bandwidth(blocks[0], grid=cfg.grid).h_hat

    payloads = [(blk, cfg.b1, cfg.grid, shared_h) for blk in blocks]
    if cfg.workers == 1:
        values = [_worker(p) for p in payloads]
    else:
        chunk = max(1, len(payloads) // (4 * cfg.workers))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            values = list(pool.map(_worker, payloads, chunksize=chunk))

    estimates = tuple(
        SubsampleEstimate(int(t), u, v, snr, h, skipped)
        for t, (u, v, snr, h, skipped) in zip(starts, values)
    )
    skipped = sum(e.skipped for e in estimates)
    if skipped > SKIP_BUDGET * cfg.k_blocks:
        raise ExcessiveSkipsError(skipped, cfg.k_blocks)
    snr_values = np.sort(np.array([e.snr_db for e in estimates if not e.skipped]))
    return SnrDistribution(snr_values, estimates, cfg, skipped)


def confidence_interval(dist: SnrDistribution, level: float) -> tuple[float, float]:
    """Equal-tailed interval [q(alpha/2), q(1 - alpha/2)] at coverage ``level``.

    The endpoints are raw empirical quantiles of the subsample SNR values;
    no centering statistic over the full series is involved.
    """
    if not (0.0 < level < 1.0):
        raise ValueError(f"confidence level must lie in (0, 1), got {level}")
    if dist.count == 0:
        raise ValueError("confidence interval of an empty distribution")
    alpha = 1.0 - level
    return dist.quantile(alpha / 2.0), dist.quantile(1.0 - alpha / 2.0)


@dataclass(frozen=True)
class BlockSizeSelection:
    """Chosen block length plus the per-candidate quantile/volatility table."""

    chosen_b: int
    candidates: tuple[int, ...]
    q_low: tuple[float, ...]
    q_high: tuple[float, ...]
    volatility: tuple[float, ...]  # NaN at the two endpoints
    levels: tuple[float, float]


def select_block_size(series: TimeSeries, candidates, cfg_template: SubsampleConfig,
                      levels: tuple[float, float] = (0.05, 0.95)) -> BlockSizeSelection:
    """Pick the block length where the target quantiles are most stable.

    Runs the subsample estimation at every candidate b, computes the two
    target quantiles, and scores each interior candidate by the summed
    standard deviation of each quantile over the three-candidate window
    centered there.  Returns the interior candidate with minimal volatility,
    ties toward the smaller b.  The secondary window follows the default
    b1 rule at every candidate.
    """
    cand = [int(b) for b in candidates]
    if len(cand) < 5:
        raise ValueError(f"need at least 5 candidate block lengths, got {len(cand)}")
    if any(b2 <= b1 for b1, b2 in zip(cand, cand[1:])):
        raise ValueError("candidate block lengths must be strictly increasing")
    n = series.n
    if cand[-1] > n or cfg_template.k_blocks > n - cand[-1] + 1:
        raise ValueError("largest candidate infeasible for this series")

    q_low, q_high = [], []
    for b in cand:
        cfg = SubsampleConfig(
            b=b,
            k_blocks=cfg_template.k_blocks,
            seed=derive_seed(cfg_template.seed, b),
            grid=cfg_template.grid,
            workers=cfg_template.workers,
            shared_bandwidth=cfg_template.shared_bandwidth,
        )
        dist = estimate_snr_distribution(series, cfg)
        q_low.append(dist.quantile(levels[0]))
        q_high.append(dist.quantile(levels[1]))

    vol = [math.nan] * len(cand)
    for j in range(1, len(cand) - 1):
        vol[j] = float(np.std(q_low[j - 1:j + 2], ddof=1)
                       + np.std(q_high[j - 1:j + 2], ddof=1))
    interior = vol[1:-1]
    chosen = cand[1 + int(np.argmin(interior))]
    return BlockSizeSelection(
        chosen_b=chosen,
        candidates=tuple(cand),
        q_low=tuple(q_low),
        q_high=tuple(q_high),
        volatility=tuple(vol),
        levels=(float(levels[0]), float(levels[1])),
    )
