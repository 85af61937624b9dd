import math

import numpy as np
import pytest

from snrsub.core import TimeSeries
from snrsub.simgen import gen_design
from snrsub.subsample import (
    ExcessiveSkipsError,
    SubsampleConfig,
    block_estimate,
    confidence_interval,
    default_b1,
    draw_blocks,
    estimate_snr_distribution,
    select_block_size,
)


def ar_series(duration=0.25, snr=10.0, seed=3, fs=44100.0):
    return gen_design("ar", snr, fs, duration, seed=seed)


class TestConfig:
    def test_default_b1_rule(self):
        assert default_b1(441) == 11
        assert default_b1(662) == 13
        assert default_b1(16) == 4  # floored
        assert SubsampleConfig(b=441, k_blocks=10).b1 == 11
        assert SubsampleConfig(b=662, k_blocks=10).b1 == 13

    def test_b1_override_and_bounds(self):
        assert SubsampleConfig(b=100, k_blocks=5, b1=7).b1 == 7
        with pytest.raises(ValueError):
            SubsampleConfig(b=100, k_blocks=5, b1=3)
        with pytest.raises(ValueError):
            SubsampleConfig(b=100, k_blocks=5, b1=100)
        with pytest.raises(ValueError):
            SubsampleConfig(b=15, k_blocks=5)
        with pytest.raises(ValueError):
            SubsampleConfig(b=100, k_blocks=0)


class TestDrawBlocks:
    def test_single_admissible_start(self):
        assert list(draw_blocks(10, 10, 1, seed=0)) == [1]

    def test_exhaustive_draw(self):
        starts = draw_blocks(100, 10, 91, seed=5)
        assert sorted(starts) == list(range(1, 92))

    def test_distinct_in_range_reproducible(self):
        a = draw_blocks(10**5, 441, 200, seed=9)
        b = draw_blocks(10**5, 441, 200, seed=9)
        np.testing.assert_array_equal(a, b)
        assert len(set(a.tolist())) == 200
        assert a.min() >= 1 and a.max() <= 10**5 - 441 + 1
        c = draw_blocks(10**5, 441, 200, seed=10)
        assert not np.array_equal(a, c)

    def test_k_too_large(self):
        with pytest.raises(ValueError):
            draw_blocks(100, 10, 92, seed=0)


class TestBlockEstimate:
    def test_signal_power_is_bruteforce_mean_of_squares(self):
        ts = ar_series()
        cfg = SubsampleConfig(b=441, k_blocks=1, seed=0)
        est = block_estimate(ts, 1000, cfg)
        from snrsub.smoother import select_bandwidth

        block = ts.samples[999:999 + 441]
        fit = select_bandwidth(block, grid=cfg.grid)
        brute_u = sum(v * v for v in fit.fitted) / 441
        assert est.signal_power == pytest.approx(brute_u, rel=1e-12)

    def test_noise_variance_is_two_pass_over_first_b1(self):
        ts = ar_series()
        cfg = SubsampleConfig(b=441, k_blocks=1, seed=0)
        est = block_estimate(ts, 777, cfg)
        from snrsub.smoother import select_bandwidth

        block = ts.samples[776:776 + 441]
        fit = select_bandwidth(block, grid=cfg.grid)
        window = fit.residuals[:11]
        mean = sum(window) / 11
        brute_v = sum((v - mean) ** 2 for v in window) / 11
        assert est.noise_variance == pytest.approx(brute_v, rel=1e-12)
        assert est.snr_db == pytest.approx(
            10 * math.log10(est.signal_power / est.noise_variance), rel=1e-12
        )

    def test_constant_block_skipped(self):
        ts = TimeSeries(np.ones(2000), 1000.0)
        cfg = SubsampleConfig(b=441, k_blocks=1, seed=0)
        est = block_estimate(ts, 5, cfg)
        assert est.skipped
        assert math.isnan(est.snr_db)

    def test_noiseless_sine_not_skipped_but_huge(self):
        from snrsub.simgen import SignalSpec, gen_sine

        ts = gen_sine(SignalSpec(1.0, 50.0, 44100.0, 0.1))
        cfg = SubsampleConfig(b=441, k_blocks=1, seed=0)
        est = block_estimate(ts, 100, cfg)
        assert not est.skipped
        assert est.snr_db > 40.0
        assert est.signal_power == pytest.approx(0.5, rel=0.05)

    def test_out_of_range_start(self):
        ts = ar_series(duration=0.05)
        cfg = SubsampleConfig(b=441, k_blocks=1, seed=0)
        with pytest.raises(ValueError):
            block_estimate(ts, ts.n - 100, cfg)


class TestEstimateDistribution:
    def test_single_block(self):
        ts = ar_series()
        cfg = SubsampleConfig(b=441, k_blocks=1, seed=4)
        dist = estimate_snr_distribution(ts, cfg)
        assert dist.count == 1
        v = dist.snr_values[0]
        for g in (0.05, 0.5, 0.95):
            assert dist.quantile(g) == v

    def test_sorted_and_consistent(self):
        ts = ar_series()
        dist = estimate_snr_distribution(ts, SubsampleConfig(b=441, k_blocks=64, seed=4))
        assert np.all(np.diff(dist.snr_values) >= 0)
        assert dist.count + dist.skipped == 64
        retained = sorted(e.snr_db for e in dist.estimates if not e.skipped)
        np.testing.assert_array_equal(dist.snr_values, retained)

    def test_worker_count_never_changes_results(self):
        ts = ar_series()
        base = estimate_snr_distribution(ts, SubsampleConfig(b=441, k_blocks=32, seed=7))
        for workers in (4, 8):
            alt = estimate_snr_distribution(
                ts, SubsampleConfig(b=441, k_blocks=32, seed=7, workers=workers)
            )
            np.testing.assert_array_equal(base.snr_values, alt.snr_values)
            assert [e.start for e in base.estimates] == [e.start for e in alt.estimates]

    def test_shared_bandwidth_mode(self):
        ts = ar_series()
        dist = estimate_snr_distribution(
            ts, SubsampleConfig(b=441, k_blocks=16, seed=7, shared_bandwidth=True)
        )
        hs = {e.h_hat for e in dist.estimates}
        assert len(hs) == 1

    def test_never_reads_outside_drawn_blocks(self):
        ts = ar_series()
        cfg = SubsampleConfig(b=441, k_blocks=24, seed=13)
        expected = estimate_snr_distribution(ts, cfg)
        starts = draw_blocks(ts.n, cfg.b, cfg.k_blocks, cfg.seed)
        poisoned = np.full(ts.n, 1e300)
        for t in starts:
            poisoned[t - 1:t - 1 + cfg.b] = ts.samples[t - 1:t - 1 + cfg.b]
        alt = estimate_snr_distribution(TimeSeries(poisoned, ts.sample_rate_hz), cfg)
        np.testing.assert_array_equal(expected.snr_values, alt.snr_values)

    def test_excessive_skips(self):
        ts = TimeSeries(np.ones(5000), 1000.0)
        with pytest.raises(ExcessiveSkipsError) as exc:
            estimate_snr_distribution(ts, SubsampleConfig(b=441, k_blocks=20, seed=1))
        assert exc.value.skipped == 20
        assert exc.value.total == 20

    def test_k_too_large(self):
        ts = ar_series(duration=0.02)
        with pytest.raises(ValueError):
            estimate_snr_distribution(ts, SubsampleConfig(b=441, k_blocks=10**6, seed=1))


class TestConfidenceInterval:
    def test_order_statistics_example(self):
        vals = np.arange(1.0, 101.0)
        dist = _dist_from_values(vals)
        assert confidence_interval(dist, 0.90) == (5.0, 95.0)

    def test_single_value_zero_width(self):
        dist = _dist_from_values(np.array([3.3]))
        lo, hi = confidence_interval(dist, 0.9)
        assert lo == hi == 3.3

    def test_ordering_and_nesting(self, rng):
        for _ in range(20):
            vals = np.sort(rng.normal(size=rng.integers(5, 60)))
            dist = _dist_from_values(vals)
            lo, hi = confidence_interval(dist, 0.9)
            med = dist.quantile(0.5)
            assert lo <= med <= hi
            lo2, hi2 = confidence_interval(dist, 0.95)
            assert lo2 <= lo and hi <= hi2

    def test_level_bounds(self):
        dist = _dist_from_values(np.arange(1.0, 11.0))
        for level in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                confidence_interval(dist, level)


def _dist_from_values(values):
    from snrsub.subsample import SnrDistribution

    cfg = SubsampleConfig(b=16, k_blocks=max(1, len(values)), seed=0)
    return SnrDistribution(np.sort(values), (), cfg, 0)


class TestSelectBlockSize:
    def test_constant_quantiles_tie_to_smallest_interior(self, monkeypatch):
        import snrsub.subsample as sub

        fixed = _dist_from_values(np.arange(0.0, 40.0))

        monkeypatch.setattr(sub, "estimate_snr_distribution", lambda ts, cfg: fixed)
        ts = ar_series(duration=0.1)
        cand = [20, 30, 40, 50, 60]
        sel = sub.select_block_size(ts, cand, SubsampleConfig(b=20, k_blocks=8, seed=0))
        assert sel.chosen_b == 30  # smallest interior candidate
        interior = [v for v in sel.volatility if not math.isnan(v)]
        assert len(interior) == 3
        assert all(v == 0.0 for v in interior)
        assert math.isnan(sel.volatility[0]) and math.isnan(sel.volatility[-1])

    def test_end_to_end_choice_in_grid(self):
        ts = ar_series(duration=0.3, seed=8)
        cand = [int(round(ms * 44.1)) for ms in (4, 8, 12, 16, 20)]
        sel = select_block_size(ts, cand, SubsampleConfig(b=100, k_blocks=48, seed=5))
        assert sel.chosen_b in cand[1:-1]
        assert len(sel.q_low) == len(cand) == len(sel.q_high)

    def test_grid_validation(self):
        ts = ar_series(duration=0.1)
        cfg = SubsampleConfig(b=100, k_blocks=8, seed=0)
        with pytest.raises(ValueError):
            select_block_size(ts, [100, 200, 300, 400], cfg)
        with pytest.raises(ValueError):
            select_block_size(ts, [100, 200, 200, 300, 400], cfg)
        with pytest.raises(ValueError):
            select_block_size(ts, [100, 200, 300, 400, 10**6], cfg)
