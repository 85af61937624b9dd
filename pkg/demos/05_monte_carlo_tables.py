"""Reproduce the Monte Carlo evaluation tables at a quick desk scale.

Runs a reduced replica count so the demo finishes in about a minute; the
full desk-scale experiment lives in tests/test_acceptance.py and the CLI
(`snrsub mc`).
"""

from snrsub import ExperimentSpec, mse_signal_power, oracle_quantiles, quantile_mae

spec = ExperimentSpec(
    design="ar",
    true_snr_db=10.0,
    duration_s=1.0,
    block_lengths=(441, 662),
    k_blocks=100,
    replicas=10,
    seed=99,
    levels=(0.1, 0.5, 0.9),
)

print("signal-power MSE per block length (10 replicas):")
for cell in mse_signal_power(spec).cells:
    print(f"  b = {cell.b}: {cell.mean:.5f} (se {cell.se:.5f})")

print("\noracle quantiles of the per-block SNR statistic (b = 441):")
oracle = oracle_quantiles("ar", 10.0, 441, None, spec.levels, 2000, seed=1,
                          duration_s=spec.duration_s)
for g, q in oracle.items():
    print(f"  q({g:.1f}) = {q:6.2f} dB")

print("\nmean absolute deviation of estimated quantiles from the oracle:")
report = quantile_mae(spec, oracle_replicas=2000)
for cell in report.cells:
    print(f"  b = {cell.b}, level {cell.level:.1f}: {cell.mean:.3f} dB (se {cell.se:.3f})")

print("\nCSV form of the last report:")
print(report.to_csv())
