"""Show the correlation-corrected bandwidth selection on one block.

Fits a noisy sine block, prints the CV curve with the selected bandwidth,
and contrasts the choice with the independence-assuming objective to make
the effect of the autocorrelation correction visible.
"""

import numpy as np

from snrsub import gen_ar1, priestley_chao_fit, select_bandwidth

n = 441
t = np.arange(1, n + 1) / n
signal = 2.0 * np.sin(np.pi * t)
rng = np.random.default_rng(3)
y = signal + gen_ar1(-0.7, 0.25, n, rng)

fit = select_bandwidth(y)
print(f"selected bandwidth h = {fit.h_hat:.4f} with lag cutoff M = {fit.m_lags}")
print(f"residual sd {np.std(fit.residuals):.4f} vs noise sd 0.5")
print("\n   h        CV(h)")
for h, cv in fit.cv_curve:
    marker = "  <- selected" if h == fit.h_hat else ""
    print(f"  {h:.4f}  {cv:12.6g}{marker}")

print("\nIndependence-assuming objective (no lag correction) for comparison:")
best = None
for h, _ in fit.cv_curve:
    if int(n * h) < 1:
        continue
    e = y - priestley_chao_fit(y, h)
    factor = 1 - 0.75 / (n * h)
    cv = float(e @ e) / n / factor**2
    if best is None or cv < best[0]:
        best = (cv, h)
print(f"  it would pick h = {best[1]:.4f}; "
      f"the corrected objective picked h = {fit.h_hat:.4f}")

rmse = float(np.sqrt(np.mean((fit.fitted - signal) ** 2)))
print(f"\nfit RMSE against the true signal: {rmse:.4f}")
