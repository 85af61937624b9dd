"""Data-driven block length selection by quantile volatility.

Scans candidate block lengths, estimates the subsample SNR distribution at
each, and picks the interior candidate where the 5% and 95% quantiles are
most stable across neighbors.
"""

import math

from snrsub import SubsampleConfig, gen_design, select_block_size

FS = 44100.0
series = gen_design("ar", 10.0, FS, 1.0, seed=11)

candidates = [int(round(ms * FS / 1000.0)) for ms in (2, 4, 6, 8, 10, 12, 15, 20)]
template = SubsampleConfig(b=candidates[0], k_blocks=100, seed=5)
sel = select_block_size(series, candidates, template)

print("   b [samples]   b [ms]   q05 [dB]   q95 [dB]   volatility")
for i, b in enumerate(sel.candidates):
    vol = sel.volatility[i]
    vol_text = f"{vol:10.4f}" if not math.isnan(vol) else "         -"
    mark = "  <- chosen" if b == sel.chosen_b else ""
    print(f"  {b:12d}  {b / FS * 1000:7.2f}  {sel.q_low[i]:9.2f}  "
          f"{sel.q_high[i]:9.2f}  {vol_text}{mark}")

print(f"\nchosen block length: {sel.chosen_b} samples "
      f"({sel.chosen_b / FS * 1000:.2f} ms)")
