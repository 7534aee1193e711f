"""
Latency of multilevel polar coding
==================================

Each level gets its own polar code at its own rate; levels that are nearly
noiseless go uncoded and nearly useless ones are frozen. The decoder works
through the levels one after another, so the costs add.
"""
import numpy as np

from polarmlc import mlc_tc_sweep, tc_rate_sweep
from _plot import plt, save

n, L = 10, 16
worst = max(r.tc for r in tc_rate_sweep(n, L, np.round(np.arange(0.01, 1.0, 0.01), 2)))
print("worst single code:", worst)

snrs = np.arange(5, 35.5, 0.5)
rows = mlc_tc_sweep(5, snrs, n, L)
for r in rows[::6]:
    print(f"{r.snr_db:5.1f} dB  levels {r.level_tc}  total {r.total_tc}  "
          f"ratio {r.total_tc / worst:.2f}")
totals = np.array([r.total_tc for r in rows])
print(f"mean ratio {np.mean(totals / worst):.2f}, max/min {totals.max() / totals.min():.1f}")

if plt is not None:
    fig, ax = plt.subplots()
    per = np.array([r.level_tc for r in rows])
    for i in range(per.shape[1]):
        ax.plot(snrs, per[:, i], color="0.6")
    ax.plot(snrs, totals, "k", label="sum")
    ax.axhline(worst, ls="--", label="worst single code")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("clock cycles")
    ax.legend()
    save(fig, "04_mlc_latency.png")
