"""
Decoding time against code rate
===============================

Codes of length 1024 are built by Gaussian-approximation density evolution,
one per rate, and their list-decoding time is counted in clock cycles.
Frozen and fully informational subtrees are cheap, so the cost peaks
at intermediate rates.
"""
import numpy as np

from polarmlc import tc_rate_sweep, tc_upper_bound
from _plot import plt, save

rates = np.round(np.arange(0.05, 0.951, 0.05), 2)
curves = {}
for n in (9, 10):
    rows = tc_rate_sweep(n, 16, rates)
    curves[n] = [r.tc for r in rows]
    print(f"N={2 ** n}: " + " ".join(f"{r.rate:.2f}:{r.tc}" for r in rows))
    print(f"  peak {max(curves[n])} at R={rates[int(np.argmax(curves[n]))]}, "
          f"no special nodes would cost {tc_upper_bound(n)}")

if plt is not None:
    fig, ax = plt.subplots()
    for n, tc in curves.items():
        ax.plot(rates, tc, "o-", label=f"N={2 ** n}")
    ax.set_xlabel("rate")
    ax.set_ylabel("clock cycles (L=16)")
    ax.legend()
    save(fig, "02_tc_vs_rate.png")
