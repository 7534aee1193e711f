"""
Bit levels of 32-ASK
====================

With natural labelling each bit of the symbol index sees its own channel.
Their capacities add up to the mutual information of the constellation,
and at any SNR most of them sit close to 0 or 1.
"""
import numpy as np

from polarmlc import level_rates
from _plot import plt, save

m = 5
snrs = np.arange(-5, 40.5, 0.5)
table = np.array([level_rates(m, s).rates for s in snrs])
total = np.array([level_rates(m, s).total for s in snrs])

print("chain rule gap:", np.max(np.abs(table.sum(axis=1) - total)))
for s in (5, 15, 25, 35):
    row = table[snrs == s][0]
    mid = np.sum((row > 0.01) & (row < 0.99))
    print(f"{s:2d} dB  " + " ".join(f"{r:.3f}" for r in row) + f"   {mid} level(s) in (0.01, 0.99)")

if plt is not None:
    fig, ax = plt.subplots()
    for i in range(m):
        ax.plot(snrs, table[:, i], label=f"level {i + 1}")
    ax.plot(snrs, total / m, "k--", label="I(X;Y) / m")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("bits per level")
    ax.legend()
    save(fig, "03_level_rates.png")
