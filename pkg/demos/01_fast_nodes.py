"""
Decoding a small polar code, leaf by leaf and node by node
==========================================================

An eight-bit code with information set {6, 7, 8} is decoded with a list of
four paths. The first half of the tree is entirely frozen and the last pair
is entirely informational, so both can be handled in one step.
"""
import numpy as np

from polarmlc import PolarCode, encode, scl_decode, sc_decode
from polarmlc.latency import tc_code

code = PolarCode.from_info_set(3, [6, 7, 8])
print(code)

# encode a message and send it over a noisy BPSK channel
rng = np.random.default_rng(1)
u = np.zeros(8, dtype=np.uint8)
u[code.info_mask] = [1, 0, 1]
x = encode(u)
sigma = 0.9
y = (1.0 - 2.0 * x) + sigma * rng.standard_normal(8)
llr = 2 * y / sigma ** 2
print("codeword ", x)
print("LLRs     ", np.round(llr, 2))

###############################################################################
# Successive cancellation keeps one path; the list decoder keeps four.

sc = sc_decode(llr, code)
print("SC  u_hat", sc.u_hat, "metric", round(float(sc.pm), 3))
for fast in (False, True):
    res = scl_decode(llr, code, 4, fast_nodes=fast)
    print(f"SCL fast={fast!s:5} u_hat", res.u_hat)
    for p in res.paths:
        print(f"    path {p.path_id}: {p.u_hat}  metric {p.pm:.3f}")

###############################################################################
# The same tree in clock cycles.

report = tc_code(code, 4)
for item in report.breakdown:
    v = item.node
    print(f"leaves {v.first_leaf}..{v.last_leaf}: {item.kind.value:10} cost {item.cost}")
print("total", report.total)
