"""
Frame error rates over AWGN
===========================

A rate-1/2 code of length 128 is designed at each operating point and
decoded with one path and with sixteen. A four-level ASK link with
multistage decoding follows.
"""
from polarmlc import ChannelConfig, construct_code, design_mlc, run_mlc, run_single_code

frames = 5000
for snr in (2.0, 2.5, 3.0, 3.5):
    code = construct_code(7, 64, design_snr_db=snr)
    ch = ChannelConfig(snr, seed=1)
    sc = run_single_code(code, 1, ch, frames, fast_nodes=True)
    scl = run_single_code(code, 16, ch, frames, fast_nodes=True)
    print(f"{snr:.1f} dB  FER L=1 {sc.fer:.4f}  L=16 {scl.fer:.4f}")

###############################################################################
# 16-ASK, 256 symbols per frame. Level rates equal the level capacities at
# 18 dB, which leaves no margin at this length, so the link runs 1.5 dB
# above the design point. The genie run conditions each level on the true
# lower bits. Propagated errors only land in frames that already failed, so
# the aggregate FER is the same; the per-level counts are not.

design = design_mlc(4, 18.0, 8, 8)
print([(lv.status.value, round(lv.rate, 3)) for lv in design.levels])
ch = ChannelConfig(19.5, seed=2)
for genie in (False, True):
    res = run_mlc(design, ch, 1000, genie=genie, fast_nodes=True)
    print(f"genie={genie!s:5} FER {res.aggregate.fer:.3f}  per level",
          [r.frame_errors for r in res.levels])
