import itertools

import numpy as np
import pytest
from scipy.special import logsumexp

from polarmlc.construction import construct_code
from polarmlc.mlc import LevelStatus, build_constellation, design_mlc
from polarmlc.simulate import (
    ChannelConfig,
    SimResult,
    awgn,
    bpsk_llr,
    frame_rng,
    multistage_llr,
    run_mlc,
    run_single_code,
)


def test_awgn_variance_and_determinism():
    x = np.zeros(10 ** 6)
    y = awgn(x, 0.7, np.random.default_rng(1))
    assert np.var(y) == pytest.approx(0.49, rel=0.01)
    assert np.array_equal(y, awgn(x, 0.7, np.random.default_rng(1)))
    with pytest.raises(ValueError):
        awgn(x, 0.0, np.random.default_rng(1))


def test_frame_rng_streams_are_independent_of_chunking():
    a = frame_rng(5, 17).standard_normal(4)
    assert np.array_equal(a, frame_rng(5, 17).standard_normal(4))
    assert not np.array_equal(a, frame_rng(5, 18).standard_normal(4))
    assert not np.array_equal(a, frame_rng(6, 17).standard_normal(4))


def test_bpsk_llr():
    assert bpsk_llr(0.5, 1.0) == 1.0
    assert bpsk_llr(-1.0, 0.5) == -8.0


def test_channel_config():
    assert ChannelConfig(0.0).sigma2() == 1.0
    assert ChannelConfig(10.0).sigma2(5.0) == pytest.approx(0.5)


def test_two_point_multistage_llr_is_bpsk():
    c = build_constellation(1)
    y = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(multistage_llr(y, 0.8, 1, None, c), bpsk_llr(y, 0.8))


def test_multistage_llr_symmetry():
    # the sign of the level-1 LLR at y = 0 vanishes by symmetry of the labels
    c = build_constellation(2, msb_first=True)
    assert multistage_llr(np.array([0.0]), 1.0, 1, None, c)[0] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("msb_first", [False, True])
def test_multistage_llr_matches_enumeration(msb_first, rng):
    c = build_constellation(3, msb_first)
    sigma = 1.3
    y = rng.normal(0, 4, 50)
    for level in (1, 2, 3):
        for prefix in itertools.product([0, 1], repeat=level - 1):
            bits = np.broadcast_to(np.array(prefix, dtype=np.uint8), (50, level - 1))
            got = multistage_llr(y, sigma, level, bits, c)
            for j in range(50):
                terms = {0: [], 1: []}
                for k, s in enumerate(c.symbols):
                    lab = c.labels[k]
                    if tuple(lab[:level - 1]) == prefix:
                        terms[lab[level - 1]].append(-(y[j] - s) ** 2 / (2 * sigma ** 2))
                want = logsumexp(terms[0]) - logsumexp(terms[1])
                assert got[j] == pytest.approx(want, abs=1e-9)


def test_multistage_llr_validation():
    c = build_constellation(2)
    with pytest.raises(ValueError):
        multistage_llr(np.zeros(3), 1.0, 3, None, c)
    with pytest.raises(ValueError):
        multistage_llr(np.zeros(3), 1.0, 2, np.zeros((3, 2)), c)


def test_sim_result_addition():
    r = SimResult(10, 100, 3, 2) + SimResult(10, 100, 1, 1)
    assert (r.frames, r.bits, r.bit_errors, r.frame_errors) == (20, 200, 4, 3)
    assert r.ber == 0.02 and r.fer == 0.15
    assert SimResult().fer == 0.0


def test_high_snr_is_error_free():
    code = construct_code(6, 32)
    res = run_single_code(code, 4, ChannelConfig(40.0, seed=1), 300)
    assert res.frames == 300 and res.bits == 300 * 32
    assert res.frame_errors == 0


def test_deterministic_and_chunk_invariant():
    code = construct_code(6, 32)
    ch = ChannelConfig(1.0, seed=9)
    a = run_single_code(code, 4, ch, 600, chunk=600)
    b = run_single_code(code, 4, ch, 600, chunk=77)
    c = run_single_code(code, 4, ch, 600, chunk=200, workers=2)
    assert a == b == c
    assert a.frame_errors > 0


def test_fast_nodes_give_similar_error_counts():
    code = construct_code(7, 64)
    ch = ChannelConfig(1.5, seed=3)
    plain = run_single_code(code, 4, ch, 2000)
    fast = run_single_code(code, 4, ch, 2000, fast_nodes=True)
    assert abs(plain.frame_errors - fast.frame_errors) <= 0.01 * 2000


def test_list_decoding_helps():
    code = construct_code(7, 64, design_snr_db=2.5)
    ch = ChannelConfig(2.5, seed=4)
    sc = run_single_code(code, 1, ch, 3000, fast_nodes=True)
    scl = run_single_code(code, 8, ch, 3000, fast_nodes=True)
    assert scl.frame_errors < sc.frame_errors


def test_early_stop():
    code = construct_code(6, 48)
    res = run_single_code(code, 2, ChannelConfig(-2.0), 10_000, chunk=100, max_frame_errors=20)
    assert res.frame_errors >= 20 and res.frames < 10_000 and res.frames % 100 == 0


def test_one_level_mlc_is_the_single_code_link():
    d = design_mlc(1, 2.0, 6, 4)
    assert d.coded_levels == [0]
    ch = ChannelConfig(2.0, seed=11)
    mlc = run_mlc(d, ch, 500)
    single = run_single_code(d.levels[0].code, 4, ch, 500)
    assert mlc.levels[0] == single
    assert mlc.aggregate.frame_errors == single.frame_errors


def test_genie_is_no_worse_than_decisions():
    d = design_mlc(3, 12.0, 6, 4)
    ch = ChannelConfig(12.0, seed=2)
    real = run_mlc(d, ch, 600)
    genie = run_mlc(d, ch, 600, genie=True)
    # the lowest level sees identical inputs either way
    assert genie.levels[0] == real.levels[0]
    assert genie.aggregate.frame_errors <= real.aggregate.frame_errors


def test_uncoded_levels_at_high_snr():
    d = design_mlc(2, 45.0, 5, 2)
    assert all(lv.status is LevelStatus.UNCODED for lv in d.levels)
    res = run_mlc(d, ChannelConfig(45.0, seed=0), 200)
    assert res.aggregate.bits == 200 * 32 * 2
    assert res.aggregate.frame_errors == 0 and res.symbol_errors == 0


def test_frozen_levels_carry_no_bits():
    d = design_mlc(3, -5.0, 5, 2)
    frozen = [i for i, lv in enumerate(d.levels) if lv.status is LevelStatus.FROZEN]
    assert frozen
    res = run_mlc(d, ChannelConfig(-5.0, seed=0), 50)
    assert all(res.levels[i].bits == 0 for i in frozen)


def test_mlc_workers_match():
    d = design_mlc(2, 9.0, 5, 2)
    ch = ChannelConfig(9.0, seed=5)
    assert run_mlc(d, ch, 300, chunk=50) == run_mlc(d, ch, 300, chunk=100, workers=2)
