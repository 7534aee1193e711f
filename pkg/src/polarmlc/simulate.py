"""Monte-Carlo AWGN link simulation for single polar codes and MLC schemes.

Every frame draws from its own generator seeded by ``(seed, frame_index)``,
so results do not depend on how frames are grouped into batches or spread
over worker processes. Per frame, the draws happen in a fixed order: the
information bits of each level (level order), then the N noise samples.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .decoder import scl_decode
from .mlc import AskConstellation, LevelStatus, MlcDesign
from .polar import PolarCode, encode

__all__ = [
    "ChannelConfig",
    "SimResult",
    "MlcSimResult",
    "awgn",
    "bpsk_llr",
    "multistage_llr",
    "frame_rng",
    "run_single_code",
    "run_mlc",
]


@dataclass(frozen=True)
class ChannelConfig:
    """AWGN channel at ``snr_db`` = Es/sigma^2 (dB); ``seed`` drives every draw."""

    snr_db: float
    seed: int = 0

    def sigma2(self, es: float = 1.0) -> float:
        return es / 10.0 ** (self.snr_db / 10.0)


@dataclass
class SimResult:
    frames: int = 0
    bits: int = 0
    bit_errors: int = 0
    frame_errors: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else 0.0

    def __add__(self, other: "SimResult") -> "SimResult":
        return SimResult(self.frames + other.frames, self.bits + other.bits,
                         self.bit_errors + other.bit_errors,
                         self.frame_errors + other.frame_errors)


@dataclass
class MlcSimResult:
    levels: list[SimResult] = field(default_factory=list)
    aggregate: SimResult = field(default_factory=SimResult)
    symbol_errors: int = 0

    def __add__(self, other: "MlcSimResult") -> "MlcSimResult":
        if not self.levels:
            return other
        return MlcSimResult([a + b for a, b in zip(self.levels, other.levels)],
                            self.aggregate + other.aggregate,
                            self.symbol_errors + other.symbol_errors)


def frame_rng(seed: int, frame: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(frame)])


def awgn(symbols, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """``symbols`` plus i.i.d. N(0, sigma^2) noise."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    symbols = np.asarray(symbols, dtype=float)
    return symbols + sigma * rng.standard_normal(symbols.shape)


def bpsk_llr(y, sigma: float):
    """Channel LLR for BPSK with bit 0 -> +1, bit 1 -> -1."""
    return 2.0 * np.asarray(y, dtype=float) / sigma ** 2


def multistage_llr(y, sigma: float, level: int, decided_bits, constellation: AskConstellation):
    """LLR of the bit at ``level`` (1-based) given the bits of all lower levels.

    ``decided_bits`` has shape ``y.shape + (level - 1,)`` (it may be omitted
    for level 1). Only symbols whose labels agree with the decided prefix
    enter the two log-sum-exp terms.
    """
    c = constellation
    if not 1 <= level <= c.m:
        raise ValueError(f"level {level} outside 1..{c.m}")
    y = np.asarray(y, dtype=float)
    lab = c.labels
    if decided_bits is None:
        decided_bits = np.zeros(y.shape + (0,), dtype=np.uint8)
    decided_bits = np.asarray(decided_bits, dtype=np.uint8)
    if decided_bits.shape != y.shape + (level - 1,):
        raise ValueError(f"decided_bits must have shape {y.shape + (level - 1,)}")
    # consistent[..., k]: symbol k agrees with the decided prefix
    consistent = np.all(decided_bits[..., None, :] == lab[:, :level - 1], axis=-1)
    zero = consistent & (lab[:, level - 1] == 0)
    one = consistent & (lab[:, level - 1] == 1)
    if not (zero.any(axis=-1).all() and one.any(axis=-1).all()):
        raise ValueError("empty sub-constellation for the decided prefix")
    ll = -(y[..., None] - c.symbols) ** 2 / (2.0 * sigma ** 2)
    return logsumexp(np.where(zero, ll, -np.inf), axis=-1) - \
        logsumexp(np.where(one, ll, -np.inf), axis=-1)


# -- single code ------------------------------------------------------------

def _single_chunk(args):
    code, L, channel, frames, fast_nodes = args
    N, mask = code.N, code.info_mask
    u = np.zeros((len(frames), N), dtype=np.uint8)
    noise = np.empty((len(frames), N))
    for r, f in enumerate(frames):
        rng = frame_rng(channel.seed, f)
        u[r, mask] = rng.integers(0, 2, code.K)
        noise[r] = rng.standard_normal(N)
    sigma = np.sqrt(channel.sigma2())
    y = (1.0 - 2.0 * encode(u)) + sigma * noise
    res = scl_decode(bpsk_llr(y, sigma), code, L, fast_nodes=fast_nodes)
    err = (res.u_hat != u)[:, mask]
    return SimResult(len(frames), err.size, int(err.sum()), int(err.any(axis=1).sum()))


def _run_chunks(fn, payloads, workers, stop):
    total = None
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(fn, payloads):
                total = part if total is None else total + part
                if stop(total):
                    break
    else:
        for p in payloads:
            part = fn(p)
            total = part if total is None else total + part
            if stop(total):
                break
    return total


def _chunks(frames: int, chunk: int):
    return [range(s, min(s + chunk, frames)) for s in range(0, frames, chunk)]


def run_single_code(code: PolarCode, L: int, channel: ChannelConfig, frames: int, *,
                    fast_nodes: bool = False, workers: int = 1, chunk: int = 500,
                    max_frame_errors: int | None = None) -> SimResult:
    """BPSK + AWGN + SC-list decoding; errors are counted on information bits.

    With ``max_frame_errors`` the run stops after the first chunk that brings
    the frame-error count to the limit.
    """
    if frames < 0:
        raise ValueError("frames must be >= 0")
    payloads = [(code, L, channel, fr, fast_nodes) for fr in _chunks(frames, chunk)]
    stop = (lambda r: r.frame_errors >= max_frame_errors) if max_frame_errors else (lambda r: False)
    return _run_chunks(_single_chunk, payloads, workers, stop) or SimResult()


# -- multi-level ------------------------------------------------------------

def _mlc_chunk(args):
    design, channel, frames, genie, fast_nodes = args
    c = design.constellation
    N, m, B = design.N, design.m, len(frames)
    tx = np.zeros((B, N, m), dtype=np.uint8)
    info_u = [None] * m
    noise = np.empty((B, N))
    for r, f in enumerate(frames):
        rng = frame_rng(channel.seed, f)
        for i, lv in enumerate(design.levels):
            if lv.status is LevelStatus.CODED:
                if info_u[i] is None:
                    info_u[i] = np.zeros((B, N), dtype=np.uint8)
                info_u[i][r, lv.code.info_mask] = rng.integers(0, 2, lv.code.K)
            elif lv.status is LevelStatus.UNCODED:
                tx[r, :, i] = rng.integers(0, 2, N)
        noise[r] = rng.standard_normal(N)
    for i, lv in enumerate(design.levels):
        if lv.status is LevelStatus.CODED:
            tx[:, :, i] = encode(info_u[i])
    sigma = np.sqrt(channel.sigma2(c.energy))
    y = c.symbols[c.index_of(tx)] + sigma * noise

    decided = np.zeros_like(tx)
    levels = []
    frame_err = np.zeros(B, dtype=bool)
    for i, lv in enumerate(design.levels):
        prefix = tx[:, :, :i] if genie else decided[:, :, :i]
        llr = multistage_llr(y, sigma, i + 1, prefix, c)
        if lv.status is LevelStatus.CODED:
            res = scl_decode(llr, lv.code, design.L, fast_nodes=fast_nodes)
            decided[:, :, i] = res.x_hat
            err = (res.u_hat != info_u[i])[:, lv.code.info_mask]
        elif lv.status is LevelStatus.UNCODED:
            decided[:, :, i] = llr < 0
            err = decided[:, :, i] != tx[:, :, i]
        else:
            err = np.zeros((B, 0), dtype=bool)
        fe = err.any(axis=1)
        frame_err |= fe
        levels.append(SimResult(B, err.size, int(err.sum()), int(fe.sum())))
    agg = SimResult(B, sum(r.bits for r in levels), sum(r.bit_errors for r in levels),
                    int(frame_err.sum()))
    sym_err = int(np.any(decided != tx, axis=-1).sum())
    return MlcSimResult(levels, agg, sym_err)


def run_mlc(design: MlcDesign, channel: ChannelConfig, frames: int, *, genie: bool = False,
            fast_nodes: bool = False, workers: int = 1, chunk: int = 250,
            max_frame_errors: int | None = None) -> MlcSimResult:
    """Multi-stage decoding of an MLC frame of N symbols.

    Levels are decoded in order; each level's LLRs are conditioned on the
    decisions of the lower levels (or, with ``genie``, on their true bits).
    Frozen levels are known zeros; uncoded levels take hard decisions.
    """
    if frames < 0:
        raise ValueError("frames must be >= 0")
    payloads = [(design, channel, fr, genie, fast_nodes) for fr in _chunks(frames, chunk)]
    stop = ((lambda r: r.aggregate.frame_errors >= max_frame_errors) if max_frame_errors
            else (lambda r: False))
    out = _run_chunks(_mlc_chunk, payloads, workers, stop)
    if out is None:
        out = MlcSimResult([SimResult() for _ in design.levels], SimResult(), 0)
    return out
