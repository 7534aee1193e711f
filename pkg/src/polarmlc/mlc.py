"""Multi-level coding over M-ASK with natural labelling.

The constellation has ``M = 2**m`` amplitudes ``{-(M-1), ..., -1, +1, ..., M-1}``.
Symbol index ``k`` carries amplitude ``(M - 1) - 2k``: binary counting along
the amplitude axis from the top, so for ``m = 1`` bit 0 maps to +1 exactly as
BPSK does. Mirroring the axis leaves every mutual information unchanged.

Level 1 is the least significant bit of the index by default (the least
protected level, decoded first); ``msb_first=True`` reverses the order.

Level rates are the conditional mutual informations
``I(B_i; Y | B_1..B_{i-1})`` for a uniform input on the real AWGN channel
``Y = X + Z``, ``Z ~ N(0, sigma^2)``, ``sigma^2 = Es / SNR``. Expectations over
Z use Gauss-Hermite quadrature whose order is doubled from 64 until two
successive orders agree to 1e-6.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from ._quadrature import hermite_rule
from .construction import capacity_design_snr_db, ga_density_evolution, select_info_set
from .exceptions import NumericalRangeError
from .latency import tc_total
from .polar import PolarCode

__all__ = [
    "AskConstellation",
    "LevelRates",
    "LevelStatus",
    "LevelDesign",
    "MlcDesign",
    "MlcSweepRow",
    "build_constellation",
    "level_rates",
    "total_mutual_information",
    "design_mlc",
    "mlc_level_tc",
    "mlc_tc",
    "mlc_tc_sweep",
]

_GH_START = 64
_GH_MAX = 4096
_GH_TOL = 1e-6


@dataclass(frozen=True)
class AskConstellation:
    m: int
    msb_first: bool = False

    @property
    def M(self) -> int:
        return 2 ** self.m

    @property
    def symbols(self) -> np.ndarray:
        """Amplitude of each symbol index."""
        return (self.M - 1) - 2.0 * np.arange(self.M)

    @property
    def energy(self) -> float:
        """Average symbol energy (M^2 - 1) / 3 under the uniform distribution."""
        return (self.M ** 2 - 1) / 3.0

    @property
    def labels(self) -> np.ndarray:
        """``labels[k, i]`` is the bit of level ``i + 1`` for symbol index k."""
        k = np.arange(self.M)[:, None]
        shift = np.arange(self.m)
        if self.msb_first:
            shift = shift[::-1]
        return ((k >> shift) & 1).astype(np.uint8)

    def index_of(self, bits) -> np.ndarray:
        """Symbol index from level bits (last axis = level)."""
        bits = np.asarray(bits, dtype=np.int64)
        shift = np.arange(self.m)
        if self.msb_first:
            shift = shift[::-1]
        return (bits << shift).sum(axis=-1)

    def sigma2(self, snr_db: float) -> float:
        return self.energy / 10.0 ** (snr_db / 10.0)


def build_constellation(m: int, msb_first: bool = False) -> AskConstellation:
    if not 1 <= m <= 8:
        raise ValueError(f"m must lie in 1..8, got {m}")
    return AskConstellation(m=m, msb_first=msb_first)


@dataclass(frozen=True)
class LevelRates:
    rates: np.ndarray
    snr_db: float
    total: float  # I(X;Y) computed directly


def _expected_logs(const: AskConstellation, snr_db: float, order: int):
    """Per-level E[-log2 P(b_i | y, b_<i)] and E[log2 sum_x' p(y|x')/p(y|x)]."""
    sig2 = const.sigma2(snr_db)
    s = const.symbols
    z, w = hermite_rule(order)
    noise = np.sqrt(sig2) * z
    # ll[x, q, x'] = log p(y|x') + const for y = s[x] + noise[q]
    d = (s[:, None, None] + noise[None, :, None]) - s[None, None, :]
    ll = -d * d / (2.0 * sig2)
    lab = const.labels
    M = const.M
    per_level = np.empty(const.m)
    for i in range(const.m):
        prefix_match = np.all(lab[:, None, :i] == lab[None, :, :i], axis=-1)  # (x, x')
        same_bit = prefix_match & (lab[:, None, i] == lab[None, :, i])
        num = logsumexp(np.where(same_bit[:, None, :], ll, -np.inf), axis=-1)
        den = logsumexp(np.where(prefix_match[:, None, :], ll, -np.inf), axis=-1)
        per_level[i] = np.sum((den - num) @ w) / M / np.log(2.0)
    own = ll[np.arange(M), :, np.arange(M)]
    total = np.sum((logsumexp(ll, axis=-1) - own) @ w) / M / np.log(2.0)
    return per_level, total


@lru_cache(maxsize=4096)
def _rates_cached(m: int, snr_db: float, msb_first: bool):
    const = build_constellation(m, msb_first)
    order = _GH_START
    prev = _expected_logs(const, snr_db, order)
    while True:
        order *= 2
        if order > _GH_MAX:
            raise NumericalRangeError(
                f"quadrature did not converge for m={m}, snr_db={snr_db}")
        cur = _expected_logs(const, snr_db, order)
        delta = max(np.max(np.abs(cur[0] - prev[0])), abs(cur[1] - prev[1]))
        prev = cur
        if delta <= _GH_TOL:
            break
    per_level, total = prev
    rates = np.clip(1.0 - per_level, 0.0, 1.0)
    total_mi = float(np.clip(m - total, 0.0, m))
    if not (np.all(np.isfinite(rates)) and np.isfinite(total_mi)):
        raise NumericalRangeError(f"non-finite mutual information at snr_db={snr_db}")
    rates.setflags(write=False)
    return rates, total_mi


def level_rates(m: int, snr_db: float, msb_first: bool = False) -> LevelRates:
    if not np.isfinite(snr_db):
        raise ValueError("snr_db must be finite")
    build_constellation(m, msb_first)
    rates, total = _rates_cached(int(m), float(snr_db), bool(msb_first))
    return LevelRates(rates=rates, snr_db=float(snr_db), total=total)


def total_mutual_information(m: int, snr_db: float) -> float:
    """I(X; Y) in bits for uniform M-ASK on real AWGN at Es/sigma^2 = snr_db."""
    return level_rates(m, snr_db).total


class LevelStatus(enum.Enum):
    FROZEN = "frozen"
    UNCODED = "uncoded"
    CODED = "coded"


@dataclass(frozen=True)
class LevelDesign:
    rate: float
    status: LevelStatus
    code: PolarCode | None = None


@dataclass(frozen=True)
class MlcDesign:
    m: int
    n: int
    L: int
    epsilon: float
    snr_db: float
    levels: tuple[LevelDesign, ...]
    msb_first: bool = False

    @property
    def N(self) -> int:
        return 2 ** self.n

    @property
    def constellation(self) -> AskConstellation:
        return build_constellation(self.m, self.msb_first)

    @property
    def coded_levels(self) -> list[int]:
        return [i for i, lv in enumerate(self.levels) if lv.status is LevelStatus.CODED]


def _level_code(n: int, rate: float) -> PolarCode:
    N = 2 ** n
    K = min(max(int(round(N * rate)), 1), N - 1)
    # surrogate channel: the BPSK AWGN channel whose capacity equals the level rate
    profile = ga_density_evolution(n, capacity_design_snr_db(rate))
    return PolarCode.from_info_set(n, select_info_set(profile, K))


def design_mlc(m: int, snr_db: float, n: int, L: int, epsilon: float = 0.01,
               msb_first: bool = False) -> MlcDesign:
    """Per-level code design: frozen below ``epsilon``, uncoded above ``1 - epsilon``."""
    if not 0.0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 0.5), got {epsilon}")
    if L < 1:
        raise ValueError(f"list size must be >= 1, got {L}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    levels = []
    for r in level_rates(m, snr_db, msb_first).rates:
        r = float(r)
        if r < epsilon:
            levels.append(LevelDesign(r, LevelStatus.FROZEN))
        elif r > 1.0 - epsilon:
            levels.append(LevelDesign(r, LevelStatus.UNCODED))
        else:
            levels.append(LevelDesign(r, LevelStatus.CODED, _level_code(n, r)))
    return MlcDesign(m=m, n=n, L=L, epsilon=epsilon, snr_db=float(snr_db),
                     levels=tuple(levels), msb_first=msb_first)


def mlc_level_tc(design: MlcDesign) -> list[int]:
    return [tc_total(lv.code, design.L) if lv.status is LevelStatus.CODED else 1
            for lv in design.levels]


def mlc_tc(design: MlcDesign) -> int:
    """Levels are decoded one after another, so their TCs add up."""
    return sum(mlc_level_tc(design))


@dataclass(frozen=True)
class MlcSweepRow:
    snr_db: float
    rates: tuple[float, ...]
    level_tc: tuple[int, ...]
    total_tc: int


def mlc_tc_sweep(m: int, snr_grid, n: int, L: int, epsilon: float = 0.01,
                 msb_first: bool = False) -> list[MlcSweepRow]:
    rows = []
    for snr in snr_grid:
        d = design_mlc(m, float(snr), n, L, epsilon, msb_first)
        per = mlc_level_tc(d)
        rows.append(MlcSweepRow(float(snr), tuple(lv.rate for lv in d.levels),
                                tuple(per), sum(per)))
    return rows
