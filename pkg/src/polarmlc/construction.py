"""Information-set construction by Gaussian-approximation density evolution.

Under the Gaussian approximation the LLR of every bit channel is modelled as
``N(mu, 2 mu)``. The variable-node side doubles the mean and the check-node
side maps ``mu -> phi^-1(1 - (1 - phi(mu))**2)`` with

    phi(x) = 1 - E[tanh(U / 2)],   U ~ N(x, 2x).

Rather than the piecewise curve fit usually quoted for ``phi`` (which is
neither continuous at x = 10 nor equal to 1 at the origin), ``phi`` is
evaluated from the exact identity

    phi(x) = exp(-x/4) * psi(x),
    psi(x) = 1/sqrt(pi) * Integral exp(-t**2) sech(sqrt(x) t) dt,

with ``log psi`` tabulated by adaptive quadrature and interpolated by a cubic
spline in log-log coordinates. ``psi`` is smooth, lies in (0, 1] and decays
like ``sqrt(pi / x)``, so working with ``log phi`` avoids underflow for the
large means that occur at high design SNR. The inverse is a bracketed
bisection on ``log x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, interpolate, optimize

from ._quadrature import hermite_rule
from .exceptions import NumericalRangeError
from .polar import PolarCode

__all__ = [
    "ReliabilityProfile",
    "phi",
    "log_phi",
    "phi_inverse",
    "phi_chung",
    "check_node_mean",
    "ga_density_evolution",
    "select_info_set",
    "construct_code",
    "biawgn_capacity",
    "capacity_design_snr_db",
]

_TABLE_LO, _TABLE_HI = 1e-9, 1e9
_BISECT_STEPS = 64


@dataclass(frozen=True)
class ReliabilityProfile:
    """Per-leaf LLR means (natural bit order) at a design SNR (Es/sigma^2, dB)."""

    mu: np.ndarray
    design_snr_db: float

    @property
    def N(self) -> int:
        return self.mu.size


def _sech(s):
    e = np.exp(-np.abs(s))
    return 2.0 * e / (1.0 + e * e)


def _psi_quad(x: float) -> float:
    if x < 1.0:
        r = np.sqrt(x)
        val, _ = integrate.quad(lambda t: np.exp(-t * t) * _sech(r * t), 0.0, np.inf,
                                epsabs=0.0, epsrel=1e-13, limit=200)
        return 2.0 / np.sqrt(np.pi) * val
    val, _ = integrate.quad(lambda s: np.exp(-s * s / x) * _sech(s), 0.0, np.inf,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return 2.0 / np.sqrt(np.pi * x) * val


@lru_cache(maxsize=1)
def _log_psi_spline():
    lx = np.linspace(np.log(_TABLE_LO), np.log(_TABLE_HI), 1200)
    lpsi = np.array([np.log(_psi_quad(np.exp(v))) for v in lx])
    return interpolate.CubicSpline(lx, lpsi)


def _log_psi(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    lo = x < _TABLE_LO
    hi = x > _TABLE_HI
    mid = ~(lo | hi)
    out[lo] = -x[lo] / 4.0
    xh = x[hi]
    out[hi] = 0.5 * np.log(np.pi / xh) + np.log1p(-np.pi ** 2 / (4.0 * xh))
    if mid.any():
        out[mid] = _log_psi_spline()(np.log(x[mid]))
    return out


def log_phi(x) -> np.ndarray:
    """Natural log of ``phi``; ``log_phi(0) = 0`` and ``log_phi(inf) = -inf``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValueError("phi is defined for x >= 0")
    flat = x.reshape(-1)
    out = np.zeros_like(flat)
    pos = (flat > 0) & np.isfinite(flat)
    out[pos] = -flat[pos] / 4.0 + _log_psi(flat[pos])
    out[np.isinf(flat)] = -np.inf
    return out.reshape(x.shape)


def phi(x) -> np.ndarray:
    return np.exp(log_phi(x))


def _phi_inverse_log(target: np.ndarray) -> np.ndarray:
    """Solve ``log_phi(y) = target`` for ``target <= 0`` (vectorised bisection)."""
    target = np.asarray(target, dtype=float)
    y = np.zeros_like(target)
    y[np.isneginf(target)] = np.inf
    live = np.isfinite(target) & (target < 0)
    if not live.any():
        return y
    t = target[live]
    # below the table log_phi(x) = -x/2 exactly, so tiny targets invert in closed form
    tiny = t > -_TABLE_LO / 4.0
    sol = np.where(tiny, -2.0 * t, 0.0)
    t_hard = t[~tiny]
    if t_hard.size:
        sol[~tiny] = _bisect_log_phi(t_hard)
    y[live] = sol
    return y


def _bisect_log_phi(t: np.ndarray) -> np.ndarray:
    # psi <= 1 gives log_phi(x) <= -x/4, so the root is at most -4t; and
    # log_phi(-t/4) > t holds on the whole range of t handled here
    lo = np.log(-t / 4.0)
    hi = np.log(-4.0 * t) + 1e-12
    f_lo = log_phi(np.exp(lo)) - t
    f_hi = log_phi(np.exp(hi)) - t
    if np.any(f_lo < 0) or np.any(f_hi > 0):
        raise NumericalRangeError("phi inverse bracket does not enclose the root")
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        above = log_phi(np.exp(mid)) > t
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return np.exp(0.5 * (lo + hi))


def phi_inverse(p) -> np.ndarray:
    """Inverse of ``phi`` on (0, 1]."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0) or np.any(p > 1):
        raise ValueError("phi_inverse is defined on (0, 1]")
    return _phi_inverse_log(np.log(p))


def phi_chung(x) -> np.ndarray:
    """Two-piece curve fit to ``phi`` (Chung et al.), for comparison only."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.exp(-0.4527 * np.power(x, 0.86) + 0.0218)
        large = np.sqrt(np.pi / x) * np.exp(-x / 4.0) * (1.0 - 10.0 / (7.0 * x))
    return np.where(x < 10.0, small, large)


def check_node_mean(mu) -> np.ndarray:
    """Mean of the check-side child: ``phi^-1(1 - (1 - phi(mu))**2)``."""
    mu = np.asarray(mu, dtype=float)
    lp = log_phi(mu)
    p = np.exp(lp)
    q = -np.expm1(lp)  # 1 - phi, accurate for small mu
    with np.errstate(divide="ignore"):
        target = np.where(p < 0.5, lp + np.log(2.0 - p), np.log1p(-q * q))
    return _phi_inverse_log(target)


def ga_density_evolution(n: int, design_snr_db: float) -> ReliabilityProfile:
    """Per-leaf LLR means for BPSK on AWGN at ``design_snr_db`` (Es/sigma^2)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if np.isnan(design_snr_db):
        raise ValueError("design SNR is NaN")
    mu = np.array([2.0 * 10.0 ** (design_snr_db / 10.0)])
    for _ in range(n):
        # children of node i sit at 2i (check side) and 2i+1 (variable side),
        # which ends in natural leaf order
        nxt = np.empty(2 * mu.size)
        nxt[0::2] = check_node_mean(mu)
        nxt[1::2] = 2.0 * mu
        mu = nxt
    if np.any(np.isnan(mu)) or np.any(mu < 0):
        raise NumericalRangeError("density evolution produced an invalid mean")
    return ReliabilityProfile(mu=mu, design_snr_db=float(design_snr_db))


def select_info_set(profile: ReliabilityProfile, K: int) -> tuple[int, ...]:
    """The K most reliable leaves (1-based); ties go to the larger index."""
    N = profile.N
    if not 0 <= K <= N:
        raise ValueError(f"K={K} outside 0..{N}")
    idx = np.arange(N)
    # lexsort: last key is primary
    order = np.lexsort((-idx, -profile.mu))
    return tuple(sorted(int(i) + 1 for i in order[:K]))


def biawgn_capacity(snr_db: float, order: int = 128) -> float:
    """Capacity (bits) of BPSK on real AWGN at Es/sigma^2 = ``snr_db``."""
    snr = 10.0 ** (snr_db / 10.0)
    mu = 2.0 * snr
    z, w = hermite_rule(order)
    llr = mu + np.sqrt(2.0 * mu) * z
    return float(1.0 - np.dot(w, np.logaddexp(0.0, -llr)) / np.log(2.0))


def capacity_design_snr_db(capacity: float) -> float:
    """BPSK design SNR (dB) whose capacity equals ``capacity`` in (0, 1)."""
    if not 0.0 < capacity < 1.0:
        raise ValueError(f"capacity must lie in (0, 1), got {capacity}")
    return float(optimize.brentq(lambda s: biawgn_capacity(s) - capacity, -60.0, 60.0,
                                 xtol=1e-10))


def construct_code(n: int, K: int, design_snr_db: float | None = None,
                   capacity_gap: float = 0.02) -> PolarCode:
    """Polar code of length 2**n with K information bits.

    Without an explicit ``design_snr_db`` the code is designed at the SNR where
    the BPSK capacity equals ``K / N + capacity_gap`` (capped below 1).
    """
    N = 2 ** n
    if not 0 <= K <= N:
        raise ValueError(f"K={K} outside 0..{N}")
    if design_snr_db is None:
        if K == 0 or K == N:
            return PolarCode.from_info_set(n, range(N - K + 1, N + 1))
        design_snr_db = capacity_design_snr_db(min(K / N + capacity_gap, 1.0 - 1e-6))
    profile = ga_density_evolution(n, design_snr_db)
    return PolarCode.from_info_set(n, select_info_set(profile, K))
