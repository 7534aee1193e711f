"""Successive-cancellation (SC) and SC-list decoders over the decoding tree.

All decoders are vectorised over a leading batch axis: ``llr`` may be a
single frame of shape ``(N,)`` or a batch of shape ``(B, N)``. Every frame of
a batch follows the same tree schedule (it depends on the code only), so the
list size after each step is the same across the batch.

LLR convention: ``log P(y | x=0) / P(y | x=1)``; a hard decision is 0 when
the LLR is >= 0. Path metrics add ``log(1 + exp(-(1 - 2u) * alpha))``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polar import PolarCode, encode

__all__ = [
    "LLR_MAX",
    "f_combine",
    "f_minsum",
    "g_combine",
    "beta_combine",
    "softplus",
    "pm_update",
    "DecoderPath",
    "DecodeResult",
    "sc_decode",
    "scl_decode",
    "list_decode_node",
    "rate0_pm_update",
    "rate1_fast_decode",
]

LLR_MAX = 40.0


def f_combine(a, b):
    """Check-node update ``2 atanh(tanh(a/2) tanh(b/2))``.

    Evaluated in the equivalent form
    ``sign(a) sign(b) min(|a|, |b|) + log1p(e^-|a+b|) - log1p(e^-|a-b|)``,
    which is exact, never overflows and satisfies ``|f| <= min(|a|, |b|)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return (np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
            + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b))))


def f_minsum(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def g_combine(a, b, beta):
    """Variable-node update ``b + (1 - 2 beta) a``."""
    return np.asarray(b, dtype=float) + (1 - 2 * np.asarray(beta, dtype=float)) * a


def beta_combine(beta_l, beta_r) -> np.ndarray:
    beta_l = np.asarray(beta_l, dtype=np.uint8)
    beta_r = np.asarray(beta_r, dtype=np.uint8)
    if beta_l.shape != beta_r.shape:
        raise ValueError(f"shape mismatch {beta_l.shape} vs {beta_r.shape}")
    return np.concatenate([beta_l ^ beta_r, beta_r], axis=-1)


def softplus(z):
    """``log(1 + e^z)`` without overflow."""
    z = np.asarray(z, dtype=float)
    return np.log1p(np.exp(-np.abs(z))) + np.maximum(z, 0.0)


def pm_update(pm, u_hat, alpha):
    """Path metric after deciding ``u_hat`` on a bit with LLR ``alpha``."""
    return pm + softplus(-(1 - 2 * np.asarray(u_hat, dtype=float)) * alpha)


@dataclass(frozen=True)
class DecoderPath:
    path_id: int
    u_hat: np.ndarray
    pm: float


@dataclass
class DecodeResult:
    """Decoder output.

    ``u_hat``/``x_hat``/``pm`` describe the winning path; ``list_u``/``list_pm``
    hold every surviving path in list order (path id = position). Arrays carry
    the batch axis when the input did.
    """

    u_hat: np.ndarray
    x_hat: np.ndarray
    pm: np.ndarray
    list_u: np.ndarray
    list_pm: np.ndarray

    @property
    def paths(self) -> list[DecoderPath]:
        """Survivors of a single-frame decode, sorted by path metric."""
        if self.list_pm.ndim != 1:
            raise ValueError("paths is only defined for single-frame results")
        order = np.argsort(self.list_pm, kind="stable")
        return [DecoderPath(int(j), self.list_u[j], float(self.list_pm[j])) for j in order]


def _prepare(llr, code: PolarCode) -> tuple[np.ndarray, bool]:
    llr = np.asarray(llr, dtype=float)
    single = llr.ndim == 1
    if single:
        llr = llr[None, :]
    if llr.ndim != 2 or llr.shape[1] != code.N:
        raise ValueError(f"llr must have trailing length N={code.N}, got shape {llr.shape}")
    if np.any(np.isnan(llr)):
        raise ValueError("llr contains NaN")
    return np.clip(llr, -LLR_MAX, LLR_MAX), single


# -- plain SC ---------------------------------------------------------------

def _sc_node(alpha, mask, f, pm):
    nv = alpha.shape[-1]
    if nv == 1:
        a = alpha[:, 0]
        if mask[0]:
            bit = (a < 0).astype(np.uint8)
        else:
            bit = np.zeros(a.shape, dtype=np.uint8)
        pm += softplus(-(1.0 - 2.0 * bit) * a)
        return bit[:, None]
    h = nv // 2
    a1, a2 = alpha[:, :h], alpha[:, h:]
    bl = _sc_node(f(a1, a2), mask[:h], f, pm)
    br = _sc_node(g_combine(a1, a2, bl), mask[h:], f, pm)
    return np.concatenate([bl ^ br, br], axis=1)


def sc_decode(llr, code: PolarCode, min_sum: bool = False) -> DecodeResult:
    """Successive-cancellation decoding; frozen leaves output 0."""
    llr, single = _prepare(llr, code)
    pm = np.zeros(llr.shape[0])
    x = _sc_node(llr, code.info_mask, f_minsum if min_sum else f_combine, pm)
    u = encode(x)
    res = DecodeResult(u_hat=u, x_hat=x, pm=pm, list_u=u[:, None, :], list_pm=pm[:, None])
    return _squeeze(res) if single else res


# -- list decoding ----------------------------------------------------------

def _take(arr, parent):
    """Gather along the path axis (axis 1) by parent index of shape (B, P')."""
    if arr.ndim == 2:
        return np.take_along_axis(arr, parent, axis=1)
    return np.take_along_axis(arr, parent[..., None], axis=1)


def _compose(first, second):
    if first is None:
        return second
    if second is None:
        return first
    return np.take_along_axis(first, second, axis=1)


def _prune(cand, L):
    """Keep the L smallest of ``cand`` (B, 2P); candidate c is (path c//2, bit c%2).

    Ties go to the lower candidate index. Survivors stay in candidate order.
    """
    C = cand.shape[1]
    if C <= L:
        idx = np.broadcast_to(np.arange(C), cand.shape)
    else:
        idx = np.sort(np.argsort(cand, axis=1, kind="stable")[:, :L], axis=1)
    return np.take_along_axis(cand, idx, axis=1), idx // 2, (idx % 2).astype(np.uint8)


def rate0_pm_update(pm, alpha):
    """Rate-0 shortcut: no splitting, ``pm += sum(log(1 + e^-alpha))``."""
    alpha = np.asarray(alpha, dtype=float)
    return pm + softplus(-alpha).sum(axis=-1), np.zeros(alpha.shape, dtype=np.uint8)


def rate1_fast_decode(pm, alpha, L: int):
    """Rate-1 shortcut with splitting restricted to the least reliable bits.

    ``pm`` has shape (B, P) and ``alpha`` (B, P, N_v). Each path forks on its
    ``min(N_v, L)`` smallest-|alpha| positions in increasing order of |alpha|,
    pruning to L after every fork; every other position takes the hard
    decision. Returns ``(pm, beta, parent)`` where ``parent`` (B, P') maps
    each surviving path to its incoming path.
    """
    alpha = np.asarray(alpha, dtype=float)
    B, P, nv = alpha.shape
    hard = (alpha < 0).astype(np.uint8)
    mag = np.abs(alpha)
    pm = pm + softplus(-mag).sum(axis=-1)
    order = np.argsort(mag, axis=-1, kind="stable")
    flips = np.zeros_like(hard)
    parent = np.broadcast_to(np.arange(P), (B, P))
    for t in range(min(nv, L)):
        pos = order[:, :, t]
        cost = np.take_along_axis(mag, pos[..., None], axis=-1)[..., 0]
        cand = np.stack([pm, pm + cost], axis=-1).reshape(B, -1)
        pm, par, bit = _prune(cand, L)
        mag, order, hard, flips = (_take(a, par) for a in (mag, order, hard, flips))
        pos = _take(pos, par)
        np.put_along_axis(flips, pos[..., None], bit[..., None], axis=-1)
        parent = np.take_along_axis(parent, par, axis=1)
    return pm, hard ^ flips, parent


class _ListDecoder:
    def __init__(self, info_mask, L, fast_nodes, f):
        self.mask = np.asarray(info_mask, dtype=bool)
        self.L = int(L)
        self.fast = fast_nodes
        self.f = f
        self.pm = None
        csum = np.concatenate([[0], np.cumsum(self.mask)])
        self._count = lambda lo, hi: int(csum[hi] - csum[lo])

    def run(self, pm, alpha):
        self.pm = pm
        beta, parent = self._node(alpha, 0)
        if parent is None:
            parent = np.broadcast_to(np.arange(alpha.shape[1]), pm.shape)
        return self.pm, beta, parent

    def _node(self, alpha, lo):
        nv = alpha.shape[-1]
        if nv == 1:
            return self._leaf(alpha[:, :, 0], self.mask[lo])
        if self.fast:
            k = self._count(lo, lo + nv)
            if k == 0:
                self.pm, beta = rate0_pm_update(self.pm, alpha)
                return beta, None
            if k == nv:
                self.pm, beta, parent = rate1_fast_decode(self.pm, alpha, self.L)
                return beta, parent
        h = nv // 2
        a1, a2 = alpha[..., :h], alpha[..., h:]
        beta_l, par_l = self._node(self.f(a1, a2), lo)
        if par_l is not None:
            a1, a2 = _take(a1, par_l), _take(a2, par_l)
        beta_r, par_r = self._node(g_combine(a1, a2, beta_l), lo + h)
        if par_r is not None:
            beta_l = _take(beta_l, par_r)
        return np.concatenate([beta_l ^ beta_r, beta_r], axis=-1), _compose(par_l, par_r)

    def _leaf(self, a, info):
        if not info:
            self.pm = self.pm + softplus(-a)
            return np.zeros(a.shape + (1,), dtype=np.uint8), None
        B = a.shape[0]
        cand = np.stack([self.pm + softplus(-a), self.pm + softplus(a)], axis=-1).reshape(B, -1)
        self.pm, parent, bit = _prune(cand, self.L)
        return bit[..., None], parent


def list_decode_node(pm, alpha, info_mask, L: int, fast_nodes: bool = False,
                     min_sum: bool = False):
    """List-decode one subtree given incoming paths.

    ``pm`` (B, P) and ``alpha`` (B, P, N_v) describe the incoming paths;
    ``info_mask`` (N_v,) marks the information leaves of the subtree.
    Returns ``(pm, beta, parent)`` like :func:`rate1_fast_decode`.
    """
    pm = np.asarray(pm, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    dec = _ListDecoder(info_mask, L, fast_nodes, f_minsum if min_sum else f_combine)
    return dec.run(pm, alpha)


def scl_decode(llr, code: PolarCode, L: int, fast_nodes: bool = False,
               min_sum: bool = False) -> DecodeResult:
    """SC-list decoding with list size ``L``.

    At every information leaf each path forks into u=0 and u=1 and the L
    candidates with the smallest metric survive (ties to the lower path id).
    With ``fast_nodes`` Rate-0 and Rate-1 subtrees are decoded by their
    shortcut rules instead of being descended.
    """
    if L < 1:
        raise ValueError(f"list size must be >= 1, got {L}")
    llr, single = _prepare(llr, code)
    B = llr.shape[0]
    dec = _ListDecoder(code.info_mask, L, fast_nodes, f_minsum if min_sum else f_combine)
    list_pm, beta, _ = dec.run(np.zeros((B, 1)), llr[:, None, :])
    list_u = encode(beta)
    best = np.argmin(list_pm, axis=1)
    rows = np.arange(B)
    res = DecodeResult(u_hat=list_u[rows, best], x_hat=beta[rows, best], pm=list_pm[rows, best],
                       list_u=list_u, list_pm=list_pm)
    return _squeeze(res) if single else res


def _squeeze(res: DecodeResult) -> DecodeResult:
    return DecodeResult(u_hat=res.u_hat[0], x_hat=res.x_hat[0], pm=float(res.pm[0]),
                        list_u=res.list_u[0], list_pm=res.list_pm[0])
