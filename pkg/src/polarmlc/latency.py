"""Clock-cycle time-complexity (TC) model of the fast SC-list decoder.

Per-node costs, with ``N_v`` the node's message length and ``L`` the list size:

==============  ==========================
Leaf            1
Rate-1          min(N_v, L)
Rate-0          log2(N_v)
Repetition      1 + log2(N_v)
Standard        3 + TC(left) + TC(right)
==============  ==========================

Classification is tried in the order Leaf, Rate-1, Rate-0, Repetition, so a
single leaf is always costed 1 and never as a Rate-0 node of cost 0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .construction import construct_code
from .polar import DecodeNode, PolarCode, node_children, root_node

__all__ = [
    "NodeKind",
    "NodeCost",
    "TcReport",
    "SweepRow",
    "classify_node",
    "node_cost",
    "tc_node",
    "tc_code",
    "tc_rate_sweep",
    "tc_total",
    "tc_upper_bound",
]


class NodeKind(enum.Enum):
    LEAF = "leaf"
    RATE1 = "rate1"
    RATE0 = "rate0"
    REPETITION = "repetition"
    STANDARD = "standard"


@dataclass(frozen=True)
class NodeCost:
    """One visited node; ``cost`` is its own contribution (3 for Standard)."""

    node: DecodeNode
    kind: NodeKind
    cost: int


@dataclass(frozen=True)
class TcReport:
    total: int
    breakdown: tuple[NodeCost, ...]


@dataclass(frozen=True)
class SweepRow:
    rate: float
    K: int
    tc: int


class _Counter:
    """O(1) information-bit counts over leaf ranges."""

    def __init__(self, code: PolarCode):
        self.mask = code.info_mask
        self.csum = np.concatenate([[0], np.cumsum(self.mask)])

    def count(self, v: DecodeNode) -> int:
        return int(self.csum[v.last_leaf] - self.csum[v.first_leaf - 1])

    def kind(self, v: DecodeNode) -> NodeKind:
        if v.is_leaf:
            return NodeKind.LEAF
        k = self.count(v)
        if k == v.size:
            return NodeKind.RATE1
        if k == 0:
            return NodeKind.RATE0
        if k == 1 and self.mask[v.last_leaf - 1]:
            return NodeKind.REPETITION
        return NodeKind.STANDARD


def _check_tree(v: DecodeNode, code: PolarCode):
    if v.n != code.n:
        raise ValueError(f"node belongs to a tree of depth {v.n}, code has n={code.n}")


def classify_node(v: DecodeNode, code: PolarCode) -> NodeKind:
    _check_tree(v, code)
    return _Counter(code).kind(v)


def node_cost(kind: NodeKind, size: int, L: int) -> int:
    """Cost of a terminal node; Standard nodes return their local cost 3."""
    log_size = size.bit_length() - 1
    if kind is NodeKind.LEAF:
        return 1
    if kind is NodeKind.RATE1:
        return min(size, L)
    if kind is NodeKind.RATE0:
        return log_size
    if kind is NodeKind.REPETITION:
        return 1 + log_size
    return 3


def _walk(v, counter, L, out):
    kind = counter.kind(v)
    own = node_cost(kind, v.size, L)
    if out is not None:
        out.append(NodeCost(v, kind, own))
    if kind is not NodeKind.STANDARD:
        return own
    left, right = node_children(v)
    return own + _walk(left, counter, L, out) + _walk(right, counter, L, out)


def tc_node(v: DecodeNode, code: PolarCode, L: int) -> int:
    """TC of the subtree rooted at ``v``."""
    if L < 1:
        raise ValueError(f"list size must be >= 1, got {L}")
    _check_tree(v, code)
    return _walk(v, _Counter(code), L, None)


def tc_code(code: PolarCode, L: int) -> TcReport:
    if L < 1:
        raise ValueError(f"list size must be >= 1, got {L}")
    out: list[NodeCost] = []
    total = _walk(root_node(code.n), _Counter(code), L, out)
    return TcReport(total=total, breakdown=tuple(out))


def tc_total(code: PolarCode, L: int) -> int:
    """Root TC without the breakdown, evaluated level by level from the leaves up."""
    if L < 1:
        raise ValueError(f"list size must be >= 1, got {L}")
    mask = code.info_mask
    cost = np.ones(code.N, dtype=np.int64)
    for h in range(1, code.n + 1):
        size = 2 ** h
        blocks = mask.reshape(-1, size)
        cnt = blocks.sum(axis=1)
        cost = np.select(
            [cnt == size, cnt == 0, (cnt == 1) & blocks[:, -1]],
            [min(size, L), h, 1 + h],
            3 + cost[0::2] + cost[1::2],
        )
    return int(cost[0])


def tc_upper_bound(n: int) -> int:
    """TC of a tree made only of Standard nodes: C(h) = 3 + 2 C(h-1), C(0) = 1."""
    return 2 ** (n + 2) - 3


def tc_rate_sweep(n: int, L: int, rates, design_snr_db: float | None = None,
                  capacity_gap: float = 0.02) -> list[SweepRow]:
    """TC against code rate; K = round(R N) and the code comes from
    :func:`~polarmlc.construction.construct_code` with the given design rule."""
    N = 2 ** n
    rows = []
    for R in rates:
        if not 0.0 < R < 1.0:
            raise ValueError(f"rate {R} outside (0, 1)")
        K = int(round(R * N))
        code = construct_code(n, K, design_snr_db=design_snr_db, capacity_gap=capacity_gap)
        rows.append(SweepRow(rate=float(R), K=K, tc=tc_total(code, L)))
    return rows
