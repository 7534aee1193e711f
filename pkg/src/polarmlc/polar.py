"""Polar code description, encoding and decode-tree geometry.

Conventions used throughout the package:

* ``G_n`` is the n-fold Kronecker power of ``F = [[1, 0], [1, 1]]`` in natural
  order (no bit-reversal permutation), so ``x = u G_n`` over GF(2).
* Information-set indices are 1-based in every public interface.
* Frozen bits carry the value 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "PolarCode",
    "DecodeNode",
    "encode",
    "encode_matrix",
    "generator_matrix",
    "root_node",
    "node_children",
    "validate_code",
    "read_code_file",
    "write_code_file",
    "format_code_file",
    "parse_code_file",
]


@dataclass(frozen=True)
class PolarCode:
    """A polar code of length ``N = 2**n`` with information set ``info_set``.

    The constructor does not validate; use :meth:`from_info_set` or
    :func:`validate_code` when the fields come from outside.
    """

    n: int
    N: int
    K: int
    info_set: tuple[int, ...]

    @classmethod
    def from_info_set(cls, n: int, info_set) -> "PolarCode":
        idx = tuple(sorted(int(i) for i in info_set))
        code = cls(n=int(n), N=2 ** int(n), K=len(idx), info_set=idx)
        problem = validate_code(code)
        if problem is not None:
            raise ValueError(problem)
        return code

    @classmethod
    def from_mask(cls, info_mask) -> "PolarCode":
        mask = np.asarray(info_mask, dtype=bool)
        N = mask.size
        n = N.bit_length() - 1
        if N < 2 or 2 ** n != N:
            raise ValueError(f"mask length {N} is not a power of two >= 2")
        return cls.from_info_set(n, (np.flatnonzero(mask) + 1).tolist())

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def info_mask(self) -> np.ndarray:
        """Boolean mask over positions 0..N-1, True for information bits."""
        mask = np.zeros(self.N, dtype=bool)
        if self.info_set:
            mask[np.asarray(self.info_set) - 1] = True
        return mask


@dataclass(frozen=True)
class DecodeNode:
    """Node ``index`` at ``depth`` of the binary decoding tree of depth ``n``."""

    n: int
    depth: int = 0
    index: int = 0

    def __post_init__(self):
        if not 0 <= self.depth <= self.n:
            raise ValueError(f"depth {self.depth} outside 0..{self.n}")
        if not 0 <= self.index < 2 ** self.depth:
            raise ValueError(f"index {self.index} outside 0..{2 ** self.depth - 1}")

    @property
    def size(self) -> int:
        """Message length N_v."""
        return 2 ** (self.n - self.depth)

    @property
    def first_leaf(self) -> int:
        return self.index * self.size + 1

    @property
    def last_leaf(self) -> int:
        return (self.index + 1) * self.size

    @property
    def leaf_range(self) -> range:
        """1-based indices of the leaves below this node."""
        return range(self.first_leaf, self.last_leaf + 1)

    @property
    def is_leaf(self) -> bool:
        return self.depth == self.n


def root_node(n: int) -> DecodeNode:
    return DecodeNode(n=n, depth=0, index=0)


def node_children(v: DecodeNode) -> tuple[DecodeNode, DecodeNode]:
    if v.is_leaf:
        raise ValueError("a leaf node has no children")
    return (
        DecodeNode(v.n, v.depth + 1, 2 * v.index),
        DecodeNode(v.n, v.depth + 1, 2 * v.index + 1),
    )


def validate_code(code: PolarCode) -> str | None:
    """Return a description of the first violated invariant, or None if valid."""
    if not isinstance(code.n, (int, np.integer)) or code.n < 1:
        return f"n must be an integer >= 1, got {code.n!r}"
    if code.N != 2 ** code.n:
        if code.N < 1 or code.N & (code.N - 1):
            return f"N={code.N} is not a power of two"
        return f"N={code.N} does not equal 2**n={2 ** code.n}"
    if not 0 <= code.K <= code.N:
        return f"K={code.K} outside 0..{code.N}"
    if len(code.info_set) != code.K:
        return f"|info_set|={len(code.info_set)} does not equal K={code.K}"
    for i in code.info_set:
        if not 1 <= i <= code.N:
            return f"index {i} out of range 1..{code.N}"
    if any(b <= a for a, b in zip(code.info_set, code.info_set[1:])):
        return "info_set is not strictly increasing"
    return None


def encode(u, code: PolarCode | None = None) -> np.ndarray:
    """Polar transform ``x = u G_n`` over GF(2).

    ``u`` may carry leading batch dimensions; the transform acts on the last
    axis. When ``code`` is given, frozen positions are checked to be zero.
    """
    u = np.asarray(u)
    N = u.shape[-1]
    if N < 1 or N & (N - 1):
        raise ValueError(f"length {N} is not a power of two")
    if code is not None:
        if N != code.N:
            raise ValueError(f"u has length {N}, code has N={code.N}")
        if np.any(u[..., ~code.info_mask]):
            raise ValueError("nonzero value at a frozen position")
    if np.any((u != 0) & (u != 1)):
        raise ValueError("u must contain only 0/1 values")
    x = u.astype(np.uint8, copy=True)
    batch = x.shape[:-1]
    h = N // 2
    while h >= 1:
        y = x.reshape(*batch, -1, 2, h)
        y[..., 0, :] ^= y[..., 1, :]
        h //= 2
    return x


def generator_matrix(n: int) -> np.ndarray:
    """Explicit ``G_n`` as an ``N x N`` 0/1 matrix (natural order)."""
    F = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    G = np.ones((1, 1), dtype=np.uint8)
    for _ in range(n):
        G = np.kron(G, F)
    return G


def encode_matrix(u) -> np.ndarray:
    """Reference encoder: explicit matrix product, O(N^2)."""
    u = np.asarray(u, dtype=np.int64)
    n = u.shape[-1].bit_length() - 1
    return (u @ generator_matrix(n).astype(np.int64) % 2).astype(np.uint8)


# -- code description file -------------------------------------------------

def format_code_file(code: PolarCode, L: int | None = None) -> str:
    lines = [f"n={code.n}"]
    if L is not None:
        lines.append(f"L={L}")
    lines.append("A=" + ",".join(str(i) for i in code.info_set))
    return "\n".join(lines) + "\n"


def parse_code_file(text: str) -> tuple[PolarCode, int | None]:
    """Parse ``n=``, ``L=`` and ``A=`` lines; returns (code, L or None)."""
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in ("n", "L", "A"):
            raise ValueError(f"line {lineno}: expected n=, L= or A=, got {raw!r}")
        if key in fields:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = value.strip()
    if "n" not in fields or "A" not in fields:
        raise ValueError("code file needs both n= and A= lines")
    try:
        n = int(fields["n"])
        info = [int(tok) for tok in fields["A"].split(",") if tok.strip()]
        L = int(fields["L"]) if "L" in fields else None
    except ValueError as exc:
        raise ValueError(f"malformed code file: {exc}") from None
    if len(set(info)) != len(info):
        raise ValueError("duplicate index in A=")
    code = PolarCode.from_info_set(n, info)
    if L is not None and L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    return code, L


def read_code_file(path) -> tuple[PolarCode, int | None]:
    return parse_code_file(Path(path).read_text(encoding="utf-8"))


def write_code_file(path, code: PolarCode, L: int | None = None) -> None:
    Path(path).write_text(format_code_file(code, L), encoding="utf-8")
