"""Linear algebra over Z/2 with vectors stored as Python int bitsets.

Bit ``i`` of a vector is the coefficient of basis element ``i``.  Columns of a
matrix are kept as a list of such ints; this is the sparse representation used
by every reduction in the package.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def bits(v: int) -> list[int]:
    """Indices of the set bits of ``v``, ascending."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def from_indices(indices: Iterable[int]) -> int:
    v = 0
    for i in indices:
        v ^= 1 << int(i)
    return v


def to_dense(columns: Sequence[int], nrows: int) -> np.ndarray:
    m = np.zeros((nrows, len(columns)), dtype=np.uint8)
    for j, col in enumerate(columns):
        for i in bits(col):
            m[i, j] = 1
    return m


def from_dense(matrix: np.ndarray) -> list[int]:
    matrix = np.asarray(matrix) % 2
    return [from_indices(np.flatnonzero(matrix[:, j])) for j in range(matrix.shape[1])]


class EchelonBasis:
    """Incrementally built echelon basis keyed by the highest set bit.

    Each stored vector carries a ``tag`` bitset recording which inserted
    generators it is a combination of, so reductions also return coordinates.
    """

    def __init__(self) -> None:
        self._rows: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        rows = self._rows
        while v:
            top = v.bit_length() - 1
            hit = rows.get(top)
            if hit is None:
                break
            v ^= hit[0]
            tag ^= hit[1]
        return v, tag

    def reduce_fully(self, v: int, tag: int = 0) -> tuple[int, int]:
        """Reduce every bit of ``v`` that has a pivot, not only the leading one."""
        rows = self._rows
        rest = 0
        while v:
            top = v.bit_length() - 1
            hit = rows.get(top)
            if hit is None:
                rest ^= 1 << top
                v ^= 1 << top
                continue
            v ^= hit[0]
            tag ^= hit[1]
        return rest, tag

    def add(self, v: int, tag: int = 0) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        v, tag = self.reduce(v, tag)
        if not v:
            return False
        self._rows[v.bit_length() - 1] = (v, tag)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0


def rank(columns: Iterable[int]) -> int:
    basis = EchelonBasis()
    for col in columns:
        basis.add(col)
    return len(basis)


def kernel(columns: Sequence[int]) -> list[int]:
    """Basis of the null space; each vector is a bitset over column indices."""
    basis = EchelonBasis()
    out = []
    for j, col in enumerate(columns):
        v, tag = basis.reduce(col, 1 << j)
        if v:
            basis._rows[v.bit_length() - 1] = (v, tag)
        else:
            out.append(tag)
    return out


def apply(columns: Sequence[int], v: int) -> int:
    """Matrix-vector product: XOR of the columns selected by ``v``."""
    out = 0
    for j in bits(v):
        out ^= columns[j]
    return out


def compose(left: Sequence[int], right: Sequence[int]) -> list[int]:
    """Column list of the product ``left @ right``."""
    return [apply(left, col) for col in right]
