"""Graph kinds, format identifiers and edge-slot orderings."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

BITMASK_WIDTH = 64


@dataclass(frozen=True)
class GraphKind:
    is_directed: bool = False
    allow_loops: bool = False


class GraphFormat(Enum):
    BITMASK_OUT = "bitmask_out"
    BITMASK_IN = "bitmask_in"
    ADJACENCY_MATRIX_COLORS = "adjacency_matrix_colors"
    ADJACENCY_MATRIX_BINARY = "adjacency_matrix_binary"
    FLATTENED_ROW_MAJOR_COLORS = "flattened_row_major_colors"
    FLATTENED_ROW_MAJOR_BINARY = "flattened_row_major_binary"
    FLATTENED_CLOCKWISE_COLORS = "flattened_clockwise_colors"
    FLATTENED_CLOCKWISE_BINARY = "flattened_clockwise_binary"

    @property
    def is_binary(self) -> bool:
        return self in _SLICED

    @property
    def is_bitmask(self) -> bool:
        return self in (GraphFormat.BITMASK_OUT, GraphFormat.BITMASK_IN)

    @property
    def ordering(self) -> FlattenedOrdering | None:
        if self in (GraphFormat.FLATTENED_ROW_MAJOR_COLORS, GraphFormat.FLATTENED_ROW_MAJOR_BINARY):
            return FlattenedOrdering.ROW_MAJOR
        if self in (GraphFormat.FLATTENED_CLOCKWISE_COLORS, GraphFormat.FLATTENED_CLOCKWISE_BINARY):
            return FlattenedOrdering.CLOCKWISE
        return None

    @property
    def single_ndim(self) -> int:
        """Number of array dimensions for a single (unbatched) graph."""
        return _SINGLE_NDIM[self]


_SLICED = {
    GraphFormat.BITMASK_OUT,
    GraphFormat.BITMASK_IN,
    GraphFormat.ADJACENCY_MATRIX_BINARY,
    GraphFormat.FLATTENED_ROW_MAJOR_BINARY,
    GraphFormat.FLATTENED_CLOCKWISE_BINARY,
}

_SINGLE_NDIM = {
    GraphFormat.BITMASK_OUT: 2,
    GraphFormat.BITMASK_IN: 2,
    GraphFormat.ADJACENCY_MATRIX_COLORS: 2,
    GraphFormat.ADJACENCY_MATRIX_BINARY: 3,
    GraphFormat.FLATTENED_ROW_MAJOR_COLORS: 1,
    GraphFormat.FLATTENED_ROW_MAJOR_BINARY: 2,
    GraphFormat.FLATTENED_CLOCKWISE_COLORS: 1,
    GraphFormat.FLATTENED_CLOCKWISE_BINARY: 2,
}


class FlattenedOrdering(Enum):
    ROW_MAJOR = "row_major"
    CLOCKWISE = "clockwise"


def flattened_length(n: int, kind: GraphKind) -> int:
    if n < 1:
        raise ValueError(f"graph order must be positive, got {n}")
    if kind.is_directed:
        return n * n if kind.allow_loops else n * n - n
    return n * (n + 1) // 2 if kind.allow_loops else n * (n - 1) // 2


def order_from_flattened_length(length: int, kind: GraphKind) -> int:
    n = 1
    while flattened_length(n, kind) < length:
        n += 1
    if flattened_length(n, kind) != length:
        raise ValueError(f"no graph order has flattened length {length} for {kind}")
    return n


def _valid_slot(u: int, v: int, kind: GraphKind) -> bool:
    if u == v and not kind.allow_loops:
        return False
    if not kind.is_directed and u > v:
        return False
    return True


@lru_cache(maxsize=None)
def _slots(n: int, kind: GraphKind, ordering: FlattenedOrdering) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = [], []
    if ordering is FlattenedOrdering.ROW_MAJOR:
        candidates = ((u, v) for u in range(n) for v in range(n))
    else:
        # layer m: (0,m), (1,m), ..., (m,m), (m,m-1), ..., (m,0)
        candidates = (
            slot
            for m in range(n)
            for slot in [(i, m) for i in range(m + 1)] + [(m, j) for j in range(m - 1, -1, -1)]
        )
    for u, v in candidates:
        if _valid_slot(u, v, kind):
            rows.append(u)
            cols.append(v)
    r = np.array(rows, dtype=np.intp)
    c = np.array(cols, dtype=np.intp)
    r.flags.writeable = False
    c.flags.writeable = False
    return r, c


def slot_arrays(n: int, kind: GraphKind, ordering: FlattenedOrdering) -> tuple[np.ndarray, np.ndarray]:
    """Row and column index arrays listing the edge slots in flattened order."""
    return _slots(n, kind, ordering)


@lru_cache(maxsize=None)
def _position_table(n: int, kind: GraphKind, ordering: FlattenedOrdering) -> np.ndarray:
    rows, cols = _slots(n, kind, ordering)
    table = np.full((n, n), -1, dtype=np.intp)
    table[rows, cols] = np.arange(len(rows))
    table.flags.writeable = False
    return table


def position_table(n: int, kind: GraphKind, ordering: FlattenedOrdering) -> np.ndarray:
    """(n, n) table mapping a valid slot to its flattened position, -1 elsewhere."""
    return _position_table(n, kind, ordering)


def _slot_index(u: int, v: int, n: int, kind: GraphKind, ordering: FlattenedOrdering) -> int:
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"vertex pair ({u}, {v}) out of range for order {n}")
    if not _valid_slot(u, v, kind):
        raise ValueError(f"({u}, {v}) is not an edge slot for {kind}")
    return int(_position_table(n, kind, ordering)[u, v])


def _slot_at(position: int, n: int, kind: GraphKind, ordering: FlattenedOrdering) -> tuple[int, int]:
    rows, cols = _slots(n, kind, ordering)
    if not 0 <= position < len(rows):
        raise ValueError(f"position {position} out of range for flattened length {len(rows)}")
    return int(rows[position]), int(cols[position])


def row_major_index(u: int, v: int, n: int, kind: GraphKind) -> int:
    return _slot_index(u, v, n, kind, FlattenedOrdering.ROW_MAJOR)


def row_major_slot(position: int, n: int, kind: GraphKind) -> tuple[int, int]:
    return _slot_at(position, n, kind, FlattenedOrdering.ROW_MAJOR)


def clockwise_index(u: int, v: int, n: int, kind: GraphKind) -> int:
    return _slot_index(u, v, n, kind, FlattenedOrdering.CLOCKWISE)


def clockwise_slot(position: int, n: int, kind: GraphKind) -> tuple[int, int]:
    return _slot_at(position, n, kind, FlattenedOrdering.CLOCKWISE)
