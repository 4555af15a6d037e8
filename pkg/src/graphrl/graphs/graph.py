"""The Graph class: k-edge-colored looped complete graphs and batches of them.

A graph is stored canonically as its adjacency matrix with color numbers
(uint8, values in ``0..k`` where ``k`` marks an uncolored slot).  Every other
format is derived lazily on first access and cached.  Batches carry one extra
leading axis in every format.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from graphrl.graphs.formats import (
    BITMASK_WIDTH,
    FlattenedOrdering,
    GraphFormat,
    GraphKind,
    order_from_flattened_length,
    slot_arrays,
)


class GraphFormatError(ValueError):
    """A format representation is malformed or inconsistent with the graph parameters."""


_ORDERING_OF_COLORS = {
    FlattenedOrdering.ROW_MAJOR: GraphFormat.FLATTENED_ROW_MAJOR_COLORS,
    FlattenedOrdering.CLOCKWISE: GraphFormat.FLATTENED_CLOCKWISE_COLORS,
}
_ORDERING_OF_BINARY = {
    FlattenedOrdering.ROW_MAJOR: GraphFormat.FLATTENED_ROW_MAJOR_BINARY,
    FlattenedOrdering.CLOCKWISE: GraphFormat.FLATTENED_CLOCKWISE_BINARY,
}


class Graph:
    """A k-edge-colored looped complete graph, or a batch of such graphs.

    Representations are passed as keyword arguments named after the formats
    (``bitmask_out=...``, ``flattened_clockwise_colors=...``) or through the
    ``representations`` mapping.  When several are given they must describe
    the same coloring.
    """

    def __init__(
        self,
        edge_colors: int = 2,
        is_directed: bool = False,
        allow_loops: bool = False,
        representations: Mapping[GraphFormat, np.ndarray] | None = None,
        **format_arrays: np.ndarray,
    ):
        if int(edge_colors) != edge_colors or edge_colors < 2:
            raise GraphFormatError(f"edge_colors must be an integer >= 2, got {edge_colors}")
        if edge_colors > 255:
            raise GraphFormatError("at most 255 proper edge colors are supported")
        self._k = int(edge_colors)
        self._kind = GraphKind(bool(is_directed), bool(allow_loops))

        supplied: dict[GraphFormat, np.ndarray] = dict(representations or {})
        for name, array in format_arrays.items():
            try:
                fmt = GraphFormat(name)
            except ValueError:
                raise TypeError(f"unknown graph format keyword {name!r}") from None
            if fmt in supplied:
                raise GraphFormatError(f"format {fmt.value} supplied twice")
            supplied[fmt] = array
        if not supplied:
            raise GraphFormatError("at least one format representation is required")

        decoded = None
        for fmt, array in supplied.items():
            adjacency = _decode(fmt, np.asarray(array), self._k, self._kind)
            if decoded is None:
                decoded = adjacency
            elif decoded.shape != adjacency.shape or not np.array_equal(decoded, adjacency):
                raise GraphFormatError("supplied format representations describe different graphs")
        self._init_from_adjacency(decoded)

    def _init_from_adjacency(self, adjacency: np.ndarray) -> None:
        adjacency.flags.writeable = False
        self._adjacency = adjacency
        self._n = adjacency.shape[-1]
        self._batch_size = adjacency.shape[0] if adjacency.ndim == 3 else None
        self._cache: dict[GraphFormat, np.ndarray] = {GraphFormat.ADJACENCY_MATRIX_COLORS: adjacency}

    @classmethod
    def _trusted(cls, edge_colors: int, kind: GraphKind, adjacency: np.ndarray) -> Graph:
        # skips validation; callers guarantee a well-formed uint8 adjacency array
        graph = cls.__new__(cls)
        graph._k = edge_colors
        graph._kind = kind
        graph._init_from_adjacency(np.ascontiguousarray(adjacency, dtype=np.uint8))
        return graph

    @classmethod
    def from_bitmask(cls, bitmask, in_neighbors: bool = False, edge_colors: int = 2,
                     is_directed: bool = False, allow_loops: bool = False) -> Graph:
        fmt = GraphFormat.BITMASK_IN if in_neighbors else GraphFormat.BITMASK_OUT
        return cls(edge_colors, is_directed, allow_loops, {fmt: bitmask})

    @classmethod
    def from_adjacency_matrix(cls, adjacency_matrix, binary: bool = False, edge_colors: int = 2,
                              is_directed: bool = False, allow_loops: bool = False) -> Graph:
        fmt = GraphFormat.ADJACENCY_MATRIX_BINARY if binary else GraphFormat.ADJACENCY_MATRIX_COLORS
        return cls(edge_colors, is_directed, allow_loops, {fmt: adjacency_matrix})

    @classmethod
    def from_flattened(cls, flattened, ordering: FlattenedOrdering = FlattenedOrdering.ROW_MAJOR,
                       binary: bool = False, edge_colors: int = 2, is_directed: bool = False,
                       allow_loops: bool = False) -> Graph:
        fmt = (_ORDERING_OF_BINARY if binary else _ORDERING_OF_COLORS)[FlattenedOrdering(ordering)]
        return cls(edge_colors, is_directed, allow_loops, {fmt: flattened})

    # basic properties

    @property
    def edge_colors(self) -> int:
        return self._k

    @property
    def kind(self) -> GraphKind:
        return self._kind

    @property
    def is_directed(self) -> bool:
        return self._kind.is_directed

    @property
    def allow_loops(self) -> bool:
        return self._kind.allow_loops

    @property
    def graph_order(self) -> int:
        return self._n

    @property
    def batch_size(self) -> int | None:
        return self._batch_size

    @property
    def is_fully_colored(self):
        """True iff no valid slot is uncolored; a boolean array for batches."""
        uncolored = (self._adjacency == self._k).any(axis=(-2, -1))
        if self._batch_size is None:
            return not bool(uncolored)
        return ~uncolored

    def _reduced(self) -> bool:
        return bool(np.all(self.is_fully_colored))

    # format access

    def to_format(self, fmt: GraphFormat) -> np.ndarray:
        fmt = GraphFormat(fmt)
        cached = self._cache.get(fmt)
        if cached is None:
            cached = _encode(fmt, self._adjacency, self._k, self._kind, self._reduced())
            cached.flags.writeable = False
            self._cache[fmt] = cached
        return cached

    @property
    def bitmask_out(self) -> np.ndarray:
        return self.to_format(GraphFormat.BITMASK_OUT)

    @property
    def bitmask_in(self) -> np.ndarray:
        return self.to_format(GraphFormat.BITMASK_IN)

    @property
    def adjacency_matrix_colors(self) -> np.ndarray:
        return self._adjacency

    @property
    def adjacency_matrix_binary(self) -> np.ndarray:
        return self.to_format(GraphFormat.ADJACENCY_MATRIX_BINARY)

    @property
    def flattened_row_major_colors(self) -> np.ndarray:
        return self.to_format(GraphFormat.FLATTENED_ROW_MAJOR_COLORS)

    @property
    def flattened_row_major_binary(self) -> np.ndarray:
        return self.to_format(GraphFormat.FLATTENED_ROW_MAJOR_BINARY)

    @property
    def flattened_clockwise_colors(self) -> np.ndarray:
        return self.to_format(GraphFormat.FLATTENED_CLOCKWISE_COLORS)

    @property
    def flattened_clockwise_binary(self) -> np.ndarray:
        return self.to_format(GraphFormat.FLATTENED_CLOCKWISE_BINARY)

    def flattened_colors(self, ordering: FlattenedOrdering) -> np.ndarray:
        return self.to_format(_ORDERING_OF_COLORS[FlattenedOrdering(ordering)])

    # batches

    @classmethod
    def stack(cls, graphs: Iterable[Graph]) -> Graph:
        graphs = list(graphs)
        if not graphs:
            raise ValueError("cannot stack an empty list of graphs")
        first = graphs[0]
        for g in graphs:
            if g.batch_size is not None:
                raise ValueError("stack expects single graphs, got a batch")
            if (g.edge_colors, g.kind, g.graph_order) != (first.edge_colors, first.kind, first.graph_order):
                raise ValueError("stacked graphs must share edge_colors, kind and order")
        return cls._trusted(first._k, first._kind, np.stack([g._adjacency for g in graphs]))

    @classmethod
    def concatenate(cls, batches: Iterable[Graph]) -> Graph:
        batches = list(batches)
        if not batches:
            raise ValueError("cannot concatenate an empty list of batches")
        first = batches[0]
        parts = []
        for b in batches:
            if (b.edge_colors, b.kind, b.graph_order) != (first.edge_colors, first.kind, first.graph_order):
                raise ValueError("concatenated graphs must share edge_colors, kind and order")
            parts.append(b._adjacency if b.batch_size is not None else b._adjacency[None])
        return cls._trusted(first._k, first._kind, np.concatenate(parts))

    def select(self, index: int) -> Graph:
        if self._batch_size is None:
            raise TypeError("select requires a batch of graphs")
        if not -self._batch_size <= index < self._batch_size:
            raise IndexError(f"graph index {index} out of range for batch of {self._batch_size}")
        return Graph._trusted(self._k, self._kind, self._adjacency[index])

    def __getitem__(self, index) -> Graph:
        if self._batch_size is None:
            raise TypeError("only batches of graphs can be indexed")
        if isinstance(index, (int, np.integer)):
            return self.select(int(index))
        sub = self._adjacency[index]
        if sub.ndim != 3:
            raise IndexError("unsupported graph batch index")
        return Graph._trusted(self._k, self._kind, sub)

    def __len__(self) -> int:
        if self._batch_size is None:
            raise TypeError("a single graph has no length")
        return self._batch_size

    def __iter__(self):
        for i in range(len(self)):
            yield self.select(i)

    def as_batch(self) -> Graph:
        if self._batch_size is not None:
            return self
        return Graph._trusted(self._k, self._kind, self._adjacency[None])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._k == other._k
            and self._kind == other._kind
            and self._adjacency.shape == other._adjacency.shape
            and np.array_equal(self._adjacency, other._adjacency)
        )

    def __hash__(self):
        return hash((self._k, self._kind, self._adjacency.shape, self._adjacency.tobytes()))

    def __repr__(self) -> str:
        batch = "" if self._batch_size is None else f", batch_size={self._batch_size}"
        return (f"Graph(edge_colors={self._k}, is_directed={self.is_directed}, "
                f"allow_loops={self.allow_loops}, order={self._n}{batch})")


# decoding


def _is_reduced(r: int, k: int, fmt: GraphFormat) -> bool:
    """Return True when an r-slice representation is reduced."""
    if r == k:
        return False
    if r == k - 1:
        return True
    raise GraphFormatError(f"{fmt.value}: expected {k} or {k - 1} color slices, got {r}")


def _decode_slices(bits: np.ndarray, reduced: bool, k: int, fmt: GraphFormat, axis: int) -> np.ndarray:
    counts = bits.sum(axis=axis, dtype=np.int64)
    if np.any(counts > 1):
        raise GraphFormatError(f"{fmt.value}: a slot is set in more than one color slice")
    first = np.argmax(bits, axis=axis)
    if reduced:
        return np.where(counts == 1, first + 1, 0).astype(np.uint8)
    return np.where(counts == 1, first, k).astype(np.uint8)


def _check_binary(array: np.ndarray, fmt: GraphFormat) -> np.ndarray:
    if array.size and (array.min() < 0 or array.max() > 1):
        raise GraphFormatError(f"{fmt.value}: binary entries must be 0 or 1")
    return array.astype(np.uint8)


def _check_colors(array: np.ndarray, k: int, fmt: GraphFormat) -> np.ndarray:
    if not np.issubdtype(array.dtype, np.integer) and array.size:
        if not np.all(np.equal(np.mod(array, 1), 0)):
            raise GraphFormatError(f"{fmt.value}: color values must be integers")
    if array.size and (array.min() < 0 or array.max() > k):
        raise GraphFormatError(f"{fmt.value}: color values must lie in 0..{k}")
    return array.astype(np.uint8)


def _check_ndim(array: np.ndarray, fmt: GraphFormat) -> None:
    if array.ndim not in (fmt.single_ndim, fmt.single_ndim + 1):
        raise GraphFormatError(
            f"{fmt.value}: expected {fmt.single_ndim} dimensions (or one more for a batch), got {array.ndim}"
        )
    if array.ndim == fmt.single_ndim + 1 and array.shape[0] == 0:
        raise GraphFormatError(f"{fmt.value}: batch must be non-empty")


def _scatter_flattened(colors: np.ndarray, n: int, kind: GraphKind, ordering: FlattenedOrdering) -> np.ndarray:
    rows, cols = slot_arrays(n, kind, ordering)
    adjacency = np.zeros(colors.shape[:-1] + (n, n), dtype=np.uint8)
    adjacency[..., rows, cols] = colors
    if not kind.is_directed:
        adjacency[..., cols, rows] = colors
    return adjacency


def _validate_adjacency(adjacency: np.ndarray, k: int, kind: GraphKind, fmt: GraphFormat) -> np.ndarray:
    n = adjacency.shape[-1]
    if adjacency.shape[-2] != n:
        raise GraphFormatError(f"{fmt.value}: adjacency matrices must be square")
    if n < 1:
        raise GraphFormatError(f"{fmt.value}: graph order must be positive")
    if not kind.allow_loops and np.any(np.diagonal(adjacency, axis1=-2, axis2=-1)):
        raise GraphFormatError(f"{fmt.value}: nonzero diagonal while loops are not allowed")
    if not kind.is_directed and not np.array_equal(adjacency, np.swapaxes(adjacency, -1, -2)):
        raise GraphFormatError(f"{fmt.value}: undirected graph must have a symmetric representation")
    return adjacency


def _order_of(length: int, kind: GraphKind) -> int:
    try:
        return order_from_flattened_length(length, kind)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def _decode(fmt: GraphFormat, array: np.ndarray, k: int, kind: GraphKind) -> np.ndarray:
    _check_ndim(array, fmt)
    if fmt is GraphFormat.ADJACENCY_MATRIX_COLORS:
        adjacency = _check_colors(array, k, fmt)
        return _validate_adjacency(np.ascontiguousarray(adjacency), k, kind, fmt)

    if fmt.ordering is not None and not fmt.is_binary:
        colors = _check_colors(array, k, fmt)
        n = _order_of(colors.shape[-1], kind)
        return _scatter_flattened(colors, n, kind, fmt.ordering)

    if fmt.ordering is not None:
        bits = _check_binary(array, fmt)
        reduced = _is_reduced(bits.shape[-2], k, fmt)
        colors = _decode_slices(bits, reduced, k, fmt, axis=-2)
        n = _order_of(colors.shape[-1], kind)
        return _scatter_flattened(colors, n, kind, fmt.ordering)

    if fmt is GraphFormat.ADJACENCY_MATRIX_BINARY:
        bits = _check_binary(array, fmt)
        reduced = _is_reduced(bits.shape[-3], k, fmt)
        n = bits.shape[-1]
        if bits.shape[-2] != n:
            raise GraphFormatError(f"{fmt.value}: slices must be square")
        diag = np.diagonal(bits, axis1=-2, axis2=-1)
        if not kind.allow_loops:
            if np.any(diag):
                raise GraphFormatError(f"{fmt.value}: diagonal bit set while loops are not allowed")
        adjacency = _decode_slices(bits, reduced, k, fmt, axis=-3)
        if not kind.allow_loops:
            idx = np.arange(n)
            adjacency[..., idx, idx] = 0
        return _validate_adjacency(adjacency, k, kind, fmt)

    # bitmask formats
    words = array
    if words.dtype.kind == "f":
        raise GraphFormatError(f"{fmt.value}: bitmask entries must be integers")
    if words.size and np.any(words < 0):
        raise GraphFormatError(f"{fmt.value}: bitmask entries must be nonnegative")
    words = words.astype(np.uint64)
    n = words.shape[-1]
    if n > BITMASK_WIDTH:
        raise GraphFormatError(f"{fmt.value}: order {n} exceeds the {BITMASK_WIDTH}-bit bitmask width")
    if n < BITMASK_WIDTH and words.size and np.any(words >> np.uint64(n)):
        raise GraphFormatError(f"{fmt.value}: bit set beyond vertex {n - 1}")
    reduced = _is_reduced(words.shape[-2], k, fmt)
    shifts = np.arange(n, dtype=np.uint64)
    # bits[..., c, u, v] = bit v of words[..., c, u]
    bits = ((words[..., :, :, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    if fmt is GraphFormat.BITMASK_IN:
        bits = np.swapaxes(bits, -1, -2)
    if not kind.allow_loops and np.any(np.diagonal(bits, axis1=-2, axis2=-1)):
        raise GraphFormatError(f"{fmt.value}: loop bit set while loops are not allowed")
    adjacency = _decode_slices(bits, reduced, k, fmt, axis=-3)
    if not kind.allow_loops:
        idx = np.arange(n)
        adjacency[..., idx, idx] = 0
    return _validate_adjacency(adjacency, k, kind, fmt)


# encoding


def _binary_slices(colors: np.ndarray, k: int, reduced: bool, axis: int) -> np.ndarray:
    palette = np.arange(1 if reduced else 0, k, dtype=np.uint8)
    expanded = np.expand_dims(colors, axis)
    shape = [1] * expanded.ndim
    shape[axis] = len(palette)
    return (expanded == palette.reshape(shape)).astype(np.uint8)


def _encode(fmt: GraphFormat, adjacency: np.ndarray, k: int, kind: GraphKind, reduced: bool) -> np.ndarray:
    n = adjacency.shape[-1]
    if fmt is GraphFormat.ADJACENCY_MATRIX_COLORS:
        return adjacency
    if fmt.ordering is not None:
        rows, cols = slot_arrays(n, kind, fmt.ordering)
        colors = np.ascontiguousarray(adjacency[..., rows, cols])
        if not fmt.is_binary:
            return colors
        return _binary_slices(colors, k, reduced, axis=-2)

    slices = _binary_slices(adjacency, k, reduced, axis=-3)
    if not kind.allow_loops:
        idx = np.arange(n)
        slices[..., idx, idx] = 0
    if fmt is GraphFormat.ADJACENCY_MATRIX_BINARY:
        return slices

    if n > BITMASK_WIDTH:
        raise GraphFormatError(f"order {n} exceeds the {BITMASK_WIDTH}-bit bitmask width")
    if fmt is GraphFormat.BITMASK_IN:
        slices = np.swapaxes(slices, -1, -2)
    weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
    return (slices.astype(np.uint64) * weights).sum(axis=-1, dtype=np.uint64)
