"""Common encoding for environments whose state holds per-slot color bits.

The first ``(k - 1) * l`` state bits are ``k - 1`` blocks of ``l`` bits; bit
``i`` of block ``c - 1`` says slot ``i`` has color ``c``.  A slot with no bit
set has color 0 (or is still uncolored in Linear Build).
"""

from __future__ import annotations

import numpy as np

from graphrl.environments.base import GraphEnvironment
from graphrl.environments.generators import GraphGenerator, check_batch, fixed
from graphrl.graphs import FlattenedOrdering, Graph, GraphKind, flattened_length, monochromatic_graph
from graphrl.graphs.graph import _scatter_flattened


class MalformedStateError(ValueError):
    pass


class SlotEnvironment(GraphEnvironment):
    def __init__(self, graph_invariant, graph_order: int, edge_colors: int = 2, is_directed: bool = False,
                 allow_loops: bool = False, flattened_ordering: FlattenedOrdering = FlattenedOrdering.ROW_MAJOR,
                 graph_invariant_difference=None, sparse_setting: bool = False):
        super().__init__(graph_invariant, graph_invariant_difference, sparse_setting)
        if int(graph_order) != graph_order or graph_order < 2:
            raise ValueError(f"graph_order must be an integer >= 2, got {graph_order}")
        if int(edge_colors) != edge_colors or edge_colors < 2:
            raise ValueError(f"edge_colors must be an integer >= 2, got {edge_colors}")
        self.graph_order = int(graph_order)
        self.edge_colors = int(edge_colors)
        self.kind = GraphKind(bool(is_directed), bool(allow_loops))
        self.flattened_ordering = FlattenedOrdering(flattened_ordering)
        self.flattened_length = flattened_length(self.graph_order, self.kind)
        self._palette = np.arange(1, self.edge_colors, dtype=np.uint8)

    @property
    def is_directed(self) -> bool:
        return self.kind.is_directed

    @property
    def allow_loops(self) -> bool:
        return self.kind.allow_loops

    @property
    def color_bits(self) -> int:
        return (self.edge_colors - 1) * self.flattened_length

    def encode_colors(self, colors: np.ndarray) -> np.ndarray:
        """``(batch, l)`` slot colors (all < k) to ``(batch, (k-1) l)`` bits."""
        bits = colors[:, None, :] == self._palette[None, :, None]
        return bits.reshape(colors.shape[0], -1).astype(np.uint8)

    def decode_colors(self, bits: np.ndarray) -> np.ndarray:
        """Inverse of ``encode_colors``; slots without a bit come back as 0."""
        blocks = bits.reshape(bits.shape[0], self.edge_colors - 1, self.flattened_length)
        if np.any(blocks > 1):
            raise MalformedStateError("state entries must be 0 or 1")
        if np.any(blocks.sum(axis=1) > 1):
            raise MalformedStateError("a slot has more than one color bit set")
        return (blocks * self._palette[None, :, None]).sum(axis=1).astype(np.uint8)

    def graphs_from_colors(self, colors: np.ndarray) -> Graph:
        adjacency = _scatter_flattened(colors, self.graph_order, self.kind, self.flattened_ordering)
        return Graph._trusted(self.edge_colors, self.kind, adjacency)

    def _check_states(self, states) -> np.ndarray:
        states = np.asarray(states)
        if states.ndim != 2 or states.shape[1] != self.state_length:
            raise MalformedStateError(f"expected states of shape (batch, {self.state_length}), got {states.shape}")
        return states

    @staticmethod
    def _one_hot_index(block: np.ndarray, allow_empty: bool) -> np.ndarray:
        """Index of the set bit per row, or ``block.shape[1]`` for an empty row."""
        block = np.ascontiguousarray(block)
        if block.dtype == np.uint8 and block.size and block.max() <= 1:
            flags = block.view(bool)  # byte-identical, and much faster to reduce
        else:
            flags = block != 0
            if np.any(block > 1):
                raise MalformedStateError("one-hot block has more than one bit set")
        counts = np.count_nonzero(flags, axis=1)
        if np.any(counts > 1):
            raise MalformedStateError("one-hot block has more than one bit set")
        if not allow_empty and np.any(counts == 0):
            raise MalformedStateError("one-hot block is empty")
        return np.where(counts == 1, flags.argmax(axis=1), block.shape[1])


class GeneratedSlotEnvironment(SlotEnvironment):
    """Slot environment whose episodes start from generated, fully colored graphs."""

    def __init__(self, *args, initial_graph_generator: GraphGenerator | None = None, **kwargs):
        super().__init__(*args, **kwargs)
        if initial_graph_generator is None:
            initial_graph_generator = fixed(monochromatic_graph(
                self.graph_order, 0, self.edge_colors, self.is_directed, self.allow_loops))
        self.initial_graph_generator = initial_graph_generator

    def _initial_colors(self, batch_size: int) -> np.ndarray:
        batch = self.initial_graph_generator(batch_size)
        check_batch(batch, batch_size, self.edge_colors, self.kind, self.graph_order)
        return batch.flattened_colors(self.flattened_ordering)
