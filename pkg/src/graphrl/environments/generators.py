"""Graph generators: callables mapping a batch size to a batch of graphs."""

from __future__ import annotations

from typing import Callable

import numpy as np

from graphrl.graphs import FlattenedOrdering, Graph, GraphKind, flattened_length
from graphrl.graphs.graph import _scatter_flattened

GraphGenerator = Callable[[int], Graph]


class GeneratorError(ValueError):
    pass


def _from_flat(colors: np.ndarray, k: int, kind: GraphKind, n: int) -> Graph:
    adjacency = _scatter_flattened(colors.astype(np.uint8), n, kind, FlattenedOrdering.ROW_MAJOR)
    return Graph._trusted(k, kind, adjacency)


def fixed(graph: Graph) -> GraphGenerator:
    """Every element of every batch is ``graph``."""
    if graph.batch_size is not None:
        raise GeneratorError("fixed() takes a single graph")
    if not graph.is_fully_colored:
        raise GeneratorError("generated graphs must be fully colored")
    adjacency = graph.adjacency_matrix_colors

    def generate(batch_size: int) -> Graph:
        return Graph._trusted(graph.edge_colors, graph.kind,
                              np.broadcast_to(adjacency, (batch_size,) + adjacency.shape))

    return generate


def uniform_random(edge_colors: int, graph_order: int, is_directed: bool = False,
                   allow_loops: bool = False, seed=None) -> GraphGenerator:
    """Each slot gets a color drawn uniformly from 0..k-1."""
    kind = GraphKind(is_directed, allow_loops)
    ell = flattened_length(graph_order, kind)
    rng = np.random.default_rng(seed)

    def generate(batch_size: int) -> Graph:
        return _from_flat(rng.integers(0, edge_colors, size=(batch_size, ell)), edge_colors, kind, graph_order)

    return generate


def bernoulli(graph_order: int, p: float, is_directed: bool = False,
              allow_loops: bool = False, seed=None) -> GraphGenerator:
    """Two colors; each slot is 1 with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise GeneratorError(f"p must lie in [0, 1], got {p}")
    kind = GraphKind(is_directed, allow_loops)
    ell = flattened_length(graph_order, kind)
    rng = np.random.default_rng(seed)

    def generate(batch_size: int) -> Graph:
        return _from_flat(rng.random((batch_size, ell)) < p, 2, kind, graph_order)

    return generate


def from_callback(fn: Callable[[int], Graph], edge_colors: int, graph_order: int,
                  is_directed: bool = False, allow_loops: bool = False) -> GraphGenerator:
    """Wrap a user function, checking every batch it produces."""
    kind = GraphKind(is_directed, allow_loops)

    def generate(batch_size: int) -> Graph:
        batch = fn(batch_size)
        check_batch(batch, batch_size, edge_colors, kind, graph_order)
        return batch

    return generate


def check_batch(batch, batch_size: int, edge_colors: int, kind: GraphKind, graph_order: int) -> None:
    if not isinstance(batch, Graph):
        raise GeneratorError(f"generator returned {type(batch).__name__}, expected a Graph batch")
    if batch.batch_size != batch_size:
        raise GeneratorError(f"generator returned batch size {batch.batch_size}, expected {batch_size}")
    if (batch.edge_colors, batch.kind, batch.graph_order) != (edge_colors, kind, graph_order):
        raise GeneratorError(
            f"generator produced k={batch.edge_colors}, {batch.kind}, order {batch.graph_order}; "
            f"environment needs k={edge_colors}, {kind}, order {graph_order}"
        )
    if not np.all(batch.is_fully_colored):
        raise GeneratorError("generated graphs must be fully colored")
