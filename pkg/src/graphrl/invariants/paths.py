"""Reachability and shortest-path distances on batches of simple graphs."""

from __future__ import annotations

import numpy as np

from graphrl.graphs import Graph


def edge_matrices(graphs) -> np.ndarray:
    """Boolean ``(batch, n, n)`` adjacency of two-colored undirected graphs.

    Color 1 marks an edge.  Loops are dropped.  Accepts a ``Graph`` (single or
    batch) or an array of 0/1 adjacency matrices.
    """
    if isinstance(graphs, Graph):
        if graphs.edge_colors != 2:
            raise ValueError("expected two edge colors (color 1 = edge)")
        if graphs.is_directed:
            raise ValueError("expected undirected graphs")
        a = graphs.as_batch().adjacency_matrix_colors == 1
    else:
        a = np.asarray(graphs)
        if a.ndim == 2:
            a = a[None]
        a = a == 1
    a = a.copy()
    n = a.shape[-1]
    a[:, np.arange(n), np.arange(n)] = False
    return a


def is_connected(graphs) -> np.ndarray:
    """True where every vertex is reachable from vertex 0."""
    a = edge_matrices(graphs).astype(np.int32)
    batch, n = a.shape[0], a.shape[-1]
    reach = np.zeros((batch, n), dtype=bool)
    if n == 0:
        return np.ones(batch, dtype=bool)
    reach[:, 0] = True
    frontier = reach.copy()
    while frontier.any():
        nxt = np.einsum("bi,bij->bj", frontier.astype(np.int32), a) > 0
        frontier = nxt & ~reach
        reach |= frontier
    return reach.all(axis=1)


def distance_matrices(graphs) -> np.ndarray:
    """All-pairs BFS distances, ``-1`` for unreachable pairs."""
    a = edge_matrices(graphs).astype(np.int32)
    batch, n = a.shape[0], a.shape[-1]
    dist = np.full((batch, n, n), -1, dtype=np.int64)
    eye = np.eye(n, dtype=bool)
    dist[:, eye] = 0
    reach = np.broadcast_to(eye, (batch, n, n)).copy()
    frontier = reach.copy()
    level = 0
    while frontier.any():
        level += 1
        frontier = ((frontier.astype(np.int32) @ a) > 0) & ~reach
        dist[frontier] = level
        reach |= frontier
    return dist


def transmissions(graphs) -> np.ndarray:
    """Row sums of the distance matrix.  Every graph must be connected."""
    dist = distance_matrices(graphs)
    if (dist < 0).any():
        raise ValueError("transmissions are only defined for connected graphs")
    return dist.sum(axis=2)
