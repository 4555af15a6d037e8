"""Named graph families.

Everything except the monochromatic graph is a simple undirected graph encoded
with two colors: color 1 marks an edge and color 0 a non-edge.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from graphrl.graphs.graph import Graph
from graphrl.graphs.formats import GraphKind


def _simple(adjacency: np.ndarray) -> Graph:
    adjacency = adjacency.astype(np.uint8)
    np.fill_diagonal(adjacency, 0)
    return Graph._trusted(2, GraphKind(False, False), adjacency)


def _need(n: int, minimum: int, name: str) -> None:
    if int(n) != n or n < minimum:
        raise ValueError(f"{name} needs order >= {minimum}, got {n}")


def _edges(n: int, edges) -> Graph:
    a = np.zeros((n, n), dtype=np.uint8)
    for u, v in edges:
        a[u, v] = a[v, u] = 1
    return _simple(a)


def monochromatic_graph(graph_order: int, selected_color: int = 0, edge_colors: int = 2,
                        is_directed: bool = False, allow_loops: bool = False) -> Graph:
    _need(graph_order, 1, "MonochromaticGraph")
    if not 0 <= selected_color < edge_colors:
        raise ValueError(f"selected_color must lie in 0..{edge_colors - 1}")
    a = np.full((graph_order, graph_order), selected_color, dtype=np.uint8)
    if not allow_loops:
        np.fill_diagonal(a, 0)
    return Graph(edge_colors, is_directed, allow_loops, adjacency_matrix_colors=a)


def empty_graph(n: int) -> Graph:
    _need(n, 1, "EmptyGraph")
    return _simple(np.zeros((n, n)))


def complete_graph(n: int) -> Graph:
    _need(n, 1, "CompleteGraph")
    return _simple(np.ones((n, n)))


def almost_complete_graph(n: int) -> Graph:
    """K_n with the edge {0, 1} removed."""
    _need(n, 2, "AlmostCompleteGraph")
    a = np.ones((n, n))
    a[0, 1] = a[1, 0] = 0
    return _simple(a)


def complete_kpartite_graph(part_sizes: Sequence[int]) -> Graph:
    """Parts occupy consecutive vertex ranges in the given order."""
    sizes = [int(s) for s in part_sizes]
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("CompleteKPartiteGraph needs a non-empty list of positive part sizes")
    labels = np.repeat(np.arange(len(sizes)), sizes)
    return _simple(labels[:, None] != labels[None, :])


def complete_bipartite_graph(m: int, n: int) -> Graph:
    return complete_kpartite_graph([m, n])


def star_graph(n: int) -> Graph:
    """Vertex 0 joined to vertices 1..n-1."""
    _need(n, 2, "StarGraph")
    return _edges(n, [(0, v) for v in range(1, n)])


def path_graph(n: int) -> Graph:
    _need(n, 1, "PathGraph")
    return _edges(n, [(v, v + 1) for v in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    _need(n, 3, "CycleGraph")
    return _edges(n, [(v, (v + 1) % n) for v in range(n)])


def wheel_graph(n: int) -> Graph:
    """Hub 0 joined to a rim cycle on vertices 1..n-1."""
    _need(n, 4, "WheelGraph")
    rim = list(range(1, n))
    edges = [(0, v) for v in rim] + [(rim[i], rim[(i + 1) % len(rim)]) for i in range(len(rim))]
    return _edges(n, edges)


def book_graph(m: int) -> Graph:
    """m triangles sharing the spine edge {0, 1}; order m + 2."""
    _need(m, 1, "BookGraph")
    edges = [(0, 1)] + [(s, p) for p in range(2, m + 2) for s in (0, 1)]
    return _edges(m + 2, edges)


def friendship_graph(m: int) -> Graph:
    """m triangles sharing vertex 0; order 2m + 1."""
    _need(m, 1, "FriendshipGraph")
    edges = []
    for i in range(m):
        a, b = 2 * i + 1, 2 * i + 2
        edges += [(0, a), (0, b), (a, b)]
    return _edges(2 * m + 1, edges)


def join_graph(first: Graph, second: Graph) -> Graph:
    """Disjoint union of two simple graphs plus every edge between them."""
    a, b = first.adjacency_matrix_colors == 1, second.adjacency_matrix_colors == 1
    n1, n2 = a.shape[0], b.shape[0]
    joined = np.ones((n1 + n2, n1 + n2), dtype=np.uint8)
    joined[:n1, :n1] = a
    joined[n1:, n1:] = b
    return _simple(joined)


FAMILIES = {
    "MonochromaticGraph": monochromatic_graph,
    "EmptyGraph": empty_graph,
    "CompleteGraph": complete_graph,
    "AlmostCompleteGraph": almost_complete_graph,
    "CompleteBipartiteGraph": complete_bipartite_graph,
    "CompleteKPartiteGraph": complete_kpartite_graph,
    "StarGraph": star_graph,
    "PathGraph": path_graph,
    "CycleGraph": cycle_graph,
    "WheelGraph": wheel_graph,
    "BookGraph": book_graph,
    "FriendshipGraph": friendship_graph,
}


def named_graph(family: str, *args, **kwargs) -> Graph:
    try:
        builder = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown graph family {family!r}; choose from {sorted(FAMILIES)}") from None
    return builder(*args, **kwargs)
