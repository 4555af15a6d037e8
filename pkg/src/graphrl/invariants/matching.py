"""Exact maximum matching size by branch and bound.

Each vertex keeps its neighbourhood as a bitmask.  A node of the search tree
first matches every degree-1 vertex with its only neighbour (always safe),
then branches on one edge at a highest-degree vertex: take it (both ends
leave the graph) or drop it.  A branch is cut when the matched count plus
min(non-isolated vertices // 2, remaining edges) cannot beat the incumbent,
which starts from a greedy matching.
"""

from __future__ import annotations

import numba
import numpy as np

from graphrl.invariants.paths import edge_matrices

MAX_MATCHING_ORDER = 32


@numba.njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@numba.njit(cache=True)
def _lowest_bit(x):
    i = 0
    while not (x >> i) & 1:
        i += 1
    return i


@numba.njit(cache=True)
def _remove_vertex(adj, x):
    nbrs = adj[x]
    one = np.int64(1)
    while nbrs:
        w = _lowest_bit(nbrs)
        adj[w] &= ~(one << x)
        nbrs &= nbrs - 1
    adj[x] = 0


@numba.njit(cache=True)
def _greedy(adj0):
    adj = adj0.copy()
    n = adj.shape[0]
    size = 0
    while True:
        u = -1
        du = n + 1
        for v in range(n):
            d = _popcount(adj[v])
            if 0 < d < du:
                u, du = v, d
        if u < 0:
            return size
        nbrs = adj[u]
        w = -1
        dw = n + 1
        while nbrs:
            x = _lowest_bit(nbrs)
            d = _popcount(adj[x])
            if d < dw:
                w, dw = x, d
            nbrs &= nbrs - 1
        _remove_vertex(adj, u)
        _remove_vertex(adj, w)
        size += 1


@numba.njit(cache=True)
def _max_matching(adj0):
    n = adj0.shape[0]
    edges = 0
    for v in range(n):
        edges += _popcount(adj0[v])
    edges //= 2
    best = _greedy(adj0)
    depth = 2 * edges + 2
    stack = np.empty((depth, n), dtype=np.int64)
    matched_stack = np.empty(depth, dtype=np.int64)
    stack[0] = adj0
    matched_stack[0] = 0
    sp = 1
    adj = np.empty(n, dtype=np.int64)
    one = np.int64(1)
    while sp > 0:
        sp -= 1
        adj[:] = stack[sp]
        matched = matched_stack[sp]

        changed = True
        while changed:
            changed = False
            for v in range(n):
                if adj[v] != 0 and _popcount(adj[v]) == 1:
                    u = _lowest_bit(adj[v])
                    _remove_vertex(adj, v)
                    _remove_vertex(adj, u)
                    matched += 1
                    changed = True

        if matched > best:
            best = matched
        alive = 0
        twice_edges = 0
        u = -1
        du = 0
        for v in range(n):
            d = _popcount(adj[v])
            if d > 0:
                alive += 1
                twice_edges += d
                if d > du:
                    u, du = v, d
        if u < 0:
            continue
        if matched + min(alive // 2, twice_edges // 2) <= best:
            continue

        nbrs = adj[u]
        w = -1
        dw = n + 1
        while nbrs:
            x = _lowest_bit(nbrs)
            d = _popcount(adj[x])
            if d < dw:
                w, dw = x, d
            nbrs &= nbrs - 1

        # drop edge uw
        stack[sp] = adj
        stack[sp, u] &= ~(one << w)
        stack[sp, w] &= ~(one << u)
        matched_stack[sp] = matched
        sp += 1
        # take edge uw; explored first
        stack[sp] = adj
        _remove_vertex(stack[sp], u)
        _remove_vertex(stack[sp], w)
        matched_stack[sp] = matched + 1
        sp += 1
    return best


def neighbour_masks(adjacency: np.ndarray) -> np.ndarray:
    """Pack a boolean ``(n, n)`` adjacency into one int64 bitmask per vertex."""
    n = adjacency.shape[0]
    weights = np.int64(1) << np.arange(n, dtype=np.int64)
    return (adjacency.astype(np.int64) * weights).sum(axis=1).astype(np.int64)


def matching_number(graphs) -> np.ndarray:
    """Size of a maximum matching of each simple graph in the batch."""
    a = edge_matrices(graphs)
    if a.shape[-1] > MAX_MATCHING_ORDER:
        raise ValueError(f"matching_number supports order <= {MAX_MATCHING_ORDER}, got {a.shape[-1]}")
    return np.array([_max_matching(neighbour_masks(m)) for m in a], dtype=np.int64)
