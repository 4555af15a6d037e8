"""Graph invariants used as scores, plus a name registry.

Every built-in works on a ``Graph`` batch (a single graph is treated as a batch
of one) and computes in float64.  ``InvariantFn.__call__`` hands back float32,
the width environments report; ``InvariantFn.evaluate`` keeps float64.

Two-colored invariants read color 1 as an edge; color 0 and the uncolored
label both count as non-edges, so they are defined on partial graphs too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from graphrl.graphs import FlattenedOrdering, Graph
from graphrl.invariants.linalg import eigvalsh
from graphrl.invariants.matching import matching_number
from graphrl.invariants.paths import edge_matrices, is_connected, transmissions

EIGEN_TOL = 1e-10


def _as_batch(graphs) -> Graph:
    return graphs.as_batch() if graphs.batch_size is None else graphs


def evaluate64(fn, graphs) -> np.ndarray:
    """Scores of any invariant callable as a flat float64 vector."""
    if isinstance(fn, InvariantFn):
        return fn.evaluate(graphs)
    return np.asarray(fn(graphs), dtype=np.float64).reshape(-1)


@dataclass(frozen=True)
class InvariantFn:
    """A named batch invariant with an optional difference function.

    ``f(batch)`` returns one score per graph.  ``delta(previous, current)``,
    when given, returns ``f(current) - f(previous)`` element-wise, usually
    more cheaply.
    """

    name: str
    f: Callable[[Graph], np.ndarray]
    delta: Callable[[Graph, Graph], np.ndarray] | None = field(default=None, compare=False)

    def evaluate(self, graphs) -> np.ndarray:
        return np.asarray(self.f(_as_batch(graphs)), dtype=np.float64).reshape(-1)

    def evaluate_difference(self, previous, current) -> np.ndarray:
        previous, current = _as_batch(previous), _as_batch(current)
        if self.delta is None:
            return self.evaluate(current) - self.evaluate(previous)
        return np.asarray(self.delta(previous, current), dtype=np.float64).reshape(-1)

    def __call__(self, graphs) -> np.ndarray:
        return self.evaluate(graphs).astype(np.float32)

    def difference(self, previous, current) -> np.ndarray:
        return self.evaluate_difference(previous, current).astype(np.float32)


# -- vertex statistics ------------------------------------------------------

def degrees(graphs) -> np.ndarray:
    return edge_matrices(graphs).sum(axis=2)


@dataclass
class SpectralScratch:
    """Per-vertex and spectral quantities shared by the Laplacian invariants.

    ``average_neighbour_degree`` divides by the degree floored at 1, so an
    isolated vertex gets 0 rather than a division error.
    """

    adjacency: np.ndarray
    degree: np.ndarray
    average_neighbour_degree: np.ndarray
    laplacian: np.ndarray
    _eigenvalues: np.ndarray | None = None

    @classmethod
    def from_graphs(cls, graphs) -> "SpectralScratch":
        a = edge_matrices(graphs).astype(np.float64)
        d = a.sum(axis=2)
        m = (a @ d[..., None])[..., 0] / np.maximum(d, 1.0)
        lap = -a
        idx = np.arange(a.shape[-1])
        lap[:, idx, idx] += d
        return cls(a, d, m, lap)

    @property
    def laplacian_eigenvalues(self) -> np.ndarray:
        if self._eigenvalues is None:
            self._eigenvalues = eigvalsh(self.laplacian, tol=EIGEN_TOL)
        return self._eigenvalues


def laplacian_spectral_radius(graphs) -> np.ndarray:
    return SpectralScratch.from_graphs(graphs).laplacian_eigenvalues[:, -1]


def graph_energy(graphs) -> np.ndarray:
    a = edge_matrices(graphs).astype(np.float64)
    return np.abs(eigvalsh(a, tol=EIGEN_TOL)).sum(axis=1)


# -- the built-in scores ------------------------------------------------------

def degree_square_sum(graphs) -> np.ndarray:
    return (degrees(graphs).astype(np.float64) ** 2).sum(axis=1)


def _degree_square_sum_delta(previous, current) -> np.ndarray:
    d0 = degrees(previous).astype(np.float64)
    d1 = degrees(current).astype(np.float64)
    return ((d1 - d0) * (d1 + d0)).sum(axis=1)


def zero_color_count_squared(graphs) -> np.ndarray:
    """Squared number of slots colored 0; any color count or graph kind."""
    flat = _as_batch(graphs).flattened_colors(FlattenedOrdering.ROW_MAJOR)
    return (flat == 0).sum(axis=1).astype(np.float64) ** 2


def _zero_color_count_squared_delta(previous, current) -> np.ndarray:
    c0 = (_as_batch(previous).flattened_colors(FlattenedOrdering.ROW_MAJOR) == 0).sum(axis=1)
    c1 = (_as_batch(current).flattened_colors(FlattenedOrdering.ROW_MAJOR) == 0).sum(axis=1)
    return ((c1 - c0) * (c1 + c0)).astype(np.float64)


def vertex_bound_gap(h: Callable[[np.ndarray, np.ndarray], np.ndarray]):
    """Score ``mu - max_v h(d(v), m(v))`` with ``d`` and ``m`` floored at 1."""

    def score(graphs) -> np.ndarray:
        s = SpectralScratch.from_graphs(graphs)
        d = np.maximum(s.degree, 1.0)
        m = np.maximum(s.average_neighbour_degree, 1.0)
        return s.laplacian_eigenvalues[:, -1] - h(d, m).max(axis=1)

    return score


def edge_bound_gap(h: Callable[..., np.ndarray], nan_value: float = -1000.0):
    """Score ``mu - max over edges uv of h(d(u), m(u), d(v), m(v))``.

    ``h`` must be symmetric in its two endpoints.  NaN values of ``h`` are
    replaced by ``nan_value``; an edgeless graph gets ``-inf`` on the right,
    so wrap the result with ``penalize_disconnected``.
    """

    def score(graphs) -> np.ndarray:
        s = SpectralScratch.from_graphs(graphs)
        d = np.maximum(s.degree, 1.0)
        m = np.maximum(s.average_neighbour_degree, 1.0)
        b, u, v = np.nonzero(np.triu(s.adjacency, k=1))
        with np.errstate(invalid="ignore", divide="ignore"):
            values = np.asarray(h(d[b, u], m[b, u], d[b, v], m[b, v]), dtype=np.float64)
        values = np.nan_to_num(values, nan=nan_value)
        rhs = np.full(s.degree.shape[0], -np.inf)
        np.maximum.at(rhs, b, values)
        return s.laplacian_eigenvalues[:, -1] - rhs

    return score


def conjecture1_inner(graphs) -> np.ndarray:
    """``mu - max_v (m(v)^2 / d(v) + m(v))``, before the connectivity penalty."""
    return vertex_bound_gap(lambda d, m: m * m / d + m)(graphs)


def energy_matching_inner(graphs, max_degree: int = 5, penalty: float = -2000.0) -> np.ndarray:
    """``energy - 2 * matching * sqrt(max degree)``; ``penalty`` above ``max_degree``."""
    a = edge_matrices(graphs)
    top = a.sum(axis=2).max(axis=1, initial=0)
    out = np.full(a.shape[0], penalty, dtype=np.float64)
    ok = top <= max_degree
    if ok.any():
        sub = a[ok]
        energy = np.abs(eigvalsh(sub.astype(np.float64), tol=EIGEN_TOL)).sum(axis=1)
        nu = matching_number(sub).astype(np.float64)
        out[ok] = energy - 2.0 * nu * np.sqrt(top[ok].astype(np.float64))
    return out


def mostar_index(graphs) -> np.ndarray:
    """Sum over edges of the transmission gap; graphs must be connected."""
    a = edge_matrices(graphs)
    t = transmissions(a)
    gaps = np.abs(t[:, :, None] - t[:, None, :])
    return (np.triu(a, k=1) * gaps).sum(axis=(1, 2)).astype(np.float64)


def monochromatic_directed_triangles(graphs, colors: Iterable[int] | None = None) -> np.ndarray:
    """Sum over ``colors`` of trace(A_c^3) / 3, with A_c the color-c arcs.

    Defaults to every color except 0.  On a directed graph this counts
    monochromatic directed 3-cycles.
    """
    g = _as_batch(graphs)
    colors = range(1, g.edge_colors) if colors is None else colors
    adj = g.adjacency_matrix_colors
    off_diagonal = g.allow_loops or ~np.eye(adj.shape[-1], dtype=bool)
    total = np.zeros(adj.shape[0], dtype=np.float64)
    for c in colors:
        if not 0 <= c < g.edge_colors:
            raise ValueError(f"color {c} out of range for {g.edge_colors} colors")
        a = ((adj == c) & off_diagonal).astype(np.float64)
        total += np.trace(a @ a @ a, axis1=1, axis2=2)
    return total / 3.0


def penalize_disconnected(inner, penalty: float, name: str | None = None) -> InvariantFn:
    """Wrap ``inner`` so disconnected graphs score ``penalty``.

    ``inner`` only ever sees the connected graphs of a batch.
    """

    def f(graphs) -> np.ndarray:
        connected = is_connected(graphs)
        out = np.full(connected.shape[0], float(penalty))
        if connected.any():
            out[connected] = evaluate64(inner, graphs[connected])
        return out

    label = name or f"penalized_{getattr(inner, 'name', getattr(inner, '__name__', 'invariant'))}"
    return InvariantFn(label, f)


# -- registry -----------------------------------------------------------------

_REGISTRY: dict[str, InvariantFn] = {}


def register(name: str, fn, delta=None, replace: bool = False) -> InvariantFn:
    """Register ``fn`` under ``name``.  Plain callables get wrapped."""
    if not name or not name.isidentifier():
        raise ValueError(f"invariant name must be an identifier, got {name!r}")
    if name in _REGISTRY and not replace:
        raise ValueError(f"invariant {name!r} is already registered")
    if not isinstance(fn, InvariantFn):
        fn = InvariantFn(name, fn, delta)
    elif fn.name != name:
        fn = InvariantFn(name, fn.f, fn.delta)
    _REGISTRY[name] = fn
    return fn


def lookup(name: str) -> InvariantFn:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown invariant {name!r}; registered: {', '.join(sorted(_REGISTRY))}") from None


def registered_names() -> list[str]:
    return sorted(_REGISTRY)


register("degree_square_sum", degree_square_sum, _degree_square_sum_delta)
register("zero_color_count_squared", zero_color_count_squared, _zero_color_count_squared_delta)
register("conjecture1", penalize_disconnected(conjecture1_inner, -10.0))
register("energy_matching", penalize_disconnected(energy_matching_inner, -2000.0))
register("mostar", penalize_disconnected(mostar_index, -2000.0))
register("mono_triangles", monochromatic_directed_triangles)
