import numpy as np
import pytest

from graphrl.graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    monochromatic_graph,
    path_graph,
    star_graph,
)
from graphrl.invariants import (
    MAX_MATCHING_ORDER,
    InvariantFn,
    conjecture1_score,
    degree_square_sum,
    distance_matrices,
    energy_matching_score,
    eigvalsh,
    evaluate64,
    graph_energy,
    is_connected,
    jacobi_eigh,
    laplacian_spectral_radius,
    lookup,
    matching_number,
    monochromatic_directed_triangles,
    mostar_index,
    mostar_score,
    penalize_disconnected,
    register,
    registered_names,
    transmissions,
)

from oracles import (
    all_labeled_graphs,
    atlas,
    charpoly_eigenvalues,
    join_complete_empty,
    max_matching_all,
    mostar_by_counting,
)


def simple(adj) -> Graph:
    return Graph(2, adjacency_matrix_colors=np.asarray(adj, dtype=np.int64))


def laplacian(adj):
    adj = np.asarray(adj, dtype=np.int64)
    return np.diag(adj.sum(axis=1)) - adj


# -- eigen-solver ---------------------------------------------------------------------


def test_eigenvalues_match_charpoly_random_small():
    rng = np.random.default_rng(11)
    for n in range(1, 5):
        for _ in range(200):
            m = rng.normal(size=(n, n))
            m = m + m.T
            assert np.allclose(eigvalsh(m), charpoly_eigenvalues(m), atol=1e-6, rtol=0)


def test_eigenvalues_match_charpoly_graph_matrices():
    # integer matrices with repeated eigenvalues, through the exact oracle
    for adj in atlas(4):
        for m in (adj, laplacian(adj)):
            assert np.allclose(eigvalsh(m.astype(float)), charpoly_eigenvalues(m.astype(int)), atol=1e-6, rtol=0)


def test_reconstruction_and_orthonormality():
    rng = np.random.default_rng(3)
    for n in (1, 2, 5, 9, 16):
        m = rng.normal(size=(4, n, n))
        m = m + np.swapaxes(m, 1, 2)
        w, v = jacobi_eigh(m)
        assert np.all(np.diff(w, axis=-1) >= 0)
        rebuilt = v @ (w[..., None] * np.swapaxes(v, 1, 2))
        assert np.abs(rebuilt - m).max() < 1e-8
        assert np.abs(np.swapaxes(v, 1, 2) @ v - np.eye(n)).max() < 1e-8
        assert np.allclose(w, np.linalg.eigvalsh(m), atol=1e-9)


def test_eigensolver_rejects_bad_input():
    with pytest.raises(ValueError):
        eigvalsh(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        eigvalsh(np.ones((2, 3)))
    with pytest.raises(ValueError):
        eigvalsh(np.array([[np.nan]]))


# -- Laplacian spectral radius and the first conjecture ---------------------------------


def test_laplacian_radius_examples():
    assert laplacian_spectral_radius(complete_graph(4))[0] == pytest.approx(4, abs=1e-8)
    assert laplacian_spectral_radius(path_graph(2))[0] == pytest.approx(2, abs=1e-8)
    assert laplacian_spectral_radius(star_graph(4))[0] == pytest.approx(4, abs=1e-8)


@pytest.mark.parametrize("n", range(2, 11))
def test_laplacian_radius_complete(n):
    assert abs(laplacian_spectral_radius(complete_graph(n))[0] - n) < 1e-8


def test_laplacian_radius_against_numpy_on_atlas():
    adjs = [a for a in atlas(6) if a.shape[0] == 6]
    got = laplacian_spectral_radius(simple(np.stack(adjs)))
    want = [np.linalg.eigvalsh(laplacian(a).astype(float))[-1] for a in adjs]
    assert np.allclose(got, want, atol=1e-8)


def test_conjecture1_examples():
    assert conjecture1_score(complete_graph(3))[0] == pytest.approx(-1.0, abs=1e-6)
    assert conjecture1_score(complete_graph(5))[0] == pytest.approx(-3.0, abs=1e-6)
    assert conjecture1_score(empty_graph(4))[0] == -10.0
    assert conjecture1_score(complete_graph(1))[0] == pytest.approx(-2.0, abs=1e-6)  # d, m floored at 1


def test_conjecture1_by_hand_on_path():
    # P3: mu = 3, middle vertex d=2 m=1 -> 1.5, leaves d=1 m=2 -> 6
    assert conjecture1_score(path_graph(3))[0] == pytest.approx(3 - 6, abs=1e-6)


def test_conjecture1_nonpositive_on_small_graphs():
    # the bound is known to hold for small orders
    batch = simple(np.stack([a for a in atlas(7) if a.shape[0] == 7]))
    assert (conjecture1_score.evaluate(batch) <= 1e-9).all()


# -- energy and matching ------------------------------------------------------------------


def test_energy_examples():
    assert graph_energy(path_graph(2))[0] == pytest.approx(2, abs=1e-8)
    assert graph_energy(cycle_graph(4))[0] == pytest.approx(4, abs=1e-8)
    assert graph_energy(complete_graph(4))[0] == pytest.approx(6, abs=1e-8)


def test_energy_nonnegative_and_zero_only_when_edgeless():
    for n in range(1, 7):
        batch = [a for a in atlas(6) if a.shape[0] == n]
        energy = graph_energy(simple(np.stack(batch)))
        assert (energy >= 0).all()
        edgeless = np.array([a.sum() == 0 for a in batch])
        assert np.all((energy < 1e-9) == edgeless)


def test_matching_examples():
    assert matching_number(path_graph(4))[0] == 2
    assert matching_number(cycle_graph(4))[0] == 2
    assert matching_number(complete_graph(4))[0] == 2
    assert matching_number(star_graph(7))[0] == 1
    assert matching_number(empty_graph(5))[0] == 0


@pytest.mark.parametrize("n", range(1, 7))
def test_matching_exhaustive_all_labeled_graphs(n):
    adjs = all_labeled_graphs(n)
    assert np.array_equal(matching_number(adjs), max_matching_all(adjs))


def test_matching_random_larger_graphs():
    rng = np.random.default_rng(5)
    for n, p in [(10, 0.2), (12, 0.3), (14, 0.15), (16, 0.1)]:
        u = rng.random((20, n, n)) < p
        adjs = np.triu(u, 1)
        adjs = (adjs | np.swapaxes(adjs, 1, 2)).astype(np.uint8)
        assert np.array_equal(matching_number(adjs), max_matching_all(adjs))


def test_matching_order_limit():
    matching_number(complete_graph(MAX_MATCHING_ORDER))
    with pytest.raises(ValueError):
        matching_number(complete_graph(MAX_MATCHING_ORDER + 1))


def test_energy_matching_examples():
    c7 = sum(abs(2 * np.cos(2 * np.pi * j / 7)) for j in range(7)) - 6 * np.sqrt(2)
    assert energy_matching_score.evaluate(cycle_graph(7))[0] == pytest.approx(c7, abs=1e-9)
    assert round(c7, 4) == 0.5026
    assert energy_matching_score(complete_graph(7))[0] == -2000.0  # max degree 6
    assert energy_matching_score.evaluate(path_graph(3))[0] <= 1e-9
    assert energy_matching_score(empty_graph(5))[0] == -2000.0


# -- distances and Mostar --------------------------------------------------------------------


def test_distances_and_connectivity():
    d = distance_matrices(path_graph(4))[0]
    assert d.tolist() == [[0, 1, 2, 3], [1, 0, 1, 2], [2, 1, 0, 1], [3, 2, 1, 0]]
    two = simple([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert distance_matrices(two)[0, 0, 2] == -1
    assert is_connected(two).tolist() == [False]
    assert is_connected(cycle_graph(5)).tolist() == [True]
    assert transmissions(star_graph(4))[0].tolist() == [3, 5, 5, 5]
    with pytest.raises(ValueError):
        transmissions(two)


def test_mostar_examples():
    assert mostar_score(cycle_graph(6))[0] == 0.0
    assert mostar_score(star_graph(5))[0] == 12.0
    assert mostar_score(simple(join_complete_empty(12)))[0] == 224.0
    assert mostar_score(simple(join_complete_empty(21)))[0] == 1274.0
    assert mostar_score(empty_graph(3))[0] == -2000.0


def test_mostar_transmission_formula_matches_counting():
    connected = [a for a in atlas(7) if a.shape[0] >= 2 and is_connected(a)[0]]
    assert len(connected) > 800
    for adj in connected:
        assert mostar_index(simple(adj))[0] == mostar_by_counting(adj)


def test_mostar_counting_on_join_graphs():
    for n in (12, 21):
        adj = join_complete_empty(n)
        assert mostar_by_counting(adj) == mostar_index(simple(adj))[0]


# -- other built-ins and the registry ---------------------------------------------------------


def test_degree_square_sum():
    assert degree_square_sum(complete_graph(5))[0] == 80
    assert degree_square_sum(empty_graph(4))[0] == 0


def test_monochromatic_triangles():
    cyc = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    g = Graph(2, True, False, adjacency_matrix_colors=cyc)
    assert monochromatic_directed_triangles(g)[0] == 1
    assert monochromatic_directed_triangles(g, colors=[0])[0] == 1  # the reverse cycle; no phantom loops
    assert monochromatic_directed_triangles(monochromatic_graph(4, 0, 2, True))[0] == 0
    both = monochromatic_graph(4, 1, 2, True)  # every arc color 1: 8 directed triangles
    assert monochromatic_directed_triangles(both)[0] == 8
    with pytest.raises(ValueError):
        monochromatic_directed_triangles(g, colors=[2])


def test_registry():
    names = registered_names()
    for name in ("conjecture1", "energy_matching", "mostar", "mono_triangles", "degree_square_sum"):
        assert name in names
    assert lookup("conjecture1") is conjecture1_score
    with pytest.raises(KeyError):
        lookup("no_such_invariant")
    with pytest.raises(ValueError):
        register("conjecture1", degree_square_sum)
    with pytest.raises(ValueError):
        register("not a name", degree_square_sum)
    fn = register("edge_count_test_only", lambda g: np.array([g.adjacency_matrix_colors.sum() / 2]), replace=True)
    assert isinstance(fn, InvariantFn) and lookup("edge_count_test_only") is fn
    assert fn(complete_graph(4))[0] == 6


def test_penalize_disconnected_passes_connected_through():
    wrapped = penalize_disconnected(degree_square_sum, -7.0)
    batch = simple(np.stack([complete_graph(4).adjacency_matrix_colors, empty_graph(4).adjacency_matrix_colors]))
    assert wrapped.evaluate(batch).tolist() == [36.0, -7.0]


def test_float32_boundary_and_purity():
    batch = simple(np.stack([a for a in atlas(7) if a.shape[0] == 7][:200]))
    for fn in (conjecture1_score, energy_matching_score, mostar_score):
        first = fn(batch)
        assert first.dtype == np.float32
        assert np.array_equal(first, fn(batch))
        assert evaluate64(fn, batch).dtype == np.float64
        assert np.allclose(first, evaluate64(fn, batch), atol=1e-3)


def test_single_and_batch_agree():
    graphs = [cycle_graph(7), star_graph(7), complete_graph(7), path_graph(7)]
    batch = simple(np.stack([g.adjacency_matrix_colors for g in graphs]))
    for fn in (conjecture1_score, energy_matching_score, mostar_score):
        assert np.array_equal(fn(batch), np.concatenate([fn(g) for g in graphs]))
