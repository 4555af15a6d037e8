import numpy as np
import pytest

from graphrl.environments import (
    ActionError,
    EpisodeError,
    EpisodeStatus,
    GeneratorError,
    GlobalFlipEnvironment,
    GlobalSetEnvironment,
    LinearBuildEnvironment,
    LinearFlipEnvironment,
    LinearSetEnvironment,
    LocalFlipEnvironment,
    LocalSetEnvironment,
    MalformedStateError,
    bernoulli,
    fixed,
    from_callback,
    uniform_random,
)
from graphrl.graphs import FlattenedOrdering, Graph, complete_graph, monochromatic_graph
from graphrl.invariants import InvariantFn, degree_square_sum, lookup


def zero_count_squared():
    return lookup("zero_color_count_squared")


def clockwise_build_env(**kwargs):
    return LinearBuildEnvironment(zero_count_squared(), 3, flattened_ordering=FlattenedOrdering.CLOCKWISE,
                                  edge_colors=4, allow_loops=True, **kwargs)


CLOCKWISE_BUILD_ACTIONS = [[0, 0, 0, 1], [3, 2, 1, 3], [0, 3, 0, 1], [1, 0, 2, 2], [1, 2, 3, 0], [2, 0, 0, 1]]
CLOCKWISE_BUILD_FINAL = [
    [[0, 3, 1], [3, 0, 1], [1, 1, 2]],
    [[0, 2, 0], [2, 3, 2], [0, 2, 0]],
    [[0, 1, 2], [1, 0, 3], [2, 3, 0]],
    [[1, 3, 2], [3, 1, 0], [2, 0, 1]],
]


def degree_flip_env():
    return GlobalFlipEnvironment(lookup("degree_square_sum"), 5, episode_length=4, flip_only=True,
                                 flattened_ordering=FlattenedOrdering.ROW_MAJOR,
                                 initial_graph_generator=fixed(monochromatic_graph(5, 1)), sparse_setting=True)


DEGREE_FLIP_ACTIONS = [[0, 2], [1, 7], [5, 1], [9, 7]]
DEGREE_FLIP_FINAL = [
    [[0, 0, 0, 1, 1], [0, 0, 1, 0, 1], [0, 1, 0, 1, 1], [1, 0, 1, 0, 0], [1, 1, 1, 0, 0]],
    [[0, 1, 0, 0, 1], [1, 0, 1, 1, 1], [0, 1, 0, 1, 1], [0, 1, 1, 0, 1], [1, 1, 1, 1, 0]],
]


def directed_walk_env():
    return LocalSetEnvironment(lookup("mono_triangles"), 4, episode_length=6,
                               flattened_ordering=FlattenedOrdering.ROW_MAJOR, edge_colors=3, is_directed=True,
                               starting_vertex=0)


def test_clockwise_build_replay():
    env = clockwise_build_env()
    states, scores, status = env.reset_batch(4)
    assert states.shape == (4, 24) and states.dtype == np.uint8
    assert not states[:, :18].any() and (states[:, 18] == 1).all() and not states[:, 19:].any()
    assert scores.tolist() == [0, 0, 0, 0]
    for i, actions in enumerate(CLOCKWISE_BUILD_ACTIONS):
        assert status is EpisodeStatus.IN_PROGRESS
        states, scores, status = env.step_batch(np.array(actions, dtype=np.int32))
        if i == 3:
            partial = env.state_batch_to_graph_batch(states).adjacency_matrix_colors[0]
            assert partial.tolist() == [[0, 3, 1], [3, 0, 4], [1, 4, 4]]
    assert status is EpisodeStatus.TERMINATED
    assert env.state_batch_to_graph_batch(states).adjacency_matrix_colors.tolist() == CLOCKWISE_BUILD_FINAL
    assert not states[:, 18:].any()
    with pytest.raises(EpisodeError):
        env.step_batch(np.zeros(4, dtype=np.int32))


def test_degree_flip_replay():
    env = degree_flip_env()
    states, scores, status = env.reset_batch(2)
    assert scores is None
    for actions in DEGREE_FLIP_ACTIONS:
        assert status is EpisodeStatus.IN_PROGRESS
        states, scores, status = env.step_batch(np.array(actions, dtype=np.int32))
        if status is EpisodeStatus.IN_PROGRESS:
            assert scores is None
    assert status is EpisodeStatus.TRUNCATED
    graphs = env.state_batch_to_graph_batch(states)
    assert graphs.adjacency_matrix_colors.tolist() == DEGREE_FLIP_FINAL
    assert scores.dtype == np.float32 and scores.tolist() == [30.0, 54.0]
    # the degree-square oracle on the printed matrices
    assert [int((np.sum(m, axis=1) ** 2).sum()) for m in np.array(DEGREE_FLIP_FINAL)] == [30, 54]


def test_directed_walk_replay():
    env = directed_walk_env()
    states, scores, status = env.reset_batch(1)
    assert env.action_mask[0].tolist() == [False, True, True, True] * 3
    assert states[0, -4:].tolist() == [1, 0, 0, 0]
    seq = [scores[0]]
    for a in [6, 7, 4, 5, 7, 8]:
        states, scores, status = env.step_batch(np.array([a], dtype=np.int32))
        seq.append(scores[0])
    assert seq[1:] == [0, 0, 1, 1, 2, 0] and seq[0] == 0
    assert status is EpisodeStatus.TRUNCATED
    a = env.state_batch_to_graph_batch(states).adjacency_matrix_colors[0]
    walk = [0, 2, 3, 0, 1, 3, 0]
    arcs = list(zip(walk, walk[1:]))
    for u, v in arcs[:-1]:
        if (u, v) != (3, 0):  # traversed twice; the final pass recolors it
            assert a[u, v] == 1
    assert a[3, 0] == 2
    untouched = [(u, v) for u in range(4) for v in range(4) if u != v and (u, v) not in arcs]
    assert all(a[u, v] == 0 for u, v in untouched)
    assert states[0, -4:].tolist() == [1, 0, 0, 0]


def test_linear_build_shape_for_sixteen():
    env = LinearBuildEnvironment(lookup("conjecture1"), 16)
    assert (env.state_length, env.action_number, env.episode_length) == (240, 2, 120)
    assert not env.is_continuing and env.state_dtype == np.uint8


def test_linear_position_walk():
    env = LinearBuildEnvironment(degree_square_sum, 4, sparse_setting=True)
    states, _, status = env.reset_batch(3)
    ell = env.flattened_length
    for t in range(ell):
        assert status is EpisodeStatus.IN_PROGRESS
        assert np.argmax(states[:, ell:], axis=1).tolist() == [t] * 3
        states, _, status = env.step_batch(np.ones(3, dtype=np.int32))
    assert status is EpisodeStatus.TERMINATED and not states[:, ell:].any()


def test_linear_flip_identity_and_involution():
    env = LinearFlipEnvironment(degree_square_sum, 5)
    env.reset_batch(2)
    for _ in range(env.episode_length):
        states, _, _ = env.step_batch(np.array([0, 1], dtype=np.int32))
    g = env.state_batch_to_graph_batch(states)
    assert g[0] == monochromatic_graph(5, 0) and g[1] == complete_graph(5)


def test_linear_set_replays_target():
    rng = np.random.default_rng(3)
    env = LinearSetEnvironment(zero_count_squared(), 4, edge_colors=3, is_directed=True,
                               flattened_ordering=FlattenedOrdering.CLOCKWISE)
    target = Graph(3, True, False, flattened_clockwise_colors=rng.integers(0, 3, size=12))
    env.reset_batch(1)
    for c in target.flattened_clockwise_colors:
        states, _, status = env.step_batch(np.array([c], dtype=np.int32))
    assert status is EpisodeStatus.TERMINATED
    assert env.state_batch_to_graph_batch(states)[0] == target


def test_global_set_encoding():
    env = GlobalSetEnvironment(zero_count_squared(), 4, episode_length=30, edge_colors=3)
    ell = env.flattened_length
    env.reset_batch(1)
    assert env.action_number == 3 * ell and env.state_length == 2 * ell and env.is_continuing
    for c in range(3):
        for i in range(ell):
            states, _, _ = env.step_batch(np.array([ell * c + i], dtype=np.int32))
            assert env.state_batch_to_graph_batch(states).flattened_row_major_colors[0, i] == c
            if env.step_count == 30:
                return


def test_global_flip_action_numbers_and_involution():
    assert GlobalFlipEnvironment(degree_square_sum, 4, episode_length=3).action_number == 12
    env = GlobalFlipEnvironment(degree_square_sum, 4, episode_length=3, flip_only=True)
    assert env.action_number == 6
    s0, _, _ = env.reset_batch(1)
    env.step_batch(np.array([4], dtype=np.int32))
    s2, _, status = env.step_batch(np.array([4], dtype=np.int32))
    assert np.array_equal(s0, s2)
    env2 = GlobalFlipEnvironment(degree_square_sum, 4, episode_length=2)
    env2.reset_batch(2)
    s, _, _ = env2.step_batch(np.array([1, 6 + 1], dtype=np.int32))
    assert s[:, 1].tolist() == [0, 1]


def test_zero_bits_decode_to_color_zero():
    env = GlobalSetEnvironment(degree_square_sum, 4, episode_length=1, edge_colors=3)
    g = env.state_batch_to_graph_batch(np.zeros((1, env.state_length), dtype=np.uint8))
    assert g[0] == monochromatic_graph(4, 0, edge_colors=3)


def test_local_masks_and_undirected_pair():
    env = LocalFlipEnvironment(degree_square_sum, 4, episode_length=3, starting_vertex=2)
    assert env.action_number == 8
    states, _, _ = env.reset_batch(1)
    assert states[0, -4:].tolist() == [0, 0, 1, 0]
    assert env.action_mask[0].tolist() == [True, True, False, True] * 2
    states, _, _ = env.step_batch(np.array([4 + 0], dtype=np.int32))  # move 2 -> 0, flip
    a = env.state_batch_to_graph_batch(states).adjacency_matrix_colors[0]
    assert a[0, 2] == a[2, 0] == 1 and a.sum() == 2
    with pytest.raises(ActionError):
        env.step_batch(np.array([0], dtype=np.int32))  # self-move is masked at vertex 0
    looped = LocalSetEnvironment(degree_square_sum, 3, episode_length=2, allow_loops=True)
    looped.reset_batch(2)
    assert looped.action_mask.all()


def test_local_flip_only_involution():
    env = LocalFlipEnvironment(degree_square_sum, 5, episode_length=4, flip_only=True)
    assert env.action_number == 5
    env.reset_batch(1)
    s1, _, _ = env.step_batch(np.array([3], dtype=np.int32))
    s2, _, _ = env.step_batch(np.array([0], dtype=np.int32))
    g = env.state_batch_to_graph_batch(s2)[0]
    assert g == monochromatic_graph(5, 0)


def test_action_errors():
    env = clockwise_build_env()
    with pytest.raises(EpisodeError):
        env.step_batch(np.zeros(4, dtype=np.int32))
    env.reset_batch(2)
    for bad in ([0, 4], [-1, 0], [0]):
        with pytest.raises(ActionError):
            env.step_batch(np.array(bad, dtype=np.int32))
    with pytest.raises(ValueError):
        env.reset_batch(0)


def test_malformed_state():
    env = GlobalSetEnvironment(degree_square_sum, 3, episode_length=1, edge_colors=3)
    bad = np.zeros((1, env.state_length), dtype=np.uint8)
    bad[0, 0] = bad[0, env.flattened_length] = 1  # two colors on slot 0
    with pytest.raises(MalformedStateError):
        env.state_batch_to_graph_batch(bad)
    local = directed_walk_env()
    s = np.zeros((1, local.state_length), dtype=np.uint8)
    s[0, -4:] = [1, 1, 0, 0]
    with pytest.raises(MalformedStateError):
        local.vertices(s)


def test_dense_difference_matches_full_and_reanchors():
    rng = np.random.default_rng(0)
    full = GlobalSetEnvironment(lookup("degree_square_sum"), 6, episode_length=20, edge_colors=2)
    delta = GlobalSetEnvironment(lookup("degree_square_sum"), 6, episode_length=20, edge_colors=2,
                                 graph_invariant_difference=lookup("degree_square_sum").delta)
    _, a, _ = full.reset_batch(5)
    _, b, _ = delta.reset_batch(5)
    assert np.array_equal(a, b)
    for t in range(20):
        actions = rng.integers(0, full.action_number, size=5).astype(np.int32)
        if t == 7:
            delta.graph_invariant_difference = None
        if t == 11:
            delta.graph_invariant_difference = lookup("degree_square_sum").delta
        _, a, _ = full.step_batch(actions)
        _, b, _ = delta.step_batch(actions)
        assert np.allclose(a, b, atol=1e-6)


def test_setting_switch_mid_episode():
    env = degree_flip_env()
    env.reset_batch(2)
    env.step_batch(np.array([0, 2], dtype=np.int32))
    env.sparse_setting = False
    _, scores, _ = env.step_batch(np.array([1, 7], dtype=np.int32))
    assert scores is not None and scores.shape == (2,)


def test_nonfinite_invariant_is_an_error():
    nan = InvariantFn("nan", lambda g: np.full(len(g), np.nan))
    env = LinearBuildEnvironment(nan, 3)
    with pytest.raises(ValueError):
        env.reset_batch(1)


def test_phi_is_pure_mid_episode():
    env1, env2 = clockwise_build_env(), clockwise_build_env()
    env1.reset_batch(4)
    env2.reset_batch(4)
    for actions in CLOCKWISE_BUILD_ACTIONS:
        s1, f1, _ = env1.step_batch(np.array(actions, dtype=np.int32))
        env1.state_batch_to_graph_batch(s1)
        s2, f2, _ = env2.step_batch(np.array(actions, dtype=np.int32))
        assert np.array_equal(s1, s2) and np.array_equal(f1, f2)


# -- generators -------------------------------------------------------------------


def test_fixed_generator():
    batch = fixed(monochromatic_graph(5, 1))(3)
    assert batch.batch_size == 3 and all(g == complete_graph(5) for g in batch)
    with pytest.raises(GeneratorError):
        fixed(Graph(2, adjacency_matrix_colors=[[0, 2], [2, 0]]))


def test_random_generators():
    a = uniform_random(3, 5, seed=4)(6)
    b = uniform_random(3, 5, seed=4)(6)
    assert a == b and a.edge_colors == 3
    assert bernoulli(6, 0.0, seed=1)(2).adjacency_matrix_colors.sum() == 0
    assert (bernoulli(6, 1.0, seed=1)(2).adjacency_matrix_colors == 1 - np.eye(6)).all()


def test_callback_generator_validates():
    good = from_callback(lambda b: fixed(complete_graph(4))(b), 2, 4)
    assert good(2).batch_size == 2
    wrong_order = from_callback(lambda b: fixed(complete_graph(5))(b), 2, 4)
    with pytest.raises(GeneratorError):
        wrong_order(2)
    env = GlobalSetEnvironment(degree_square_sum, 4, episode_length=1,
                               initial_graph_generator=lambda b: fixed(complete_graph(3))(b))
    with pytest.raises(GeneratorError):
        env.reset_batch(1)
