"""Replay the three hand-worked episodes and print the final graphs and scores."""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from test_environments import (  # noqa: E402
    CLOCKWISE_BUILD_ACTIONS,
    DEGREE_FLIP_ACTIONS,
    clockwise_build_env,
    degree_flip_env,
    directed_walk_env,
)


def replay(title, env, batch, actions):
    print(f"== {title}")
    env.reset_batch(batch)
    for step in actions:
        states, scores, _ = env.step_batch(np.array(step, dtype=np.int32))
        if scores is not None:  # sparse environments score only the final step
            print("scores", scores.tolist())
    for i, a in enumerate(env.state_batch_to_graph_batch(states).adjacency_matrix_colors):
        print(f"episode {i}\n{a}")
    print()


replay("linear build, clockwise order, 4 colors with loops", clockwise_build_env(), 4, CLOCKWISE_BUILD_ACTIONS)
replay("global flip from K5, degree-square sum", degree_flip_env(), 2, DEGREE_FLIP_ACTIONS)
replay("local set on a 3-colored digraph", directed_walk_env(), 1, [[6], [7], [4], [5], [7], [8]])
