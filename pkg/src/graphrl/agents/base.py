"""Agent interface and the batched rollout loop shared by all agents.

Random draws come from one generator per agent, in this order at every
environment step: one uniform per episode for the policy sample, then (only
when the random-action probability is positive) one uniform per episode for
the override decision and one per episode for the random action.  Dropout
masks during training are drawn after the rollout.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from graphrl.agents.nn import Adam, Network
from graphrl.agents.policy import masked_sample
from graphrl.agents.random_actions import ConstantProbability, RandomActionMechanism
from graphrl.environments import EpisodeStatus, GraphEnvironment
from graphrl.graphs import Graph

DEFAULT_HIDDEN = (72, 12)
DEFAULT_DROPOUT = 0.2


@dataclass
class Rollout:
    """One batch of episodes.

    ``states`` has shape ``(T + 1, B, L)``; ``actions``
    ``(T, B)``; ``masks`` ``(T, B, q)``.  ``scores`` is ``(T + 1, B)`` for a
    dense environment and ``(1, B)`` (final values only) for a sparse one.
    """

    states: np.ndarray
    actions: np.ndarray
    masks: np.ndarray
    scores: np.ndarray

    @property
    def final_scores(self) -> np.ndarray:
        return self.scores[-1]

    def select(self, index) -> "Rollout":
        return Rollout(self.states[:, index], self.actions[:, index], self.masks[:, index],
                       self.scores[:, index])

    @staticmethod
    def concatenate(parts: Sequence["Rollout"]) -> "Rollout":
        parts = [p for p in parts if p is not None]
        return Rollout(np.concatenate([p.states for p in parts], axis=1),
                       np.concatenate([p.actions for p in parts], axis=1),
                       np.concatenate([p.masks for p in parts], axis=1),
                       np.concatenate([p.scores for p in parts], axis=1))


def flatten_steps(array: np.ndarray) -> np.ndarray:
    """``(T, B, ...)`` to ``(T * B, ...)``."""
    return array.reshape((-1,) + array.shape[2:])


class GraphAgent(ABC):
    """Learns to play an environment's graph-building game.

    ``policy_network`` may be a ``Network`` or a list of hidden sizes; its
    input and output widths must match the environment.
    """

    def __init__(self, environment: GraphEnvironment, policy_network=None, learning_rate: float = 0.003,
                 random_action_mechanism: RandomActionMechanism | None = None, seed=None):
        self.environment = environment
        self.learning_rate = float(learning_rate)
        self.random_action_mechanism = random_action_mechanism or ConstantProbability(0.0)
        self.rng = np.random.default_rng(seed)
        self.policy_network = self._build_network(policy_network, environment.action_number, DEFAULT_DROPOUT)
        self._step_count = 0
        self._best_score = -math.inf
        self._best_graph: Graph | None = None
        self.last_generation_scores: np.ndarray | None = None

    def _build_network(self, spec, outputs: int, dropout: float) -> Network:
        inputs = self.environment.state_length
        if isinstance(spec, Network):
            net = spec
        else:
            hidden = DEFAULT_HIDDEN if spec is None else tuple(spec)
            net = Network.from_sizes((inputs, *hidden, outputs), dropout=dropout, rng=self.rng)
        if net.input_size != inputs or net.output_size != outputs:
            raise ValueError(
                f"network maps {net.input_size} -> {net.output_size}, environment needs {inputs} -> {outputs}"
            )
        return net

    # -- contract -----------------------------------------------------------

    def reset(self, seed=None) -> None:
        """Reinitialize networks, optimizers and counters.

        With ``seed`` the agent's generator is reseeded first; otherwise the
        new weights come from the continuing stream.
        """
        if seed is not None:
            self.rng = np.random.default_rng(seed)
        self.policy_network.initialize(self.rng)
        self.policy_optimizer = Adam(self.policy_network.parameters(), lr=self.learning_rate)
        self._step_count = 0
        self._best_score = -math.inf
        self._best_graph = None
        self.last_generation_scores = None
        self._reset_extra()

    def _reset_extra(self) -> None:
        pass

    @abstractmethod
    def step(self) -> None:
        """Run one learning iteration."""

    @property
    def step_count(self) -> int:
        return self._step_count

    @property
    def best_score(self) -> float:
        return self._best_score

    @property
    def best_graph(self) -> Graph:
        if self._best_graph is None:
            raise RuntimeError("no graph has been generated yet")
        return self._best_graph

    # -- helpers ------------------------------------------------------------

    def _require_reset(self) -> None:
        if not hasattr(self, "policy_optimizer"):
            raise RuntimeError("call reset() before step()")

    def rollout(self, batch_size: int) -> Rollout:
        """Play one batch of episodes with the current policy in eval mode.

        The policy is evaluated in single precision here; training passes
        recompute everything they need in double precision.
        """
        env = self.environment
        predict = self.policy_network.predictor()
        states, scores, status = env.reset_batch(batch_size)
        all_states, all_actions, all_masks, all_scores = [states], [], [], []
        if scores is not None:
            all_scores.append(scores)
        while status is EpisodeStatus.IN_PROGRESS:
            mask = env.action_mask
            actions = masked_sample(predict(states), mask, self.rng)
            actions = self.random_action_mechanism.apply(actions, mask, self._step_count, self.rng)
            states, scores, status = env.step_batch(actions.astype(np.int32))
            all_states.append(states)
            all_actions.append(actions)
            all_masks.append(mask)
            if scores is not None:
                all_scores.append(scores)
        return Rollout(np.stack(all_states), np.stack(all_actions), np.stack(all_masks),
                       np.stack(all_scores).astype(np.float64))

    def _offer(self, scores: np.ndarray, states: np.ndarray) -> None:
        """Update the best graph from ``scores`` of same-shaped ``states[..., L]``."""
        flat = scores.reshape(-1)
        i = int(np.argmax(flat))
        if flat[i] > self._best_score:
            state = states.reshape(-1, states.shape[-1])[i]
            self._best_score = float(flat[i])
            self._best_graph = self.environment.state_batch_to_graph_batch(state[None])[0]
