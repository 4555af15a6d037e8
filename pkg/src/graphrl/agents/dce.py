"""Deep cross-entropy agent."""

from __future__ import annotations

import math

import numpy as np

from graphrl.agents.base import GraphAgent, Rollout, flatten_steps
from graphrl.agents.policy import cross_entropy_loss


class DeepCrossEntropyAgent(GraphAgent):
    """Each generation plays ``batch_size`` episodes on a sparse environment.

    The best ``ceil(elite_fraction * batch_size)`` episodes, chosen from the
    new ones together with those carried over from the previous generation,
    train the policy with one optimizer step on the cross-entropy of their
    (state, action) pairs.  The best ``ceil(carry_fraction * batch_size)``
    are carried into the next generation's pool without being replayed.
    """

    def __init__(self, environment, policy_network=None, learning_rate: float = 0.003,
                 batch_size: int = 1000, elite_fraction: float = 0.07, carry_fraction: float = 0.06,
                 random_action_mechanism=None, seed=None):
        if not 0.0 < elite_fraction <= 1.0 or not 0.0 <= carry_fraction <= 1.0:
            raise ValueError("elite_fraction must lie in (0, 1] and carry_fraction in [0, 1]")
        if batch_size < 1:
            raise ValueError("batch_size must be positive")
        environment.sparse_setting = True
        super().__init__(environment, policy_network, learning_rate, random_action_mechanism, seed)
        self.batch_size = int(batch_size)
        self.elite_count = math.ceil(elite_fraction * batch_size)
        self.carry_count = math.ceil(carry_fraction * batch_size)
        self._carried: Rollout | None = None

    def _reset_extra(self) -> None:
        self._carried = None

    def step(self) -> None:
        self._require_reset()
        if not self.environment.sparse_setting:
            raise RuntimeError("the cross-entropy agent needs a sparse environment")
        fresh = self.rollout(self.batch_size)
        self.last_generation_scores = fresh.final_scores.copy()
        self._offer(fresh.final_scores, fresh.states[-1])

        pool = Rollout.concatenate([fresh, self._carried])
        order = np.argsort(-pool.final_scores, kind="stable")
        elite = pool.select(order[:self.elite_count])
        self._carried = pool.select(order[:self.carry_count]) if self.carry_count else None

        net = self.policy_network.train()
        states = flatten_steps(elite.states[:-1])
        logits = net.forward(states, self.rng)
        _, grad = cross_entropy_loss(logits, flatten_steps(elite.actions), flatten_steps(elite.masks))
        self.policy_optimizer.step(net.backward(grad))
        net.eval()
        self._step_count += 1
