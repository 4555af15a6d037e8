"""Policy-gradient agents: REINFORCE and PPO.

Both run a dense environment.  The reward for step ``t`` is the change in the
invariant caused by that step, measured from the value at reset, so the
undiscounted return from the start is the final value minus the initial
one.  Only the top ``top_fraction`` of episodes by final value are trained
on.
"""

from __future__ import annotations

import math

import numpy as np

from graphrl.agents.base import GraphAgent, Rollout, flatten_steps
from graphrl.agents.nn import Adam
from graphrl.agents.policy import discounted_returns, masked_log_probs, ppo_policy_loss, reinforce_loss, value_loss


class _DenseAgent(GraphAgent):
    def __init__(self, environment, policy_network=None, learning_rate: float = 0.003, batch_size: int = 256,
                 top_fraction: float = 0.25, gamma: float = 0.95, random_action_mechanism=None, seed=None):
        if not 0.0 < top_fraction <= 1.0:
            raise ValueError("top_fraction must lie in (0, 1]")
        if not 0.0 <= gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if batch_size < 1:
            raise ValueError("batch_size must be positive")
        environment.sparse_setting = False
        super().__init__(environment, policy_network, learning_rate, random_action_mechanism, seed)
        self.batch_size = int(batch_size)
        self.top_count = math.ceil(top_fraction * batch_size)
        self.gamma = float(gamma)

    def _play(self):
        if self.environment.sparse_setting:
            raise RuntimeError("policy-gradient agents need a dense environment")
        roll = self.rollout(self.batch_size)
        self.last_generation_scores = roll.final_scores.copy()
        self._offer(roll.scores, roll.states)
        rewards = np.diff(roll.scores, axis=0)  # (T, B)
        returns = discounted_returns(rewards.T, self.gamma).T  # (T, B)
        top = np.argsort(-roll.final_scores, kind="stable")[:self.top_count]
        return roll.select(top), returns[:, top]


class ReinforceAgent(_DenseAgent):
    """Vanilla REINFORCE with an optional per-step mean-return baseline."""

    def __init__(self, environment, policy_network=None, learning_rate: float = 0.003, batch_size: int = 256,
                 top_fraction: float = 0.25, gamma: float = 0.95, use_baseline: bool = True,
                 random_action_mechanism=None, seed=None):
        super().__init__(environment, policy_network, learning_rate, batch_size, top_fraction, gamma,
                         random_action_mechanism, seed)
        self.use_baseline = bool(use_baseline)

    def step(self) -> None:
        self._require_reset()
        chosen, returns = self._play()
        adv = returns - returns.mean(axis=1, keepdims=True) if self.use_baseline else returns
        net = self.policy_network.train()
        logits = net.forward(flatten_steps(chosen.states[:-1]), self.rng)
        _, grad = reinforce_loss(logits, flatten_steps(chosen.actions), adv.reshape(-1),
                                 flatten_steps(chosen.masks))
        self.policy_optimizer.step(net.backward(grad))
        net.eval()
        self._step_count += 1


class PPOAgent(_DenseAgent):
    """Clipped-surrogate PPO with a separate value network.

    Updates run the policy in eval mode, and the old log-probabilities are
    taken from the same parameters just before the first epoch, so every
    ratio starts at exactly 1.
    """

    def __init__(self, environment, policy_network=None, value_network=None, learning_rate: float = 0.003,
                 batch_size: int = 256, top_fraction: float = 0.25, gamma: float = 0.95, epochs: int = 4,
                 clip: float = 0.2, value_coef: float = 0.5, entropy_coef: float = 0.0,
                 random_action_mechanism=None, seed=None):
        super().__init__(environment, policy_network, learning_rate, batch_size, top_fraction, gamma,
                         random_action_mechanism, seed)
        if epochs < 1 or clip < 0.0 or value_coef < 0.0:
            raise ValueError("need epochs >= 1, clip >= 0 and value_coef >= 0")
        self.epochs, self.clip = int(epochs), float(clip)
        self.value_coef, self.entropy_coef = float(value_coef), float(entropy_coef)
        self.value_network = self._build_network(value_network, 1, 0.0)
        self.last_ratios: np.ndarray | None = None

    def _reset_extra(self) -> None:
        self.value_network.initialize(self.rng)
        self.value_optimizer = Adam(self.value_network.parameters(), lr=self.learning_rate)

    def step(self) -> None:
        self._require_reset()
        chosen, returns = self._play()
        x = flatten_steps(chosen.states[:-1])
        actions = flatten_steps(chosen.actions)
        masks = flatten_steps(chosen.masks)
        g = returns.reshape(-1)

        policy, value = self.policy_network.eval(), self.value_network.eval()
        rows = np.arange(len(actions))
        old_logp = masked_log_probs(policy.forward(x), masks)[rows, actions]
        adv = g - value.forward(x)[:, 0]
        adv = (adv - adv.mean()) / (adv.std() + 1e-8)

        for epoch in range(self.epochs):
            logits = policy.forward(x)
            _, grad, ratio = ppo_policy_loss(logits, actions, old_logp, adv, self.clip, masks, self.entropy_coef)
            if epoch == 0:
                self.last_ratios = ratio
            self.policy_optimizer.step(policy.backward(grad))
            _, vgrad = value_loss(value.forward(x), g)
            self.value_optimizer.step(value.backward(self.value_coef * vgrad))
        self._step_count += 1
