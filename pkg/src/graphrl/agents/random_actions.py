"""Schedules for replacing policy actions with uniformly random ones."""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from graphrl.agents.policy import uniform_masked_sample


class RandomActionMechanism(ABC):
    @abstractmethod
    def probability(self, step_count: int) -> float:
        """Chance of a random action during learning iteration ``step_count``."""

    def apply(self, actions: np.ndarray, mask: np.ndarray, step_count: int,
              rng: np.random.Generator) -> np.ndarray:
        """Override some of ``actions`` with uniform draws over available actions.

        Draws nothing from ``rng`` when the probability is zero, so a zero
        schedule leaves the random stream untouched.
        """
        p = self.probability(step_count)
        if p <= 0.0:
            return actions
        replace = rng.random(actions.shape[0]) < p
        random_actions = uniform_masked_sample(mask, rng)
        return np.where(replace, random_actions, actions)


class ConstantProbability(RandomActionMechanism):
    def __init__(self, p: float = 0.0):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {p}")
        self.p = float(p)

    def probability(self, step_count: int) -> float:
        return self.p


class LinearDecay(RandomActionMechanism):
    """Straight line from ``start`` to ``end`` over ``steps`` iterations, then flat."""

    def __init__(self, start: float, end: float, steps: int):
        if not (0.0 <= start <= 1.0 and 0.0 <= end <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if steps < 1:
            raise ValueError("steps must be positive")
        self.start, self.end, self.steps = float(start), float(end), int(steps)

    def probability(self, step_count: int) -> float:
        frac = min(step_count / self.steps, 1.0)
        return self.start + (self.end - self.start) * frac


class ExponentialDecay(RandomActionMechanism):
    """``start * rate ** step_count``."""

    def __init__(self, start: float, rate: float):
        if not 0.0 <= start <= 1.0:
            raise ValueError("start must lie in [0, 1]")
        if not 0.0 < rate <= 1.0:
            raise ValueError("rate must lie in (0, 1]")
        self.start, self.rate = float(start), float(rate)

    def probability(self, step_count: int) -> float:
        return self.start * self.rate ** step_count
