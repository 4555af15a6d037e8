"""Batched graph-building environments: the shared reset/step machinery."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from graphrl.graphs import Graph
from graphrl.invariants import evaluate64


class EpisodeStatus(Enum):
    IN_PROGRESS = "in_progress"
    TERMINATED = "terminated"
    TRUNCATED = "truncated"


class EpisodeError(RuntimeError):
    """Raised on misuse: stepping a finished or uninitialized batch."""


class ActionError(ValueError):
    pass


@dataclass(frozen=True)
class CommunicationSetting:
    """Sparse: scores only after the final step.  Dense: after every step,
    optionally through a difference function."""

    sparse: bool = False
    difference: Callable[[Graph, Graph], np.ndarray] | None = None


def _difference64(fn, previous: Graph, current: Graph) -> np.ndarray:
    if hasattr(fn, "evaluate_difference"):
        return fn.evaluate_difference(previous, current)
    return np.asarray(fn(previous, current), dtype=np.float64).reshape(-1)


class GraphEnvironment(ABC):
    """Runs a batch of episodes in lockstep.

    Subclasses supply ``_initialize_batch``, ``_transition_batch`` and
    ``state_batch_to_graph_batch`` plus the six properties; scoring lives here.
    ``reset_batch`` and ``step_batch`` return ``(states, scores, status)``
    where ``scores`` is ``None`` whenever the setting withholds them.
    """

    def __init__(self, graph_invariant, graph_invariant_difference=None, sparse_setting: bool = False):
        if not callable(graph_invariant):
            raise TypeError("graph_invariant must be callable")
        self.graph_invariant = graph_invariant
        self._setting = CommunicationSetting(bool(sparse_setting), graph_invariant_difference)
        self._states: np.ndarray | None = None
        self._scores: np.ndarray | None = None  # float64, valid for self._states when set
        self._step = 0
        self._status = EpisodeStatus.IN_PROGRESS

    # -- configuration ------------------------------------------------------

    @property
    def setting(self) -> CommunicationSetting:
        return self._setting

    @setting.setter
    def setting(self, value: CommunicationSetting) -> None:
        if value.difference is not self._setting.difference:
            self._scores = None  # re-anchor with a full evaluation
        self._setting = value

    @property
    def sparse_setting(self) -> bool:
        return self._setting.sparse

    @sparse_setting.setter
    def sparse_setting(self, sparse: bool) -> None:
        self.setting = CommunicationSetting(bool(sparse), self._setting.difference)

    @property
    def graph_invariant_difference(self):
        return self._setting.difference

    @graph_invariant_difference.setter
    def graph_invariant_difference(self, fn) -> None:
        self.setting = CommunicationSetting(self._setting.sparse, fn)

    # -- subclass contract --------------------------------------------------

    @abstractmethod
    def _initialize_batch(self, batch_size: int) -> np.ndarray: ...

    @abstractmethod
    def _transition_batch(self, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        """Return the successor states; must not modify ``states``."""

    @abstractmethod
    def state_batch_to_graph_batch(self, states: np.ndarray) -> Graph: ...

    @property
    @abstractmethod
    def state_length(self) -> int: ...

    @property
    def state_dtype(self):
        return np.uint8

    @property
    @abstractmethod
    def action_number(self) -> int: ...

    @property
    @abstractmethod
    def action_mask(self) -> np.ndarray: ...

    @property
    @abstractmethod
    def episode_length(self) -> int: ...

    @property
    @abstractmethod
    def is_continuing(self) -> bool: ...

    # -- episode driving ----------------------------------------------------

    @property
    def batch_size(self) -> int | None:
        return None if self._states is None else self._states.shape[0]

    @property
    def step_count(self) -> int:
        """Steps taken in the current batch."""
        return self._step

    @property
    def status(self) -> EpisodeStatus:
        return self._status

    @property
    def states(self) -> np.ndarray:
        self._require_batch()
        return self._states.copy()

    def _require_batch(self) -> None:
        if self._states is None:
            raise EpisodeError("no batch initialized; call reset_batch first")

    def _score(self, states: np.ndarray) -> np.ndarray:
        scores = evaluate64(self.graph_invariant, self.state_batch_to_graph_batch(states))
        return self._check_scores(scores, states.shape[0])

    @staticmethod
    def _check_scores(scores: np.ndarray, batch_size: int) -> np.ndarray:
        if scores.shape != (batch_size,):
            raise ValueError(f"graph invariant returned shape {scores.shape}, expected ({batch_size},)")
        if not np.all(np.isfinite(scores)):
            raise ValueError("graph invariant returned a non-finite value")
        return scores

    def reset_batch(self, batch_size: int):
        if int(batch_size) != batch_size or batch_size < 1:
            raise ValueError(f"batch_size must be a positive integer, got {batch_size}")
        states = self._initialize_batch(int(batch_size))
        self._states = states
        self._step = 0
        self._status = EpisodeStatus.IN_PROGRESS
        self._scores = None
        scores = None
        if not self._setting.sparse:
            self._scores = self._score(states)
            scores = self._scores.astype(np.float32)
        return states.copy(), scores, self._status

    def _check_actions(self, actions) -> np.ndarray:
        actions = np.asarray(actions)
        if actions.shape != (self._states.shape[0],):
            raise ActionError(f"expected {self._states.shape[0]} actions, got shape {actions.shape}")
        if actions.dtype.kind not in "iu":
            raise ActionError(f"actions must be integers, got dtype {actions.dtype}")
        if actions.size and (actions.min() < 0 or actions.max() >= self.action_number):
            raise ActionError(f"actions must lie in 0..{self.action_number - 1}")
        actions = actions.astype(np.int64)
        mask = self.action_mask
        if not mask[np.arange(actions.shape[0]), actions].all():
            bad = np.flatnonzero(~mask[np.arange(actions.shape[0]), actions])
            raise ActionError(f"masked action in episode(s) {bad.tolist()}")
        return actions

    def _status_after(self, step: int) -> EpisodeStatus:
        if step < self.episode_length:
            return EpisodeStatus.IN_PROGRESS
        return EpisodeStatus.TRUNCATED if self.is_continuing else EpisodeStatus.TERMINATED

    def step_batch(self, actions):
        self._require_batch()
        if self._status is not EpisodeStatus.IN_PROGRESS:
            raise EpisodeError(f"batch already {self._status.value}; call reset_batch")
        actions = self._check_actions(actions)
        previous = self._states
        states = self._transition_batch(previous, actions)
        self._states = states
        self._step += 1
        self._status = self._status_after(self._step)

        scores = None
        setting = self._setting
        if not setting.sparse:
            if setting.difference is not None and self._scores is not None:
                delta = _difference64(setting.difference,
                                      self.state_batch_to_graph_batch(previous),
                                      self.state_batch_to_graph_batch(states))
                self._scores = self._scores + self._check_scores(delta, states.shape[0])
            else:
                self._scores = self._score(states)
            scores = self._scores.astype(np.float32)
        else:
            self._scores = None
            if self._status is not EpisodeStatus.IN_PROGRESS:
                scores = self._score(states).astype(np.float32)
        return states.copy(), scores, self._status
