"""Linear games: slots are visited once each, in flattened order.

State: color bits, then an ``l``-bit one-hot marking the next slot.  The
one-hot block is all zero once every slot has been visited.
"""

from __future__ import annotations

import numpy as np

from graphrl.environments.slots import GeneratedSlotEnvironment, MalformedStateError, SlotEnvironment
from graphrl.graphs import Graph


class _LinearMixin:
    """Shared state layout and bookkeeping for the three linear games."""

    @property
    def state_length(self) -> int:
        return self.edge_colors * self.flattened_length

    @property
    def episode_length(self) -> int:
        return self.flattened_length

    @property
    def is_continuing(self) -> bool:
        return False

    @property
    def action_mask(self) -> np.ndarray:
        self._require_batch()
        return np.ones((self._states.shape[0], self.action_number), dtype=bool)

    def positions(self, states) -> np.ndarray:
        """Next slot per state, ``l`` for terminal states."""
        states = self._check_states(states)
        return self._one_hot_index(states[:, self.color_bits:], allow_empty=True)

    def _initial_states(self, colors: np.ndarray | None, batch_size: int) -> np.ndarray:
        states = np.zeros((batch_size, self.state_length), dtype=np.uint8)
        if colors is not None:
            states[:, :self.color_bits] = self.encode_colors(colors)
        states[:, self.color_bits] = 1
        return states

    def _recolor(self, states: np.ndarray, new_colors: np.ndarray) -> np.ndarray:
        """Give the current slot of every state ``new_colors`` and advance."""
        ell = self.flattened_length
        rows = np.arange(states.shape[0])
        pos = self.positions(states)
        if np.any(pos >= ell):
            raise MalformedStateError("cannot step a terminal state")
        out = states.copy()
        out[rows[:, None], pos[:, None] + ell * np.arange(self.edge_colors - 1)[None, :]] = 0
        colored = new_colors > 0
        out[rows[colored], (new_colors[colored].astype(np.int64) - 1) * ell + pos[colored]] = 1
        out[rows, self.color_bits + pos] = 0
        nxt = pos + 1
        more = nxt < ell
        out[rows[more], self.color_bits + nxt[more]] = 1
        return out

    def _current_colors(self, states: np.ndarray) -> np.ndarray:
        return self.decode_colors(states[:, :self.color_bits])


class LinearBuildEnvironment(_LinearMixin, SlotEnvironment):
    """Slots start uncolored and receive a color each, in order.  Action = color."""

    @property
    def action_number(self) -> int:
        return self.edge_colors

    def _initialize_batch(self, batch_size: int) -> np.ndarray:
        return self._initial_states(None, batch_size)

    def _transition_batch(self, states, actions):
        return self._recolor(states, actions)

    def state_batch_to_graph_batch(self, states) -> Graph:
        states = self._check_states(states)
        pos = self.positions(states)
        colors = self._current_colors(states)
        pending = np.arange(self.flattened_length)[None, :] >= pos[:, None]
        if np.any(colors[pending] != 0):
            raise MalformedStateError("color bits set on a slot that has not been visited yet")
        colors[pending] = self.edge_colors
        return self.graphs_from_colors(colors)


class LinearSetEnvironment(_LinearMixin, GeneratedSlotEnvironment):
    """Slots start fully colored by the generator and are recolored in order."""

    @property
    def action_number(self) -> int:
        return self.edge_colors

    def _initialize_batch(self, batch_size: int) -> np.ndarray:
        return self._initial_states(self._initial_colors(batch_size), batch_size)

    def _transition_batch(self, states, actions):
        return self._recolor(states, actions)

    def state_batch_to_graph_batch(self, states) -> Graph:
        states = self._check_states(states)
        return self.graphs_from_colors(self._current_colors(states))


class LinearFlipEnvironment(LinearSetEnvironment):
    """Two colors; action 1 flips the current slot, action 0 keeps it."""

    def __init__(self, graph_invariant, graph_order: int, **kwargs):
        if kwargs.pop("edge_colors", 2) != 2:
            raise ValueError("flip environments use exactly two edge colors")
        super().__init__(graph_invariant, graph_order, edge_colors=2, **kwargs)

    @property
    def action_number(self) -> int:
        return 2

    def _transition_batch(self, states, actions):
        rows = np.arange(states.shape[0])
        pos = self.positions(states)
        if np.any(pos >= self.flattened_length):
            raise MalformedStateError("cannot step a terminal state")
        current = states[rows, pos]
        return self._recolor(states, current ^ actions.astype(np.uint8))
