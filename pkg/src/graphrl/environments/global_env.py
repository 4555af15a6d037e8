"""Global games: any slot may be recolored (or flipped) at every step.

State: the color bits only.  Action ``a`` picks slot ``a mod l``; ``a // l``
is the new color (Set) or whether to flip (Flip).  With ``flip_only`` the
action is the slot itself and it is always flipped.
"""

from __future__ import annotations

import numpy as np

from graphrl.environments.slots import GeneratedSlotEnvironment
from graphrl.graphs import Graph


class _GlobalBase(GeneratedSlotEnvironment):
    def __init__(self, graph_invariant, graph_order: int, episode_length: int, **kwargs):
        super().__init__(graph_invariant, graph_order, **kwargs)
        if int(episode_length) != episode_length or episode_length < 1:
            raise ValueError(f"episode_length must be a positive integer, got {episode_length}")
        self._episode_length = int(episode_length)

    @property
    def state_length(self) -> int:
        return self.color_bits

    @property
    def episode_length(self) -> int:
        return self._episode_length

    @property
    def is_continuing(self) -> bool:
        return True

    @property
    def action_mask(self) -> np.ndarray:
        self._require_batch()
        return np.ones((self._states.shape[0], self.action_number), dtype=bool)

    def _initialize_batch(self, batch_size: int) -> np.ndarray:
        return self.encode_colors(self._initial_colors(batch_size))

    def state_batch_to_graph_batch(self, states) -> Graph:
        states = self._check_states(states)
        return self.graphs_from_colors(self.decode_colors(states))


class GlobalSetEnvironment(_GlobalBase):
    @property
    def action_number(self) -> int:
        return self.edge_colors * self.flattened_length

    def _transition_batch(self, states, actions):
        ell = self.flattened_length
        rows = np.arange(states.shape[0])
        slot, color = actions % ell, actions // ell
        out = states.copy()
        out[rows[:, None], slot[:, None] + ell * np.arange(self.edge_colors - 1)[None, :]] = 0
        colored = color > 0
        out[rows[colored], (color[colored] - 1) * ell + slot[colored]] = 1
        return out


class GlobalFlipEnvironment(_GlobalBase):
    def __init__(self, graph_invariant, graph_order: int, episode_length: int, flip_only: bool = False, **kwargs):
        if kwargs.pop("edge_colors", 2) != 2:
            raise ValueError("flip environments use exactly two edge colors")
        super().__init__(graph_invariant, graph_order, episode_length, edge_colors=2, **kwargs)
        self.flip_only = bool(flip_only)

    @property
    def action_number(self) -> int:
        return self.flattened_length if self.flip_only else 2 * self.flattened_length

    def _transition_batch(self, states, actions):
        ell = self.flattened_length
        rows = np.arange(states.shape[0])
        if self.flip_only:
            slot, flip = actions, np.ones_like(actions)
        else:
            slot, flip = actions % ell, actions // ell
        out = states.copy()
        out[rows, slot] ^= flip.astype(np.uint8)
        return out
