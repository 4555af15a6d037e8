"""Local games: an agent walks the graph and recolors what it traverses.

State: color bits, then an ``n``-bit one-hot for the agent's vertex.  Action
``a`` moves to vertex ``a mod n``; ``a // n`` is the new color (Set) or the
flip bit (Flip).  Undirected games recolor the pair, directed ones the arc
leaving the current vertex.  Without loops a move to the current vertex is
masked out.
"""

from __future__ import annotations

import numpy as np

from graphrl.environments.slots import GeneratedSlotEnvironment
from graphrl.graphs import Graph, position_table


class _LocalBase(GeneratedSlotEnvironment):
    def __init__(self, graph_invariant, graph_order: int, episode_length: int,
                 starting_vertex: int = 0, **kwargs):
        super().__init__(graph_invariant, graph_order, **kwargs)
        if int(episode_length) != episode_length or episode_length < 1:
            raise ValueError(f"episode_length must be a positive integer, got {episode_length}")
        if int(starting_vertex) != starting_vertex or not 0 <= starting_vertex < self.graph_order:
            raise ValueError(f"starting_vertex must lie in 0..{self.graph_order - 1}, got {starting_vertex}")
        self._episode_length = int(episode_length)
        self.starting_vertex = int(starting_vertex)
        table = np.array(position_table(self.graph_order, self.kind, self.flattened_ordering))
        if not self.is_directed:
            table = np.maximum(table, table.T)
        self._slot_of = table

    @property
    def state_length(self) -> int:
        return self.color_bits + self.graph_order

    @property
    def episode_length(self) -> int:
        return self._episode_length

    @property
    def is_continuing(self) -> bool:
        return True

    @property
    def _blocks(self) -> int:
        return self.action_number // self.graph_order

    def vertices(self, states) -> np.ndarray:
        states = self._check_states(states)
        return self._one_hot_index(states[:, self.color_bits:], allow_empty=False)

    @property
    def action_mask(self) -> np.ndarray:
        self._require_batch()
        batch = self._states.shape[0]
        mask = np.ones((batch, self.action_number), dtype=bool)
        if not self.allow_loops:
            here = self.vertices(self._states)
            cols = here[:, None] + self.graph_order * np.arange(self._blocks)[None, :]
            mask[np.arange(batch)[:, None], cols] = False
        return mask

    def _initialize_batch(self, batch_size: int) -> np.ndarray:
        states = np.zeros((batch_size, self.state_length), dtype=np.uint8)
        states[:, :self.color_bits] = self.encode_colors(self._initial_colors(batch_size))
        states[:, self.color_bits + self.starting_vertex] = 1
        return states

    def _move(self, states, actions):
        """Copy of ``states`` with the agent moved; also the traversed slots."""
        n = self.graph_order
        rows = np.arange(states.shape[0])
        here = self.vertices(states)
        dest = actions % n
        slot = self._slot_of[here, dest]
        if np.any(slot < 0):
            raise ValueError("move along a slot that does not exist (loop without allow_loops)")
        out = states.copy()
        out[rows, self.color_bits + here] = 0
        out[rows, self.color_bits + dest] = 1
        return out, rows, slot

    def state_batch_to_graph_batch(self, states) -> Graph:
        states = self._check_states(states)
        self.vertices(states)
        return self.graphs_from_colors(self.decode_colors(states[:, :self.color_bits]))


class LocalSetEnvironment(_LocalBase):
    @property
    def action_number(self) -> int:
        return self.edge_colors * self.graph_order

    def _transition_batch(self, states, actions):
        ell = self.flattened_length
        out, rows, slot = self._move(states, actions)
        color = actions // self.graph_order
        out[rows[:, None], slot[:, None] + ell * np.arange(self.edge_colors - 1)[None, :]] = 0
        colored = color > 0
        out[rows[colored], (color[colored] - 1) * ell + slot[colored]] = 1
        return out


class LocalFlipEnvironment(_LocalBase):
    def __init__(self, graph_invariant, graph_order: int, episode_length: int, flip_only: bool = False, **kwargs):
        if kwargs.pop("edge_colors", 2) != 2:
            raise ValueError("flip environments use exactly two edge colors")
        self.flip_only = bool(flip_only)
        super().__init__(graph_invariant, graph_order, episode_length, edge_colors=2, **kwargs)

    @property
    def action_number(self) -> int:
        return self.graph_order if self.flip_only else 2 * self.graph_order

    def _transition_batch(self, states, actions):
        out, rows, slot = self._move(states, actions)
        flip = np.ones_like(actions) if self.flip_only else actions // self.graph_order
        out[rows, slot] ^= flip.astype(np.uint8)
        return out
