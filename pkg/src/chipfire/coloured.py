"""Coloured chip-firing games: opening closed vertices, per-colour stabilization.

Vertices start closed. A closed vertex may be opened when some colour gives it
at least as many chips of that colour as it has outgoing edges of that colour
(and at least one such edge). Opening then stabilizes every colour's classical
game over the open vertices; closed vertices absorb chips but never fire.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .engine import Cfg, ConfigSpace
from .errors import StateCapExceeded, StepCapExceeded
from .multigraph import ColouredMultigraph

_STABILIZE_CAP = 1_000_000  # defensive; per-colour convergence is checked up front


@dataclass(frozen=True)
class ColouredState:
    """Per-colour chip counts plus the set of open vertices."""

    chips: tuple[tuple[int, ...], ...]  # indexed like the graph's colour order
    opened: frozenset[int]


@dataclass(frozen=True)
class ColouredCfg:
    """A coloured game: coloured support graph plus per-colour initial chips."""

    graph: ColouredMultigraph
    init: Mapping[int, tuple[int, ...]]

    def __post_init__(self):
        n = self.graph.n
        init = {}
        for c, chips in self.init.items():
            c = int(c)
            if c not in self.graph.layers:
                raise ValueError(f"chips of colour {c} but no such colour in the graph")
            chips = tuple(int(x) for x in chips)
            if len(chips) != n or any(x < 0 for x in chips):
                raise ValueError(f"bad chip vector for colour {c}")
            init[c] = chips
        for c in self.graph.colours:
            init.setdefault(c, (0,) * n)
            restriction = self.graph.restriction_to_colour(c)
            if len(restriction.drain_set()) != n:
                raise ValueError(
                    f"colour {c} restriction is not a convergent game: "
                    "some vertex cannot drain to a sink"
                )
        object.__setattr__(self, "init", init)

    @property
    def colours(self) -> tuple[int, ...]:
        return self.graph.colours

    def initial_state(self) -> ColouredState:
        return ColouredState(
            chips=tuple(self.init[c] for c in self.colours),
            opened=frozenset(),
        )

    def openable(self, state: ColouredState) -> frozenset[int]:
        """Closed vertices firable in at least one colour restriction."""
        out = set()
        for ci, c in enumerate(self.colours):
            deg = self.graph.restriction_to_colour(c)._out_degrees
            chips = state.chips[ci]
            for v in range(self.graph.n):
                if v not in state.opened and 0 < deg[v] <= chips[v]:
                    out.add(v)
        return frozenset(out)

    def _stabilize_colour(self, c, chips, opened):
        """Play colour c on the open vertices; closed vertices absorb chips."""
        restriction = self.graph.restriction_to_colour(c)
        deg = restriction._out_degrees
        chips = list(chips)
        steps = 0
        while True:
            firable = [v for v in opened if 0 < deg[v] <= chips[v]]
            if not firable:
                return tuple(chips)
            v = min(firable)
            chips[v] -= deg[v]
            for w, k in restriction._out_adj[v]:
                chips[w] += k
            steps += 1
            if steps > _STABILIZE_CAP:
                raise StepCapExceeded(
                    f"colour {c} did not stabilize within {_STABILIZE_CAP} firings"
                )

    def open_vertex(self, state: ColouredState, v: int) -> ColouredState:
        """Open v, then stabilize each colour in ascending colour order."""
        if v in state.opened:
            raise ValueError(f"vertex {self.graph.names[v]} is already open")
        if v not in self.openable(state):
            raise ValueError(f"vertex {self.graph.names[v]} cannot be opened")
        opened = state.opened | {v}
        chips = tuple(
            self._stabilize_colour(c, state.chips[ci], opened)
            for ci, c in enumerate(self.colours)
        )
        return ColouredState(chips=chips, opened=opened)

    def enumerate_space(self, state_cap=None) -> ConfigSpace:
        """Breadth-first closure over open-sets; chip state is cross-checked.

        Opening order does not matter: states are keyed by the open-set and a
        revisit with different chips would be reported.
        """
        n = self.graph.n
        start = self.initial_state()
        seen: dict[frozenset[int], ColouredState] = {start.opened: start}
        transitions = []
        queue = deque([start.opened])
        while queue:
            opened = queue.popleft()
            state = seen[opened]
            for v in sorted(self.openable(state)):
                nxt = self.open_vertex(state, v)
                known = seen.get(nxt.opened)
                if known is None:
                    seen[nxt.opened] = nxt
                    if state_cap is not None and len(seen) > state_cap:
                        raise StateCapExceeded(f"state space exceeds cap {state_cap}")
                    queue.append(nxt.opened)
                elif known.chips != nxt.chips:
                    raise RuntimeError(
                        "same open-set reached with different chip contents"
                    )
                transitions.append((opened, v, nxt.opened))
        def vec(opened):
            return tuple(1 if v in opened else 0 for v in range(n))
        order = sorted(seen, key=lambda o: (len(o), vec(o)))
        index = {o: i for i, o in enumerate(order)}
        covers = tuple(sorted((index[a], index[b], v) for a, v, b in transitions))
        return ConfigSpace(
            game=self,
            names=self.graph.names,
            vectors=tuple(vec(o) for o in order),
            configs=tuple(seen[o].chips for o in order),
            covers=covers,
        )


def from_classical(cfg: Cfg) -> ColouredCfg:
    """View a simple convergent game as a one-colour coloured game."""
    if not cfg.converges_guaranteed:
        raise ValueError("the game must be convergent")
    if not cfg.is_simple():
        raise ValueError("the game is not simple; simplify it first")
    graph = ColouredMultigraph(cfg.graph.names, {1: dict(cfg.graph.mult)})
    return ColouredCfg(graph, {1: cfg.init})
