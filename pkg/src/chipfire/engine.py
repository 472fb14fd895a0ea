"""Classical chip-firing dynamics: firing, fixpoint execution, space enumeration.

A vertex holding at least its out-degree in chips may fire, sending one chip
along each outgoing edge. Loops return their chips to the firing vertex but
still count toward the firing threshold.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping

from .errors import StateCapExceeded, StepCapExceeded
from .multigraph import Multigraph

Configuration = tuple  # chips per vertex, indexed like the graph


def _chooser(policy, rng) -> Callable[[frozenset[int]], int]:
    if policy == "min":
        return min
    if policy == "max":
        return max
    if policy == "random":
        r = rng if rng is not None else random.Random(0)
        return lambda fs: r.choice(sorted(fs))
    if callable(policy):
        return policy
    raise ValueError(f"unknown firing policy {policy!r}")


@dataclass(frozen=True)
class FixpointRun:
    """Result of playing a game to its fixed point."""

    final: tuple[int, ...]
    counts: tuple[int, ...]

    @property
    def steps(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class Cfg:
    """A chip-firing game: support graph plus initial chip configuration."""

    graph: Multigraph
    init: tuple[int, ...]

    def __post_init__(self):
        init = tuple(int(c) for c in self.init)
        if len(init) != self.graph.n:
            raise ValueError("initial configuration must cover every vertex")
        if any(c < 0 for c in init):
            raise ValueError("chip counts must be non-negative")
        object.__setattr__(self, "init", init)

    @property
    def converges_guaranteed(self) -> bool:
        """True when every vertex can drain to a sink, which forces convergence."""
        return len(self.graph.drain_set()) == self.graph.n

    def _require_guard(self, cap, what):
        if cap is None and not self.converges_guaranteed:
            raise ValueError(
                f"{what} needs a cap: no sink is reachable from every vertex, "
                "so convergence is not guaranteed"
            )

    def firable(self, conf) -> frozenset[int]:
        """Vertices holding at least their (positive) out-degree in chips."""
        deg = self.graph._out_degrees
        return frozenset(v for v in range(self.graph.n) if 0 < deg[v] <= conf[v])

    def fire(self, conf, v: int) -> tuple[int, ...]:
        """Send one chip along each edge out of v; v must be firable."""
        if v not in self.firable(conf):
            raise ValueError(f"vertex {self.graph.names[v]} is not firable")
        nxt = list(conf)
        nxt[v] -= self.graph.out_degree(v)
        for w, k in self.graph._out_adj[v]:
            nxt[w] += k
        return tuple(nxt)

    def run_to_fixpoint(
        self, policy="min", step_cap=None, rng=None, on_fire=None
    ) -> FixpointRun:
        """Fire under the given policy until nothing is firable.

        The final configuration and the per-vertex firing counts are
        independent of the policy (strong convergence).
        """
        self._require_guard(step_cap, "run_to_fixpoint")
        choose = _chooser(policy, rng)
        conf = self.init
        counts = [0] * self.graph.n
        steps = 0
        while True:
            fs = self.firable(conf)
            if not fs:
                return FixpointRun(conf, tuple(counts))
            if step_cap is not None and steps >= step_cap:
                raise StepCapExceeded(
                    f"possibly divergent: no fixpoint within step cap {step_cap}"
                )
            v = choose(fs)
            conf = self.fire(conf, v)
            counts[v] += 1
            steps += 1
            if on_fire is not None:
                on_fire(v, conf)

    def is_simple(self, step_cap=None) -> bool:
        """True when no vertex fires more than once on the way to the fixpoint."""
        return max(self.run_to_fixpoint(step_cap=step_cap).counts, default=0) <= 1

    def enumerate_space(self, state_cap=None) -> "ConfigSpace":
        """Breadth-first closure of every reachable configuration.

        States are keyed by configuration; the firing-count vector is stored
        and cross-checked on revisits (equal configurations reached from the
        same start must have fired the same multiset of vertices).
        """
        self._require_guard(state_cap, "enumerate_space")
        n = self.graph.n
        vectors: dict[tuple[int, ...], tuple[int, ...]] = {self.init: (0,) * n}
        transitions: list[tuple[tuple[int, ...], int, tuple[int, ...]]] = []
        queue = deque([self.init])
        while queue:
            conf = queue.popleft()
            vec = vectors[conf]
            for v in sorted(self.firable(conf)):
                nxt = self.fire(conf, v)
                nvec = tuple(
                    c + 1 if i == v else c for i, c in enumerate(vec)
                )
                known = vectors.get(nxt)
                if known is None:
                    vectors[nxt] = nvec
                    if state_cap is not None and len(vectors) > state_cap:
                        raise StateCapExceeded(
                            f"state space exceeds cap {state_cap}"
                        )
                    queue.append(nxt)
                elif known != nvec:
                    raise RuntimeError(
                        "revisited configuration with a different firing vector"
                    )
                transitions.append((conf, v, nxt))
        order = sorted(vectors, key=lambda c: (sum(vectors[c]), vectors[c]))
        index = {conf: i for i, conf in enumerate(order)}
        covers = tuple(
            sorted((index[a], index[b], v) for a, v, b in transitions)
        )
        return ConfigSpace(
            game=self,
            names=self.graph.names,
            vectors=tuple(vectors[c] for c in order),
            configs=tuple(order),
            covers=covers,
        )


@dataclass(frozen=True)
class ConfigSpace:
    """All reachable states of a game, ordered by how much has been fired.

    Elements are in canonical order: by total firings, then lexicographically
    by firing-count vector. Element 0 is the initial state; covers are
    labelled by the fired (or opened) vertex.
    """

    game: object
    names: tuple[str, ...]
    vectors: tuple[tuple[int, ...], ...]
    configs: tuple
    covers: tuple[tuple[int, int, int], ...]

    def __len__(self):
        return len(self.vectors)

    @cached_property
    def _index(self) -> Mapping[tuple[int, ...], int]:
        return {vec: i for i, vec in enumerate(self.vectors)}

    @property
    def bottom(self) -> int:
        return 0

    @cached_property
    def top(self) -> int:
        """The unique state with no outgoing cover."""
        has_up = {lo for lo, _, _ in self.covers}
        tops = [i for i in range(len(self.vectors)) if i not in has_up]
        if len(tops) != 1:
            raise RuntimeError(f"expected a unique maximal state, found {len(tops)}")
        return tops[0]

    @property
    def height(self) -> int:
        return sum(self.vectors[self.top])

    @cached_property
    def is_simple_space(self) -> bool:
        return all(c <= 1 for vec in self.vectors for c in vec)

    def shot_set(self, i) -> frozenset[int]:
        """Vertices fired at least once to reach element i."""
        return frozenset(v for v, c in enumerate(self.vectors[i]) if c)

    def shot_label(self, i) -> str:
        vec = self.vectors[i]
        if self.is_simple_space:
            inner = ",".join(self.names[v] for v, c in enumerate(vec) if c)
        else:
            inner = ",".join(
                f"{self.names[v]}:{c}" for v, c in enumerate(vec) if c
            )
        return "{" + inner + "}"

    def join_of(self, a: int, b: int) -> int:
        """The element whose firing vector is the componentwise union of a and b."""
        union = tuple(map(max, self.vectors[a], self.vectors[b]))
        try:
            return self._index[union]
        except KeyError:
            raise RuntimeError(
                "shot-set union is not a reachable state; "
                "the space is not union-closed"
            ) from None

    def lattice(self):
        """The space as a verified lattice, labelled by shot-sets."""
        return self._lattice

    @cached_property
    def _lattice(self):
        from .lattice import Lattice

        labels = tuple(self.shot_label(i) for i in range(len(self.vectors)))
        cover_labels = {(lo, hi): self.names[v] for lo, hi, v in self.covers}
        return Lattice.from_covers(
            len(self.vectors),
            [(lo, hi) for lo, hi, _ in self.covers],
            labels=labels,
            cover_labels=cover_labels,
        )
