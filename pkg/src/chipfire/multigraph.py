"""Directed multigraphs with edge multiplicities, loop counts and colour layers.

Edges are stored as multiplicity counts per ordered vertex pair rather than as
edge lists; the dynamics only ever need counts, and the splitting transform
creates large bundles of parallel edges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping


def _as_edge_dict(mult, n):
    out = {}
    for (u, v), k in mult.items():
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for {n} vertices")
        k = int(k)
        if k < 0:
            raise ValueError(f"negative multiplicity on edge ({u},{v})")
        if k:
            out[(u, v)] = k
    return out


@dataclass(frozen=True)
class Multigraph:
    """Directed multigraph on vertices 0..n-1 with display names.

    Immutable after construction; all queries are pure.
    """

    names: tuple[str, ...]
    mult: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        names = tuple(str(x) for x in self.names)
        if len(set(names)) != len(names):
            raise ValueError("vertex names must be unique")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "mult", _as_edge_dict(self.mult, len(names)))

    @classmethod
    def from_edges(cls, names, edges: Iterable[tuple[str, str, int]]):
        """Build from (source name, target name, multiplicity) triples; repeats add up."""
        names = tuple(str(x) for x in names)
        index = {x: i for i, x in enumerate(names)}
        mult: dict[tuple[int, int], int] = {}
        for u, v, k in edges:
            key = (index[str(u)], index[str(v)])
            mult[key] = mult.get(key, 0) + int(k)
        return cls(names, mult)

    @property
    def n(self) -> int:
        return len(self.names)

    def vertex(self, name: str) -> int:
        try:
            return self._index[str(name)]
        except KeyError:
            raise ValueError(f"unknown vertex {name!r}") from None

    @cached_property
    def _index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.names)}

    def _check(self, v: int) -> int:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise ValueError(f"unknown vertex id {v!r}")
        return v

    def multiplicity(self, u: int, v: int) -> int:
        return self.mult.get((self._check(u), self._check(v)), 0)

    @cached_property
    def _out_adj(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, sorted (target, multiplicity) pairs."""
        adj = [[] for _ in range(self.n)]
        for (u, v), k in self.mult.items():
            adj[u].append((v, k))
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def _out_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for (u, _), k in self.mult.items():
            deg[u] += k
        return tuple(deg)

    @cached_property
    def _in_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for (_, v), k in self.mult.items():
            deg[v] += k
        return tuple(deg)

    def out_degree(self, v: int) -> int:
        """Total multiplicity of edges leaving v; loops count once per loop edge."""
        return self._out_degrees[self._check(v)]

    def in_degree(self, v: int) -> int:
        return self._in_degrees[self._check(v)]

    def loops(self, v: int) -> int:
        return self.multiplicity(v, v)

    def nonloop_out_degree(self, v: int) -> int:
        return self.out_degree(v) - self.loops(v)

    @property
    def total_multiplicity(self) -> int:
        return sum(self.mult.values())

    def successors(self, v: int) -> tuple[int, ...]:
        return tuple(w for w, _ in self._out_adj[self._check(v)])

    def sinks(self) -> frozenset[int]:
        """Vertices with no outgoing edges."""
        return frozenset(v for v in range(self.n) if self._out_degrees[v] == 0)

    @cached_property
    def _reverse_adj(self) -> tuple[tuple[int, ...], ...]:
        adj = [set() for _ in range(self.n)]
        for (u, v) in self.mult:
            adj[v].add(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def _reachable_to(self, targets: Iterable[int]) -> frozenset[int]:
        """Vertices with a directed path into the target set (targets included)."""
        seen = set(targets)
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for u in self._reverse_adj[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return frozenset(seen)

    def sink_reachable_from_all(self) -> bool:
        """True iff a single sink is reachable from every vertex."""
        return any(len(self._reachable_to([s])) == self.n for s in self.sinks())

    def drain_set(self) -> frozenset[int]:
        """Vertices from which some sink is reachable."""
        return self._reachable_to(self.sinks())

    def induced_subgraph(self, vertices: Iterable[int]) -> "Multigraph":
        """Subgraph on the given vertices, keeping edges with both endpoints inside."""
        keep = sorted(self._check(v) for v in set(vertices))
        remap = {v: i for i, v in enumerate(keep)}
        mult = {
            (remap[u], remap[v]): k
            for (u, v), k in self.mult.items()
            if u in remap and v in remap
        }
        return Multigraph(tuple(self.names[v] for v in keep), mult)

    def __repr__(self):
        return f"Multigraph({list(self.names)}, {len(self.mult)} edge bundles)"


@dataclass(frozen=True)
class ColouredMultigraph:
    """Directed multigraph whose edges carry a colour; one edge layer per colour."""

    names: tuple[str, ...]
    layers: Mapping[int, Mapping[tuple[int, int], int]] = field(default_factory=dict)

    def __post_init__(self):
        names = tuple(str(x) for x in self.names)
        if len(set(names)) != len(names):
            raise ValueError("vertex names must be unique")
        layers = {
            int(c): _as_edge_dict(edges, len(names))
            for c, edges in self.layers.items()
        }
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "layers", layers)

    @classmethod
    def from_edges(cls, names, edges: Iterable[tuple[str, str, int, int]]):
        """Build from (source, target, multiplicity, colour) tuples."""
        names = tuple(str(x) for x in names)
        index = {x: i for i, x in enumerate(names)}
        layers: dict[int, dict[tuple[int, int], int]] = {}
        for u, v, k, c in edges:
            layer = layers.setdefault(int(c), {})
            key = (index[str(u)], index[str(v)])
            layer[key] = layer.get(key, 0) + int(k)
        return cls(names, layers)

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def colours(self) -> tuple[int, ...]:
        return tuple(sorted(self.layers))

    def vertex(self, name: str) -> int:
        try:
            return self.names.index(str(name))
        except ValueError:
            raise ValueError(f"unknown vertex {name!r}") from None

    def restriction_to_colour(self, c: int) -> Multigraph:
        """The classical multigraph carrying only the colour-c edges."""
        if c not in self.layers:
            raise ValueError(f"unknown colour {c!r}")
        return self._restrictions[c]

    @cached_property
    def _restrictions(self) -> dict[int, Multigraph]:
        return {c: Multigraph(self.names, edges) for c, edges in self.layers.items()}

    def pair_multiplicity(self, u: int, v: int) -> int:
        """Total multiplicity of (u, v) summed over all colours."""
        return sum(edges.get((u, v), 0) for edges in self.layers.values())

    def __repr__(self):
        return f"ColouredMultigraph({list(self.names)}, colours={list(self.colours)})"
