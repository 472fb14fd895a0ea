"""Constructive transforms between games and lattices.

- vertex splitting and simplification (any convergent game becomes simple),
- synthesis of a game from a distributive lattice,
- games realizing an interval of a simple game's space,
- synthesis of a coloured game from any upper locally distributive lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coloured import ColouredCfg
from .engine import Cfg, ConfigSpace
from .lattice import Lattice, Poset
from .multigraph import ColouredMultigraph, Multigraph


@dataclass(frozen=True)
class SplitReport:
    """One splitting step: which vertex, with which chip surplus, at which round."""

    vertex: str
    surplus: int  # twice the total chips of the game that was split
    iteration: int


def _fresh_name(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "_"
    return name


def split_vertex(cfg: Cfg, a: int) -> Cfg:
    """Split vertex a into two alternating copies; the space stays isomorphic.

    The copies are tied together by enough parallel edges (and a chip surplus
    on the first copy) that they can only fire alternately; everything else is
    doubled so the rest of the game behaves as before.
    """
    g = cfg.graph
    if g.out_degree(a) == 0:
        raise ValueError(f"cannot split the sink {g.names[a]}")
    surplus = 2 * sum(cfg.init)
    taken = set(g.names)
    name0 = _fresh_name(g.names[a] + "_0", taken)
    name1 = _fresh_name(g.names[a] + "_1", taken)
    # copy 0 takes a's slot, copy 1 goes last
    names = tuple(
        name0 if v == a else g.names[v] for v in range(g.n)
    ) + (name1,)
    a0, a1 = a, g.n
    mult: dict[tuple[int, int], int] = {}

    def add(u, v, k):
        if k:
            mult[(u, v)] = mult.get((u, v), 0) + k

    for (u, v), k in g.mult.items():
        if u != a and v != a:
            add(u, v, 2 * k)
        elif u != a:  # edge into a: one copy to each half
            add(u, a0, k)
            add(u, a1, k)
        elif v != a:  # edge out of a: two copies from each half
            add(a0, v, 2 * k)
            add(a1, v, 2 * k)
        else:  # loop: one loop on each half
            add(a0, a0, k)
            add(a1, a1, k)
    # vertices that can never fire may make this negative; clamp, they stay inert
    tie = max(0, surplus - g.nonloop_out_degree(a))
    add(a0, a1, tie)
    add(a1, a0, tie)
    chips = [2 * c for c in cfg.init] + [cfg.init[a]]
    chips[a0] = cfg.init[a] + surplus
    return Cfg(Multigraph(names, mult), tuple(chips))


def simplify(cfg: Cfg, max_rounds: int = 1000, step_cap=None) -> tuple[Cfg, tuple[SplitReport, ...]]:
    """Split a most-fired vertex until every vertex fires at most once."""
    reports = []
    current = cfg
    for iteration in range(1, max_rounds + 1):
        counts = current.run_to_fixpoint(step_cap=step_cap).counts
        worst = max(counts, default=0)
        if worst <= 1:
            return current, tuple(reports)
        a = counts.index(worst)
        reports.append(
            SplitReport(current.graph.names[a], 2 * sum(current.init), iteration)
        )
        current = split_vertex(current, a)
    raise RuntimeError(f"not simple after {max_rounds} splitting rounds")


def _ideal_game_parts(poset: Poset):
    """Edges and chips of a game whose shot-sets are exactly the poset's ideals.

    Edges follow the cover relation upward; each vertex additionally drains
    its in/out imbalance to a sink (index poset.n). Chips make every vertex
    fire exactly once, after all its predecessors.
    """
    edges: dict[tuple[int, int], int] = {}
    bot = poset.n
    for lo, hi in poset.cover_pairs:
        edges[(lo, hi)] = 1
    chips = []
    for v in range(poset.n):
        d_out = len(poset.upper_covers(v))
        d_in = len(poset.lower_covers(v))
        if d_in > d_out:
            edges[(v, bot)] = d_in - d_out
        elif d_in == 0 and d_out == 0:
            edges[(v, bot)] = 1
        total_out = d_out + edges.get((v, bot), 0)
        chips.append(total_out - d_in)
    return edges, chips


def cfg_from_distributive(lattice: Lattice) -> Cfg:
    """A game whose configuration space is the given distributive lattice.

    Vertices are the meet-irreducibles plus a sink; every vertex fires exactly
    once, and the shot-sets are the ideals of the meet-irreducible order.
    """
    if not lattice.is_distributive:
        witness = lattice.distributivity_witness()
        if witness is None:
            detail = "irreducible counts differ"
        else:
            x, y, z = (lattice.labels[e] for e in witness)
            detail = f"witness triple ({x}, {y}, {z})"
        raise ValueError(f"lattice is not distributive: {detail}")
    poset = lattice.meet_irreducible_poset()
    edges, chips = _ideal_game_parts(poset)
    names = poset.labels + (_fresh_name("bot", set(poset.labels)),)
    return Cfg(Multigraph(names, edges), tuple(chips) + (0,))


def interval_cfg(cfg: Cfg, a: int, b: int, space: ConfigSpace | None = None) -> Cfg:
    """A game realizing the interval [a, b] of a simple game's space.

    Start from the configuration at a; vertices outside the shot-set of b
    lose their outgoing edges so they can never fire.
    """
    if not cfg.is_simple():
        raise ValueError("interval games need a simple game; simplify first")
    if len(cfg.graph.sinks()) != 1:
        raise ValueError("interval games need a unique sink")
    if space is None:
        space = cfg.enumerate_space()
    low, high = space.vectors[a], space.vectors[b]
    if any(x > y for x, y in zip(low, high)):
        raise ValueError("interval endpoints must satisfy a <= b")
    keep = space.shot_set(b)
    mult = {
        (u, v): k for (u, v), k in cfg.graph.mult.items() if u in keep
    }
    return Cfg(Multigraph(cfg.graph.names, mult), space.configs[a])


def coloured_ideal_game(lattice: Lattice) -> ColouredCfg:
    """A coloured game whose space is the full ideal lattice of the
    join-irreducible order.

    One colour per join-irreducible j: that colour carries a classical game
    realizing the ideals of the down-set of j, all sharing one vertex set.
    """
    if not lattice.is_uld:
        raise ValueError("the construction needs an upper locally distributive lattice")
    jp = lattice.join_irreducible_poset()
    names = jp.labels + (_fresh_name("bot", set(jp.labels)),)
    bot = jp.n
    layers: dict[int, dict[tuple[int, int], int]] = {}
    init: dict[int, tuple[int, ...]] = {}
    for pos in range(jp.n):
        colour = pos + 1
        down = [q for q in range(jp.n) if jp.le(q, pos)]
        sub = jp.restrict(down)
        edges, chips = _ideal_game_parts(sub)
        remap = {i: down[i] for i in range(len(down))}
        remap[len(down)] = bot
        layers[colour] = {
            (remap[u], remap[v]): k for (u, v), k in edges.items()
        }
        chip_vec = [0] * (jp.n + 1)
        for i, c in enumerate(chips):
            chip_vec[remap[i]] = c
        init[colour] = tuple(chip_vec)
    return ColouredCfg(ColouredMultigraph(names, layers), init)


def coloured_from_uld(lattice: Lattice) -> ColouredCfg:
    """A coloured game whose configuration space is the given ULD lattice.

    Contracts :func:`coloured_ideal_game` along the arrow partition of the
    join-irreducibles: partner-equivalent vertices merge, edge multiplicities
    between the merged classes add up, chips add up per colour.
    """
    partition = lattice.arrow_partition()
    expanded = coloured_ideal_game(lattice)
    j_pos = {j: pos for pos, j in enumerate(lattice.J)}
    classes = sorted(
        (tuple(sorted(j_pos[j] for j in members)) for members in partition.classes.values()),
    )
    old_bot = expanded.graph.n - 1
    target = {old_bot: len(classes)}
    names = []
    for ci, members in enumerate(classes):
        for pos in members:
            target[pos] = ci
        names.append("+".join(expanded.graph.names[pos] for pos in members))
    names.append(expanded.graph.names[old_bot])
    layers: dict[int, dict[tuple[int, int], int]] = {}
    init: dict[int, list[int]] = {}
    for colour in expanded.colours:
        layer: dict[tuple[int, int], int] = {}
        for (u, v), k in expanded.graph.layers[colour].items():
            key = (target[u], target[v])
            layer[key] = layer.get(key, 0) + k
        layers[colour] = layer
        chips = [0] * (len(classes) + 1)
        for v, c in enumerate(expanded.init[colour]):
            chips[target[v]] += c
        init[colour] = chips
    return ColouredCfg(
        ColouredMultigraph(tuple(names), layers),
        {c: tuple(v) for c, v in init.items()},
    )
