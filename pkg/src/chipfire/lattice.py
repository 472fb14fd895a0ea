"""Finite posets and lattices: irreducibles, codings, detectors, constructions.

Orders are stored as boolean ``leq`` matrices on elements 0..n-1. Lattices
verify totality of join and meet at construction time and cache the tables.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import CapExceeded, DetectorDisagreement, NotALatticeError


class Poset:
    """Finite partial order given by its full ``leq`` relation."""

    def __init__(self, leq, labels=None, _checked=False):
        leq = np.array(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise ValueError("leq must be a square matrix")
        n = leq.shape[0]
        if labels is None:
            labels = tuple(f"e{i}" for i in range(n))
        labels = tuple(str(x) for x in labels)
        if len(labels) != n or len(set(labels)) != n:
            raise ValueError("labels must be unique and match the element count")
        if not _checked:
            if not leq.diagonal().all():
                raise ValueError("order is not reflexive")
            if (leq & leq.T).sum() != n:
                raise ValueError("order is not antisymmetric")
            if ((leq @ leq) & ~leq).any():
                raise ValueError("order is not transitive")
        leq.flags.writeable = False
        self.leq = leq
        self.n = n
        self.labels = labels

    @classmethod
    def from_covers(cls, n, covers, labels=None, **kwargs):
        """Build from cover pairs (lower, upper); rejects cyclic input."""
        up = [[] for _ in range(n)]
        indeg = [0] * n
        for lo, hi in covers:
            if not (0 <= lo < n and 0 <= hi < n) or lo == hi:
                raise ValueError(f"bad cover pair ({lo},{hi})")
            up[lo].append(hi)
            indeg[hi] += 1
        order = deque(v for v in range(n) if indeg[v] == 0)
        topo = []
        while order:
            v = order.popleft()
            topo.append(v)
            for w in up[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    order.append(w)
        if len(topo) != n:
            raise ValueError("cover relation contains a cycle")
        leq = np.eye(n, dtype=bool)
        for v in reversed(topo):
            for w in up[v]:
                leq[v] |= leq[w]
        return cls(leq, labels=labels, _checked=True, **kwargs)

    def le(self, x, y) -> bool:
        return bool(self.leq[x, y])

    def lt(self, x, y) -> bool:
        return x != y and bool(self.leq[x, y])

    @cached_property
    def _cover_matrix(self) -> np.ndarray:
        strict = self.leq & ~np.eye(self.n, dtype=bool)
        return strict & ~(strict @ strict)

    @cached_property
    def cover_pairs(self) -> tuple[tuple[int, int], ...]:
        los, his = np.nonzero(self._cover_matrix)
        return tuple(sorted(zip(los.tolist(), his.tolist())))

    @cached_property
    def _upper_covers(self) -> tuple[tuple[int, ...], ...]:
        ups = [[] for _ in range(self.n)]
        for lo, hi in self.cover_pairs:
            ups[lo].append(hi)
        return tuple(tuple(u) for u in ups)

    @cached_property
    def _lower_covers(self) -> tuple[tuple[int, ...], ...]:
        downs = [[] for _ in range(self.n)]
        for lo, hi in self.cover_pairs:
            downs[hi].append(lo)
        return tuple(tuple(d) for d in downs)

    def upper_covers(self, x) -> tuple[int, ...]:
        return self._upper_covers[x]

    def lower_covers(self, x) -> tuple[int, ...]:
        return self._lower_covers[x]

    @cached_property
    def minimal_elements(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n) if not self._lower_covers[x])

    @cached_property
    def maximal_elements(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n) if not self._upper_covers[x])

    @cached_property
    def topo_order(self) -> tuple[int, ...]:
        """Elements sorted by down-set size; a linear extension."""
        below = self.leq.sum(axis=0)
        return tuple(sorted(range(self.n), key=lambda x: (below[x], x)))

    def restrict(self, elements: Iterable[int]) -> "Poset":
        """Induced suborder, keeping labels; elements in ascending index order."""
        keep = sorted(set(elements))
        sub = self.leq[np.ix_(keep, keep)]
        return Poset(sub, labels=tuple(self.labels[x] for x in keep), _checked=True)

    @cached_property
    def _down_masks(self) -> tuple[int, ...]:
        """Bitmask of {y : y <= x} for each x."""
        masks = []
        for x in range(self.n):
            m = 0
            for y in np.nonzero(self.leq[:, x])[0]:
                m |= 1 << int(y)
            masks.append(m)
        return tuple(masks)

    def ideal_masks(self, cap=None) -> list[int]:
        """All down-closed subsets as bitmasks, sorted by (size, value)."""
        down = self._down_masks
        n = self.n
        seen = {0}
        queue = deque([0])
        while queue:
            ideal = queue.popleft()
            for x in range(n):
                bit = 1 << x
                if not ideal & bit and down[x] & ~ideal == bit:
                    nxt = ideal | bit
                    if nxt not in seen:
                        seen.add(nxt)
                        if cap is not None and len(seen) > cap:
                            raise CapExceeded(f"ideal family exceeds cap {cap}")
                        queue.append(nxt)
        return sorted(seen, key=lambda m: (bin(m).count("1"), m))

    def ideals(self, cap=None) -> "IdealFamily":
        members = tuple(
            frozenset(i for i in range(self.n) if m >> i & 1)
            for m in self.ideal_masks(cap)
        )
        return IdealFamily(self, members)

    def __repr__(self):
        return f"{type(self).__name__}({self.n} elements)"


@dataclass(frozen=True)
class IdealFamily:
    """The down-closed subsets of a ground poset."""

    poset: Poset
    members: tuple[frozenset[int], ...]

    def __len__(self):
        return len(self.members)


def _subset_label(labels, members) -> str:
    return "{" + ",".join(labels[x] for x in sorted(members)) + "}"


class Lattice(Poset):
    """Bounded lattice; construction verifies every pair has a join and a meet.

    ``cover_labels`` optionally annotates cover edges (e.g. with the vertex
    fired along a configuration-space edge).
    """

    def __init__(self, leq, labels=None, cover_labels=None, _checked=False):
        super().__init__(leq, labels=labels, _checked=_checked)
        self.cover_labels = dict(cover_labels) if cover_labels else {}
        self._build_tables()

    def _witness_pair(self, i, j, rows, kind):
        common = np.nonzero(rows[i] & rows[j])[0]
        li, lj = self.labels[i], self.labels[j]
        if len(common) == 0:
            raise NotALatticeError(f"not a lattice: {li} and {lj} have no common {kind} bound")
        extreme = [
            int(a) for a in common
            if not any(a != b and rows[b][a] for b in common)
        ]
        word = "minimal" if kind == "upper" else "maximal"
        names = ", ".join(self.labels[a] for a in extreme[:4])
        raise NotALatticeError(
            f"not a lattice: {li} and {lj} have {len(extreme)} {word} common "
            f"{kind} bounds ({names})"
        )

    def _build_tables(self):
        n = self.n
        if n == 0:
            raise NotALatticeError("not a lattice: empty element set")
        up = np.packbits(self.leq, axis=1)
        down = np.packbits(self.leq.T, axis=1)
        row_of = {up[i].tobytes(): i for i in range(n)}
        col_of = {down[i].tobytes(): i for i in range(n)}
        joins = np.empty((n, n), dtype=np.int32)
        meets = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            ui, di = up[i], down[i]
            for j in range(i, n):
                k = row_of.get((ui & up[j]).tobytes())
                if k is None:
                    self._witness_pair(i, j, self.leq, "upper")
                joins[i, j] = joins[j, i] = k
                k = col_of.get((di & down[j]).tobytes())
                if k is None:
                    self._witness_pair(i, j, self.leq.T, "lower")
                meets[i, j] = meets[j, i] = k
        joins.flags.writeable = False
        meets.flags.writeable = False
        self.join_table = joins
        self.meet_table = meets
        self.bottom = int(np.nonzero(self.leq.sum(axis=1) == n)[0][0])
        self.top = int(np.nonzero(self.leq.sum(axis=0) == n)[0][0])

    def join(self, x, y) -> int:
        return int(self.join_table[x, y])

    def meet(self, x, y) -> int:
        return int(self.meet_table[x, y])

    def restrict(self, elements):
        # restricting a lattice generally yields only a poset
        return Poset.restrict(self, elements)

    # irreducibles and codings

    @cached_property
    def J(self) -> tuple[int, ...]:
        """Join-irreducibles: elements with exactly one lower cover."""
        return tuple(x for x in range(self.n) if len(self.lower_covers(x)) == 1)

    @cached_property
    def M(self) -> tuple[int, ...]:
        """Meet-irreducibles: elements with exactly one upper cover."""
        return tuple(x for x in range(self.n) if len(self.upper_covers(x)) == 1)

    def j_lower(self, j) -> int:
        """The unique lower cover of a join-irreducible."""
        (lo,) = self.lower_covers(j)
        return lo

    def m_upper(self, m) -> int:
        """The unique upper cover of a meet-irreducible."""
        (hi,) = self.upper_covers(m)
        return hi

    def ji_below(self, x) -> frozenset[int]:
        """Join-irreducibles below-or-equal x; x is their join."""
        return frozenset(j for j in self.J if self.leq[j, x])

    def mi_above(self, x) -> frozenset[int]:
        """Meet-irreducibles above-or-equal x; x is their meet."""
        return frozenset(m for m in self.M if self.leq[x, m])

    @cached_property
    def _mx_masks(self) -> tuple[int, ...]:
        """mi_above as bitmask over positions in M, for each element."""
        pos = {m: i for i, m in enumerate(self.M)}
        masks = []
        for x in range(self.n):
            mask = 0
            for m in self.M:
                if self.leq[x, m]:
                    mask |= 1 << pos[m]
            masks.append(mask)
        return tuple(masks)

    def le_by_coding(self, x, y) -> bool:
        """Order test through the irreducible codings; both must agree with leq."""
        by_j = self.ji_below(x) <= self.ji_below(y)
        by_m = self.mi_above(y) <= self.mi_above(x)
        if by_j != by_m or by_j != self.le(x, y):
            raise RuntimeError(f"coding disagreement on ({x},{y})")
        return by_j

    # rank structure

    @cached_property
    def _rank_info(self) -> tuple[bool, int, tuple[int, ...]]:
        """(is_ranked, height, longest-path rank per element)."""
        rank = [0] * self.n
        ranked = True
        for x in self.topo_order:
            lows = self.lower_covers(x)
            if not lows:
                continue
            values = {rank[c] for c in lows}
            if len(values) > 1:
                ranked = False
            rank[x] = max(values) + 1
        return ranked, rank[self.top], tuple(rank)

    @property
    def is_ranked(self) -> bool:
        return self._rank_info[0]

    @property
    def height(self) -> int:
        """Common chain length if ranked, else the longest chain length."""
        return self._rank_info[1]

    # distributivity

    def distributivity_witness(self):
        """A triple (x, y, z) with x∧(y∨z) != (x∧y)∨(x∧z), or None."""
        jt, mt = self.join_table, self.meet_table
        for x in range(self.n):
            lhs = mt[x][jt]
            rhs = jt[np.ix_(mt[x], mt[x])]
            bad = np.nonzero(lhs != rhs)
            if bad[0].size:
                return (x, int(bad[0][0]), int(bad[1][0]))
        return None

    @cached_property
    def is_distributive(self) -> bool:
        if len(self.J) != len(self.M):
            return False
        return self.distributivity_witness() is None

    # upper local distributivity, two detectors

    def _hypercube_witness(self):
        """Element whose cover interval is not a hypercube, or None."""
        jt = self.join_table
        for x in range(self.n):
            ups = self.upper_covers(x)
            k = len(ups)
            if k <= 1:
                continue
            joins = [x] * (1 << k)
            for s in range(1, 1 << k):
                b = (s & -s).bit_length() - 1
                joins[s] = int(jt[joins[s & (s - 1)], ups[b]])
            if len(set(joins)) != 1 << k:
                return x
            top = joins[-1]
            size = int(np.count_nonzero(self.leq[x] & self.leq[:, top]))
            if size != 1 << k:
                return x
        return None

    def _cover_step_witness(self):
        """Cover that removes != 1 meet-irreducible, or None."""
        masks = self._mx_masks
        for lo, hi in self.cover_pairs:
            if bin(masks[lo] & ~masks[hi]).count("1") != 1:
                return (lo, hi)
        return None

    @cached_property
    def uld_detectors(self) -> tuple[bool, bool]:
        """(hypercube-interval verdict, cover-step verdict); must agree."""
        return (self._hypercube_witness() is None, self._cover_step_witness() is None)

    @cached_property
    def is_uld(self) -> bool:
        by_cube, by_step = self.uld_detectors
        if by_cube != by_step:
            raise DetectorDisagreement(
                f"local-distributivity detectors disagree: hypercube={by_cube} "
                f"(witness {self._hypercube_witness()}), cover-step={by_step} "
                f"(witness {self._cover_step_witness()})"
            )
        return by_cube

    def edge_labels(self) -> dict[tuple[int, int], int]:
        """Map each cover (x, y) to the unique meet-irreducible leaving mi_above."""
        if not self.is_uld:
            raise ValueError("edge labelling requires an upper locally distributive lattice")
        masks = self._mx_masks
        out = {}
        for lo, hi in self.cover_pairs:
            diff = masks[lo] & ~masks[hi]
            out[(lo, hi)] = self.M[diff.bit_length() - 1]
        return out

    # arrow relations and the induced partition of J

    @cached_property
    def arrow_relations(self) -> "ArrowRelations":
        down, up = set(), set()
        for j in self.J:
            j_lo = self.j_lower(j)
            for m in self.M:
                if self.leq[j, m]:
                    continue
                if self.leq[j_lo, m]:
                    down.add((j, m))
                if self.leq[j, self.m_upper(m)]:
                    up.add((j, m))
        return ArrowRelations(frozenset(down), frozenset(up), frozenset(down & up))

    def arrow_partition(self) -> "ArrowPartition":
        """Partition of J by the unique up-down arrow partner in M."""
        if not self.is_uld:
            raise ValueError("the arrow partition requires an upper locally distributive lattice")
        updown = self.arrow_relations.updown
        partner = {}
        for j in self.J:
            ms = [m for m in self.M if (j, m) in updown]
            if len(ms) != 1:
                raise RuntimeError(f"join-irreducible {j} has {len(ms)} up-down partners")
            partner[j] = ms[0]
        classes = {
            m: frozenset(j for j in self.J if partner[j] == m) for m in self.M
        }
        if any(not members for members in classes.values()):
            raise RuntimeError("empty arrow class: some meet-irreducible labels no cover")
        return ArrowPartition(partner, classes)

    # derived orders and constructions

    def meet_irreducible_poset(self) -> Poset:
        """The order induced on the meet-irreducibles."""
        return Poset.restrict(self, self.M)

    def join_irreducible_poset(self) -> Poset:
        """The order induced on the join-irreducibles."""
        return Poset.restrict(self, self.J)

    def interval(self, a, b) -> "Lattice":
        """The sublattice {x : a <= x <= b}."""
        if not self.le(a, b):
            raise ValueError(
                f"interval requires {self.labels[a]} <= {self.labels[b]}"
            )
        keep = [x for x in range(self.n) if self.leq[a, x] and self.leq[x, b]]
        pos = {x: i for i, x in enumerate(keep)}
        sub_labels = tuple(self.labels[x] for x in keep)
        sub_cover_labels = {
            (pos[lo], pos[hi]): lab
            for (lo, hi), lab in self.cover_labels.items()
            if lo in pos and hi in pos
        }
        return Lattice(
            self.leq[np.ix_(keep, keep)],
            labels=sub_labels,
            cover_labels=sub_cover_labels,
            _checked=True,
        )

    def ideal_quotient(self, cap=None) -> "Lattice":
        """Ideals of the join-irreducible order, grouped by the arrow partition.

        Two ideals are grouped when each element of the symmetric difference
        has a partner-equivalent element on the other side; each group keeps
        its unique maximal member. The result is isomorphic to the lattice.
        """
        partition = self.arrow_partition()
        jp = self.join_irreducible_poset()
        m_pos = {m: i for i, m in enumerate(self.M)}
        partner_bit = [1 << m_pos[partition.partner[j]] for j in self.J]
        groups: dict[int, int] = {}
        for mask in jp.ideal_masks(cap):
            key = 0
            bits = mask
            while bits:
                low = bits & -bits
                key |= partner_bit[low.bit_length() - 1]
                bits ^= low
            groups[key] = groups.get(key, 0) | mask
        reps = sorted(groups.values(), key=lambda m: (bin(m).count("1"), m))
        if len(set(reps)) != len(reps):
            raise RuntimeError("distinct ideal groups produced the same representative")
        nq = len(reps)
        leq = np.zeros((nq, nq), dtype=bool)
        for i in range(nq):
            for k in range(nq):
                leq[i, k] = reps[i] | reps[k] == reps[k]
        labels = tuple(
            _subset_label(jp.labels, [b for b in range(jp.n) if rep >> b & 1])
            for rep in reps
        )
        return Lattice(leq, labels=labels, _checked=True)

    # stock shapes

    @classmethod
    def chain(cls, n_elements: int) -> "Lattice":
        leq = np.triu(np.ones((n_elements, n_elements), dtype=bool))
        return cls(leq, _checked=True)

    @classmethod
    def boolean(cls, dim: int) -> "Lattice":
        n = 1 << dim
        masks = np.arange(n)
        leq = (masks[:, None] & ~masks[None, :]) == 0
        letters = [chr(ord("a") + i) for i in range(dim)]
        labels = tuple(
            _subset_label(letters, [b for b in range(dim) if m >> b & 1])
            for m in masks
        )
        return cls(leq, labels=labels, _checked=True)


@dataclass(frozen=True)
class ArrowRelations:
    """The down/up arrow relations between join- and meet-irreducibles."""

    down: frozenset[tuple[int, int]]
    up: frozenset[tuple[int, int]]
    updown: frozenset[tuple[int, int]]


@dataclass(frozen=True)
class ArrowPartition:
    """Each join-irreducible's unique up-down partner, and the classes per partner."""

    partner: Mapping[int, int]
    classes: Mapping[int, frozenset[int]]

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.classes.values()), reverse=True))


@dataclass(frozen=True)
class ArrowWitnessReport:
    """Existence of arrow witnesses below/above every element.

    ``down_ok``: every (x, m) with x not<= m admits j <= x with j down-arrow m.
    ``updown_ok``: in the locally distributive case the witness can be chosen
    with j up-down m; None when the lattice is not ULD.
    ``up_ok``: the dual clause, checked under the symmetric reading
    (for every j and x with j not<= x there is m >= x with j up-arrow m);
    the reading is interpretive, hence reported as a separate flag.
    """

    down_ok: bool
    updown_ok: bool | None
    up_ok: bool
    failures: tuple[tuple[str, int, int], ...]

    @property
    def passed(self) -> bool:
        return self.down_ok and self.up_ok and self.updown_ok is not False


def arrow_witness_report(lattice: Lattice) -> ArrowWitnessReport:
    arrows = lattice.arrow_relations
    uld = lattice.is_uld
    failures = []
    down_ok = True
    updown_ok = True if uld else None
    for m in lattice.M:
        for x in range(lattice.n):
            if lattice.le(x, m):
                continue
            witnesses = [j for j in lattice.J if lattice.le(j, x) and (j, m) in arrows.down]
            if not witnesses:
                down_ok = False
                failures.append(("down", x, m))
            elif uld and not any((j, m) in arrows.updown for j in witnesses):
                updown_ok = False
                failures.append(("updown", x, m))
    up_ok = True
    for j in lattice.J:
        for x in range(lattice.n):
            if lattice.le(j, x):
                continue
            if not any(lattice.le(x, m) and (j, m) in arrows.up for m in lattice.M):
                up_ok = False
                failures.append(("up", j, x))
    return ArrowWitnessReport(down_ok, updown_ok, up_ok, tuple(failures))


def ideal_lattice(poset: Poset, cap=None) -> Lattice:
    """The lattice of all ideals of a poset ordered by inclusion.

    This is the Birkhoff representation: the result is distributive, and
    every distributive lattice arises this way from its meet-irreducibles.
    """
    masks = poset.ideal_masks(cap)
    n = len(masks)
    leq = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for k in range(n):
            leq[i, k] = masks[i] | masks[k] == masks[k]
    labels = tuple(
        _subset_label(poset.labels, [b for b in range(poset.n) if m >> b & 1])
        for m in masks
    )
    return Lattice(leq, labels=labels, _checked=True)


def _base_invariants(lattice: Lattice) -> list[tuple]:
    ranks = lattice._rank_info[2]
    j_set, m_set = set(lattice.J), set(lattice.M)
    return [
        (
            len(lattice.upper_covers(x)),
            len(lattice.lower_covers(x)),
            x in j_set,
            x in m_set,
            ranks[x],
            len(lattice.ji_below(x)),
            len(lattice.mi_above(x)),
        )
        for x in range(lattice.n)
    ]


def _refine_pair(a: Lattice, b: Lattice) -> tuple[list[int], list[int]]:
    """Joint neighbourhood refinement with a shared palette, so that colours
    are comparable across the two lattices."""
    palette: dict = {}
    ca = [palette.setdefault(s, len(palette)) for s in _base_invariants(a)]
    cb = [palette.setdefault(s, len(palette)) for s in _base_invariants(b)]

    def signatures(lattice, colour):
        return [
            (
                colour[x],
                tuple(sorted(colour[y] for y in lattice.upper_covers(x))),
                tuple(sorted(colour[y] for y in lattice.lower_covers(x))),
            )
            for x in range(lattice.n)
        ]

    for _ in range(max(a.n, b.n)):
        palette = {}
        na = [palette.setdefault(s, len(palette)) for s in signatures(a, ca)]
        nb = [palette.setdefault(s, len(palette)) for s in signatures(b, cb)]
        if len(set(na) | set(nb)) == len(set(ca) | set(cb)):
            return na, nb
        ca, cb = na, nb
    return ca, cb


def find_isomorphism(a: Lattice, b: Lattice, cap: int = 5000):
    """An order-isomorphism a -> b as an index list, or None.

    Backtracking over colour classes produced by invariant refinement
    (rank, degrees, irreducibility, coding sizes, iterated neighbourhoods).
    """
    if a.n != b.n:
        return None
    if a.n > cap or b.n > cap:
        raise CapExceeded(f"isomorphism search capped at {cap} elements")
    n = a.n
    if n == 0:
        return []
    ca, cb = _refine_pair(a, b)
    if sorted(ca) != sorted(cb):
        return None
    by_colour: dict[int, list[int]] = {}
    for y in range(n):
        by_colour.setdefault(cb[y], []).append(y)
    class_size = {c: len(v) for c, v in by_colour.items()}
    order = sorted(range(n), key=lambda x: (class_size.get(ca[x], 0), ca[x], x))
    mapping = [-1] * n
    used = [False] * n
    assigned: list[int] = []
    choice_stack: list[list[int]] = []

    def candidates(x):
        out = []
        for y in by_colour.get(ca[x], ()):
            if used[y]:
                continue
            img = [mapping[z] for z in assigned]
            if np.array_equal(a.leq[x, assigned], b.leq[y, img]) and np.array_equal(
                a.leq[assigned, x], b.leq[img, y]
            ):
                out.append(y)
        return out

    depth = 0
    choice_stack.append(candidates(order[0]))
    while True:
        if choice_stack[depth]:
            x = order[depth]
            y = choice_stack[depth].pop()
            mapping[x] = y
            used[y] = True
            assigned.append(x)
            depth += 1
            if depth == n:
                perm = np.array(mapping)
                if np.array_equal(a.leq, b.leq[np.ix_(perm, perm)]):
                    return mapping
                # spurious full assignment: undo and continue
                assigned.pop()
                used[y] = False
                mapping[x] = -1
                depth -= 1
                continue
            choice_stack.append(candidates(order[depth]))
        else:
            choice_stack.pop()
            depth -= 1
            if depth < 0:
                return None
            x = order[depth]
            used[mapping[x]] = False
            mapping[x] = -1
            assigned.pop()


def is_isomorphic(a: Lattice, b: Lattice, cap: int = 5000) -> bool:
    return find_isomorphism(a, b, cap=cap) is not None
