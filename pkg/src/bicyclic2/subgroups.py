"""Subgroup lattice enumeration and conjugacy classes of subgroups.

Layered cyclic extension: every subgroup of order 2^(k+1) of a 2-group is
<H, g> for some already-found H of order 2^k and g in N_G(H) \\ H with
g^2 in H, so enumerating by layers is complete.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import BudgetExceeded, GroupTable, SubgroupRef
from .invariants import normalizer

DEFAULT_BUDGET = 50000


@dataclass
class SubgroupLattice:
    group: GroupTable
    by_order: dict                      # order -> list of SubgroupRef
    classes: list = field(default=None)  # list of lists of SubgroupRef

    @property
    def subgroups(self):
        out = []
        for k in sorted(self.by_order):
            out.extend(self.by_order[k])
        return out

    def count(self):
        return sum(len(v) for v in self.by_order.values())

    def class_reps(self):
        """Lexicographically least member of each conjugacy class."""
        return [cls[0] for cls in self.classes]


def all_subgroups(G, budget=DEFAULT_BUDGET) -> SubgroupLattice:
    """Enumerate every subgroup of G, grouped by order.

    Raises BudgetExceeded once more than `budget` subgroups are found.
    """
    by_order = {1: [SubgroupRef(G, (G.identity,))]}
    total = 1
    layer = [frozenset((G.identity,))]
    order = 1
    while order < G.order:
        seen = set()
        nxt = []
        for hset in layer:
            H = SubgroupRef(G, tuple(sorted(hset)))
            N = normalizer(G, H)
            for g in N.elems:
                if g in hset or G.rows[g][g] not in hset:
                    continue
                new = hset | {G.rows[h][g] for h in hset}
                if new not in seen:
                    seen.add(new)
                    nxt.append(new)
                    total += 1
                    if total > budget:
                        raise BudgetExceeded(f"more than {budget} subgroups")
        order *= 2
        layer = nxt
        if nxt:
            by_order[order] = [SubgroupRef(G, tuple(sorted(s))) for s in
                               sorted(nxt, key=sorted)]
    lat = SubgroupLattice(G, by_order)
    lat.classes = subgroup_conjugacy_classes(G, lat)
    return lat


def conjugate_set(G, elems, g):
    return frozenset(G.conj(g, h) for h in elems)


def subgroup_conjugacy_classes(G, lattice) -> list:
    """Conjugation orbits on the lattice; each class sorted with the
    lexicographically least element set first."""
    out = []
    for order in sorted(lattice.by_order):
        subs = lattice.by_order[order]
        index = {S.elemset: S for S in subs}
        done = set()
        for S in subs:
            if S.elemset in done:
                continue
            orbit = {S.elemset}
            stack = [S.elems]
            while stack:
                cur = stack.pop()
                for g in range(G.order):
                    c = conjugate_set(G, cur, g)
                    if c not in orbit:
                        orbit.add(c)
                        stack.append(tuple(c))
            done |= orbit
            cls = sorted((index[s] for s in orbit), key=lambda S: S.elems)
            out.append(cls)
    return out
