"""Isomorphism testing and automorphism enumeration for small 2-groups.

Strategy: a cheap invariant fingerprint filters most pairs; surviving pairs
are decided by backtracking over images of a minimal generating tuple, with
per-element invariants pruning the candidate images.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import GroupTable, RankTooHigh, closure
from . import invariants as inv


def conjugacy_classes(G):
    """List of element conjugacy classes (as sorted tuples), cached."""
    def run():
        seen = [False] * G.order
        classes = []
        for g in range(G.order):
            if seen[g]:
                continue
            orb = {g}
            stack = [g]
            while stack:
                a = stack.pop()
                for t in range(G.order):
                    b = G.conj(t, a)
                    if b not in orb:
                        orb.add(b)
                        stack.append(b)
            for a in orb:
                seen[a] = True
            classes.append(tuple(sorted(orb)))
        return classes
    return inv._cached(G, "conj_classes", run)


def element_invariants(G):
    """Per-element tuple (order, class size, order of square, class size of
    square), an isomorphism invariant used for pruning."""
    def run():
        cls = conjugacy_classes(G)
        size = [0] * G.order
        for c in cls:
            for g in c:
                size[g] = len(c)
        out = []
        for g in range(G.order):
            s = G.rows[g][g]
            out.append((G.elem_order[g], size[g], G.elem_order[s], size[s]))
        return out
    return inv._cached(G, "elem_invariants", run)


@dataclass(frozen=True)
class Fingerprint:
    order: int
    order_multiset: tuple
    center_size: int
    derived_sizes: tuple
    omega_sizes: tuple
    agemo_sizes: tuple
    class_size_multiset: tuple
    power_profile: tuple

    def key(self):
        return (self.order, self.order_multiset, self.center_size,
                self.derived_sizes, self.omega_sizes, self.agemo_sizes,
                self.class_size_multiset, self.power_profile)


def fingerprint(G) -> Fingerprint:
    def run():
        ei = element_invariants(G)
        return Fingerprint(
            order=G.order,
            order_multiset=tuple(sorted(G.elem_order)),
            center_size=len(inv.center(G)),
            derived_sizes=inv.derived_series_sizes(G),
            omega_sizes=inv.omega_sizes(G),
            agemo_sizes=inv.agemo_sizes(G),
            class_size_multiset=tuple(sorted(t[1] for t in ei)),
            power_profile=tuple(sorted(ei)),
        )
    return inv._cached(G, "fingerprint", run)


def generating_tuple(G):
    """Minimal generating tuple via the Frattini quotient (Burnside basis)."""
    def run():
        phi = inv.frattini_subgroup(G)
        cur = set(phi)
        gens = []
        for g in sorted(range(G.order), key=lambda g: (-G.elem_order[g], g)):
            if g not in cur:
                gens.append(g)
                cur = closure(G, set(cur) | set(gens))
                if len(cur) == G.order:
                    break
        return tuple(gens)
    return inv._cached(G, "gens", run)


@dataclass
class IsoWitness:
    """A verified isomorphism source -> target as an index mapping."""

    source: GroupTable
    target: GroupTable
    mapping: tuple

    def verify(self):
        f = self.mapping
        if sorted(f) != list(range(self.source.order)):
            return False
        for a in range(self.source.order):
            for b in range(self.source.order):
                if f[self.source.rows[a][b]] != self.target.rows[f[a]][f[b]]:
                    return False
        return True


def _extend(G, H, dom_map, used, gen, img):
    """Extend a partial hom (dict on a subgroup of G) by gen -> img.

    Returns (new map, new used set) or None on conflict; the new map covers
    the subgroup generated by its previous domain plus gen.
    """
    fmap = dict(dom_map)
    used = set(used)
    if gen in fmap:
        return (fmap, used) if fmap[gen] == img else None
    if img in used:
        return None
    fmap[gen] = img
    used.add(img)
    gens = list(fmap.keys())
    frontier = list(fmap.keys())
    while frontier:
        new = []
        for a in frontier:
            fa = fmap[a]
            for g in gens:
                b = G.rows[a][g]
                fb = H.rows[fa][fmap[g]]
                if b in fmap:
                    if fmap[b] != fb:
                        return None
                else:
                    if fb in used:
                        return None
                    fmap[b] = fb
                    used.add(fb)
                    new.append(b)
        frontier = new
    return fmap, used


def _search(G, H, find_all):
    if fingerprint(G).key() != fingerprint(H).key():
        return []
    gens = generating_tuple(G)
    invG = element_invariants(G)
    invH = element_invariants(H)
    cands = [[h for h in range(H.order) if invH[h] == invG[g]] for g in gens]
    out = []

    def rec(k, fmap, used):
        if k == len(gens):
            out.append(tuple(fmap[g] for g in range(G.order)))
            return not find_all
        for img in cands[k]:
            ext = _extend(G, H, fmap, used, gens[k], img)
            if ext is not None:
                if rec(k + 1, ext[0], ext[1]):
                    return True
        return False

    rec(0, {G.identity: H.identity}, {H.identity})
    return out


def isomorphic(G, H):
    """IsoWitness if G and H are isomorphic, else None."""
    maps = _search(G, H, find_all=False)
    if not maps:
        return None
    return IsoWitness(G, H, maps[0])


@dataclass
class AutGroup:
    order: int
    generators: list
    is_2_group: bool
    elements: list  # full closure when order <= ELEMENT_CAP, else None

    ELEMENT_CAP = 10000


def _perm_order(p):
    n = len(p)
    seen = [False] * n
    out = 1
    for s in range(n):
        if seen[s]:
            continue
        length = 0
        a = s
        while not seen[a]:
            seen[a] = True
            a = p[a]
            length += 1
        if length > 1:
            out = out * length // _gcd(out, length)
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def automorphisms(Q) -> AutGroup:
    """Enumerate Aut(Q) by generator-image backtracking.

    Requires rank(Q) <= 3 (raises RankTooHigh otherwise).
    """
    def run():
        if inv.rank(Q) > 3:
            raise RankTooHigh(f"rank {inv.rank(Q)} > 3 for order {Q.order}")
        perms = _search(Q, Q, find_all=True)
        order = len(perms)
        # greedy small generating set
        gens = []
        span = {tuple(range(Q.order))}
        for p in perms:
            if p not in span:
                gens.append(p)
                span = _perm_closure(gens, Q.order)
                if len(span) == order:
                    break
        is2 = order & (order - 1) == 0
        elements = perms if order <= AutGroup.ELEMENT_CAP else None
        return AutGroup(order=order, generators=gens, is_2_group=is2,
                        elements=elements)
    return inv._cached(Q, "autgroup", run)


def _perm_closure(gens, n):
    ident = tuple(range(n))
    seen = {ident}
    stack = [ident]
    while stack:
        a = stack.pop()
        for g in gens:
            b = tuple(a[g[i]] for i in range(n))
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


def order3_automorphisms(Q):
    """All order-3 elements of Aut(Q)."""
    ag = automorphisms(Q)
    if ag.elements is None:
        raise RankTooHigh("automorphism group too large to list")
    return [p for p in ag.elements if _perm_order(p) == 3]


def perm_order(p):
    return _perm_order(p)
