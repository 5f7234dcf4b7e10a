"""Structural invariants and shape classification for 2-group tables."""
from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .core import (GroupTable, SubgroupRef, closure, generated_subgroup,
                   quotient, subgroup_ref)


def _as_table(S):
    if isinstance(S, SubgroupRef):
        T, _ = S.as_table()
        return T
    return S


def _cached(G, key, fn):
    c = G._cache
    if key not in c:
        c[key] = fn()
    return c[key]


def center(G):
    def run():
        n = G.order
        return frozenset(g for g in range(n)
                         if all(G.rows[g][t] == G.rows[t][g] for t in range(n)))
    return _cached(G, "center", run)


def derived_subgroup(G):
    def run():
        comms = {G.comm(a, b) for a in range(G.order) for b in range(G.order)}
        return frozenset(closure(G, comms))
    return _cached(G, "derived", run)


def derived_series_sizes(G):
    def run():
        sizes = [G.order]
        cur = set(range(G.order))
        while len(cur) > 1:
            elems = sorted(cur)
            comms = {G.comm(a, b) for a in elems for b in elems}
            nxt = closure(G, comms)
            if len(nxt) == len(cur):
                break
            cur = nxt
            sizes.append(len(cur))
        return tuple(sizes)
    return _cached(G, "derived_series", run)


def lower_central_sizes(G):
    def run():
        sizes = [G.order]
        cur = set(range(G.order))
        while len(cur) > 1:
            comms = {G.comm(g, k) for g in range(G.order) for k in cur}
            nxt = closure(G, comms)
            if len(nxt) == len(cur):
                break
            cur = nxt
            sizes.append(len(cur))
        return tuple(sizes)
    return _cached(G, "lower_central", run)


def nilpotency_class(G):
    sizes = lower_central_sizes(G)
    return len(sizes) - 1 if sizes[-1] == 1 else len(sizes)


def frattini_subgroup(G):
    """Phi(P) = P' * agemo_1(P) for a 2-group."""
    def run():
        gens = {G.rows[g][g] for g in range(G.order)}
        gens |= derived_subgroup(G)
        return frozenset(closure(G, gens))
    return _cached(G, "frattini", run)


def omega_subgroup(G, i):
    gens = {g for g in range(G.order) if G.elem_order[g] <= (1 << i)}
    return frozenset(closure(G, gens))


def agemo_subgroup(G, i):
    gens = {G.power(g, 1 << i) for g in range(G.order)}
    return frozenset(closure(G, gens))


def omega_sizes(G):
    def run():
        out = []
        i = 1
        while True:
            s = len(omega_subgroup(G, i))
            out.append(s)
            if s == G.order:
                break
            i += 1
        return tuple(out)
    return _cached(G, "omega_sizes", run)


def agemo_sizes(G):
    def run():
        out = []
        i = 1
        while True:
            s = len(agemo_subgroup(G, i))
            out.append(s)
            if s == 1:
                break
            i += 1
        return tuple(out)
    return _cached(G, "agemo_sizes", run)


def rank(G):
    """log2 |G / Phi(G)|, the minimal generator count."""
    return (G.order // len(frattini_subgroup(G))).bit_length() - 1


def two_rank(G):
    """Largest r with an elementary abelian subgroup of order 2^r."""
    def run():
        invs = [g for g in range(G.order) if G.elem_order[g] == 2]
        if not invs:
            return 0
        g = nx.Graph()
        g.add_nodes_from(invs)
        for idx, a in enumerate(invs):
            for b in invs[idx + 1:]:
                if G.rows[a][b] == G.rows[b][a]:
                    g.add_edge(a, b)
        best = 1
        for clique in nx.find_cliques(g):
            if len(clique) + 1 <= (1 << best):
                continue
            sub = closure(G, clique)
            r = len(sub).bit_length() - 1
            best = max(best, r)
        return best
    return _cached(G, "two_rank", run)


def exponent(G):
    return max(G.elem_order) if G.order else 1


def is_cyclic_set(G, elems):
    n = len(elems)
    return any(G.elem_order[g] == n for g in elems)


@dataclass(frozen=True)
class InvariantRecord:
    order: int
    exponent: int
    center_size: int
    derived_sizes: tuple
    lower_central_sizes: tuple
    nilpotency_class: int
    frattini_size: int
    omega_sizes: tuple
    agemo_sizes: tuple
    rank: int
    two_rank: int
    derived_is_cyclic: bool


def structural_invariants(S) -> InvariantRecord:
    G = _as_table(S)
    return InvariantRecord(
        order=G.order,
        exponent=exponent(G),
        center_size=len(center(G)),
        derived_sizes=derived_series_sizes(G),
        lower_central_sizes=lower_central_sizes(G),
        nilpotency_class=nilpotency_class(G),
        frattini_size=len(frattini_subgroup(G)),
        omega_sizes=omega_sizes(G),
        agemo_sizes=agemo_sizes(G),
        rank=rank(G),
        two_rank=two_rank(G),
        derived_is_cyclic=is_cyclic_set(G, derived_subgroup(G)),
    )


# ---------------------------------------------------------------------------
# shape tags

@dataclass(frozen=True)
class ShapeTags:
    abelian: bool
    cyclic: bool
    elementary_abelian: bool
    homocyclic: bool
    maximal_class: bool
    dihedral: bool
    quaternion: bool
    semidihedral: bool
    metacyclic: bool
    bicyclic: bool
    wreath: bool
    min_nonabelian: bool
    min_nonabelian_type: tuple


def cyclic_subgroups(G):
    """All distinct cyclic subgroups, as frozensets, largest first."""
    def run():
        seen = {}
        for g in range(G.order):
            s = frozenset(closure(G, [g]))
            seen.setdefault(s, g)
        return sorted(seen, key=lambda s: (-len(s), sorted(s)))
    return _cached(G, "cyclic_subs", run)


def is_bicyclic(G):
    """G = A B with A, B cyclic; |A||B| / |A n B| = |G|."""
    def run():
        subs = cyclic_subgroups(G)
        maximal = [a for a in subs
                   if not any(a < b for b in subs if len(b) > len(a))]
        n = G.order
        for a in maximal:
            la = len(a)
            for b in subs:
                lb = len(b)
                if la * lb < n:
                    break
                if la * lb // len(a & b) == n:
                    return True
        return False
    return _cached(G, "bicyclic", run)


def is_metacyclic(G):
    """Has a cyclic normal subgroup with cyclic quotient."""
    def run():
        if is_cyclic_set(G, range(G.order)):
            return True
        for s in cyclic_subgroups(G):
            if len(s) == 1:
                continue
            elems = sorted(s)
            if any(G.conj(g, h) not in s for g in range(G.order) for h in elems):
                continue
            Q, _ = quotient(G, subgroup_ref(G, elems, check=False))
            if is_cyclic_set(Q, range(Q.order)):
                return True
        return False
    return _cached(G, "metacyclic", run)


def maximal_subgroups(G):
    """Index-2 subgroups: preimages of hyperplanes of G/Phi(G)."""
    def run():
        phi = sorted(frattini_subgroup(G))
        r = rank(G)
        if r == 0:
            return []
        # coset vectors over a generating basis
        basis = []
        span = set(phi)
        for g in range(G.order):
            if g not in span:
                basis.append(g)
                span = closure(G, set(span) | {g})
                if len(span) == G.order:
                    break
        coset_vec = {}
        for bits in range(1 << r):
            e = G.identity
            for j in range(r):
                if bits >> j & 1:
                    e = G.m(e, basis[j])
            for p in phi:
                coset_vec[G.m(e, p)] = bits
        out = []
        for phi_vec in range(1, 1 << r):
            elems = [g for g in range(G.order)
                     if bin(coset_vec[g] & phi_vec).count("1") % 2 == 0]
            out.append(subgroup_ref(G, elems, check=False))
        return out
    return _cached(G, "maximal_subgroups", run)


def classify_shape(S) -> ShapeTags:
    G = _as_table(S)
    n = G.order
    k = n.bit_length() - 1
    exp = exponent(G)
    abelian = len(center(G)) == n
    cyc = exp == n
    elem_ab = abelian and exp <= 2
    homo = abelian and n > 1 and exp * exp == n and rank(G) == 2
    invol = sum(1 for g in range(n) if G.elem_order[g] == 2)
    maxc = nilpotency_class(G) == k - 1 if n > 1 else False
    dihedral = maxc and n >= 8 and invol == (1 << (k - 1)) + 1
    quaternion = maxc and n >= 8 and invol == 1
    semidihedral = maxc and n >= 16 and invol == (1 << (k - 2)) + 1
    meta = is_metacyclic(G)
    bicyc = is_bicyclic(G)
    wreath = False
    if k % 2 == 1 and k >= 3 and not abelian:
        from . import morphisms
        from .core import FamilySpec, construct_family
        ref = construct_family(FamilySpec("wreath", n=(k - 1) // 2))
        wreath = morphisms.isomorphic(G, ref) is not None
    mna = False
    mna_type = ()
    if not abelian and all(_is_abelian_set(G, M.elems)
                           for M in maximal_subgroups(G)):
        mna = True
        D = derived_subgroup(G)
        Q, _ = quotient(G, subgroup_ref(G, sorted(D), check=False))
        r = exponent(Q).bit_length() - 1
        s = (Q.order.bit_length() - 1) - r
        mna_type = (r, s)
    return ShapeTags(abelian=abelian, cyclic=cyc, elementary_abelian=elem_ab,
                     homocyclic=homo, maximal_class=maxc, dihedral=dihedral,
                     quaternion=quaternion, semidihedral=semidihedral,
                     metacyclic=meta, bicyclic=bicyc, wreath=wreath,
                     min_nonabelian=mna, min_nonabelian_type=mna_type)


def _is_abelian_set(G, elems):
    return all(G.rows[a][b] == G.rows[b][a] for a in elems for b in elems)


# ---------------------------------------------------------------------------
# localizers

def centralizer(G, S: SubgroupRef):
    elems = [g for g in range(G.order)
             if all(G.rows[g][s] == G.rows[s][g] for s in S.elems)]
    return SubgroupRef(G, tuple(elems))


def normalizer(G, S: SubgroupRef):
    es = S.elemset
    elems = [g for g in range(G.order)
             if all(G.conj(g, s) in es for s in S.elems)]
    return SubgroupRef(G, tuple(elems))


def normal_core(G, S: SubgroupRef):
    cur = set(S.elems)
    for g in range(G.order):
        cur &= {G.conj(g, s) for s in S.elems}
    # the intersection of all conjugates is already a subgroup
    return SubgroupRef(G, tuple(sorted(cur)))


def center_subgroup(G):
    return SubgroupRef(G, tuple(sorted(center(G))))


def localizers(G, S: SubgroupRef):
    """Centralizer, normalizer and normal core of S in G."""
    return {
        "centralizer": centralizer(G, S),
        "normalizer": normalizer(G, S),
        "core": normal_core(G, S),
    }
