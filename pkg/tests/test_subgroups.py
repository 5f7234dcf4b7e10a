from itertools import combinations

import pytest

from bicyclic2 import subgroups as sg
from bicyclic2.core import BudgetExceeded, closure, construct, product


def _oracle_subgroup_sets(G):
    """All subgroups by brute force over generator pairs (valid for groups
    whose subgroups need at most 3 generators, plenty here)."""
    out = {frozenset([G.identity])}
    elems = range(G.order)
    for k in (1, 2, 3):
        for gens in combinations(elems, k):
            out.add(frozenset(closure(G, gens)))
    return out


@pytest.mark.parametrize("family,kw,count", [
    ("quaternion", {"n": 3}, 6),
    ("dihedral", {"n": 3}, 10),
])
def test_subgroup_counts(family, kw, count):
    G = construct(family, **kw)
    lat = sg.all_subgroups(G)
    assert lat.count() == count
    assert {S.elemset for S in lat.subgroups} == _oracle_subgroup_sets(G)


def test_c4xc2_subgroups():
    G = product(construct("cyclic", n=2), construct("cyclic", n=1))
    lat = sg.all_subgroups(G)
    assert lat.count() == 8
    assert {S.elemset for S in lat.subgroups} == _oracle_subgroup_sets(G)


def test_lattice_lagrange_and_classes():
    G = construct("semidihedral", n=4)
    lat = sg.all_subgroups(G)
    for order, subs in lat.by_order.items():
        assert G.order % order == 0
        assert all(S.order == order for S in subs)
    # conjugacy classes partition the lattice
    assert sum(len(c) for c in lat.classes) == lat.count()
    # class sizes divide |G|
    assert all(G.order % len(c) == 0 for c in lat.classes)


def test_d16_klein_classes():
    G = construct("dihedral", n=4)
    lat = sg.all_subgroups(G)
    kleins = [c for c in lat.classes
              if c[0].order == 4 and
              all(G.elem_order[g] <= 2 for g in c[0].elems)]
    assert len(kleins) == 2
    assert all(len(c) == 2 for c in kleins)


def test_q16_quaternion_classes():
    G = construct("quaternion", n=4)
    # oracle: direct orbit computation on order-8 subgroups with one
    # involution (the Q8 subgroups)
    lat = sg.all_subgroups(G)
    q8s = [S for S in lat.by_order[8]
           if sum(1 for g in S.elems if G.elem_order[g] == 2) == 1
           and max(G.elem_order[g] for g in S.elems) == 4]
    assert len(q8s) == 2
    orbits = set()
    for S in q8s:
        orbit = frozenset(
            frozenset(G.conj(g, h) for h in S.elems) for g in range(16))
        orbits.add(orbit)
    assert len(orbits) == 2   # two distinct conjugacy classes
    classes = [c for c in lat.classes if c[0] in q8s or
               c[0].elemset in {S.elemset for S in q8s}]
    assert len(classes) == 2


def test_budget():
    G = construct("dihedral", n=5)
    with pytest.raises(BudgetExceeded):
        sg.all_subgroups(G, budget=5)


def test_class_reps_are_lex_least():
    G = construct("dihedral", n=4)
    lat = sg.all_subgroups(G)
    for cls in lat.classes:
        assert cls[0].elems == min(S.elems for S in cls)
