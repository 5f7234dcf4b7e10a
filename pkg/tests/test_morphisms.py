from itertools import permutations

import pytest

from bicyclic2 import invariants as inv, morphisms as mo
from bicyclic2.core import (RankTooHigh, construct, generated_subgroup,
                            product, verify_table)


def test_fingerprint_distinguishes():
    assert (mo.fingerprint(construct("dihedral", n=3)).key() !=
            mo.fingerprint(construct("quaternion", n=3)).key())
    c4c4 = construct("homocyclic", n=2)
    c2c8 = product(construct("cyclic", n=3), construct("cyclic", n=1))
    assert mo.fingerprint(c4c4).key() != mo.fingerprint(c2c8).key()


def test_fingerprint_is_relabeling_invariant():
    G = construct("semidihedral", n=4)
    pi = [0] + list(range(G.order - 1, 0, -1))
    rows = [[0] * G.order for _ in range(G.order)]
    inv_pi = [0] * G.order
    for a, pa in enumerate(pi):
        inv_pi[pa] = a
    for a in range(G.order):
        for b in range(G.order):
            rows[pi[a]][pi[b]] = pi[G.rows[a][b]]
    H = verify_table(rows)
    assert mo.fingerprint(G).key() == mo.fingerprint(H).key()
    w = mo.isomorphic(G, H)
    assert w is not None and w.verify()


def test_isomorphic_negative():
    assert mo.isomorphic(construct("dihedral", n=3),
                         construct("quaternion", n=3)) is None
    a = construct("janko", n=3, m=2, i=2)
    b = construct("janko", n=3, m=2, i=3)
    assert mo.isomorphic(a, b) is None


def test_central_products_coincide():
    # Q8 * C4 = D8 * C4
    q = construct("central_C2m_Q8", m=2)
    D8 = construct("dihedral", n=3)
    C4 = construct("cyclic", n=2)
    zD = [g for g in range(8) if D8.elem_order[g] == 2
          and all(D8.m(g, t) == D8.m(t, g) for t in range(8))][0]
    from bicyclic2.core import product as prod
    d = prod(D8, C4, kind="central",
             zG=generated_subgroup(D8, [zD]),
             zH=generated_subgroup(C4, [2]),
             matching={D8.identity: C4.identity, zD: 2})
    w = mo.isomorphic(q, d)
    assert w is not None and w.verify()


def _oracle_aut_count(G):
    """Brute force over all permutations fixing the identity."""
    others = [g for g in range(G.order) if g != G.identity]
    count = 0
    for per in permutations(others):
        f = [0] * G.order
        f[G.identity] = G.identity
        for g, h in zip(others, per):
            f[g] = h
        if all(f[G.rows[a][b]] == G.rows[f[a]][f[b]]
               for a in range(G.order) for b in range(G.order)):
            count += 1
    return count


@pytest.mark.parametrize("build,order", [
    (lambda: construct("quaternion", n=3), 24),
    (lambda: construct("dihedral", n=3), 8),
    (lambda: product(construct("cyclic", n=2), construct("cyclic", n=1)), 8),
])
def test_automorphism_counts_vs_bruteforce(build, order):
    G = build()
    ag = mo.automorphisms(G)
    assert ag.order == order == _oracle_aut_count(G)
    closure = mo._perm_closure(ag.generators, G.order)
    assert len(closure) == ag.order


def test_aut_elementary_abelian():
    E8 = product(construct("homocyclic", n=1), construct("cyclic", n=1))
    ag = mo.automorphisms(E8)
    assert ag.order == 168 and not ag.is_2_group


def test_rank_cap():
    E16 = product(construct("homocyclic", n=1), construct("homocyclic", n=1))
    with pytest.raises(RankTooHigh):
        mo.automorphisms(E16)


def test_order3_automorphisms_on_essential_families():
    for G in (construct("direct_C2m_x_C2sq", m=3),
              construct("direct_C2m_x_Q8", m=2),
              construct("central_C2m_Q8", m=3)):
        assert mo.order3_automorphisms(G), G.name


def test_order3_fixed_points_on_central_product():
    # fixed points of any order-3 automorphism of C_{2^m} * Q8 form the
    # cyclic center
    G = construct("central_C2m_Q8", m=3)
    centre = set(inv.center(G))
    for a in mo.order3_automorphisms(G):
        fixed = {g for g in range(G.order) if a[g] == g}
        assert fixed == centre


def test_iso_is_equivalence():
    G = construct("semidihedral", n=4)
    H = construct("semidihedral", n=4)
    w = mo.isomorphic(G, H)
    assert w is not None
    # inverse mapping is an isomorphism back
    back = [0] * G.order
    for a, fa in enumerate(w.mapping):
        back[fa] = a
    assert mo.IsoWitness(H, G, tuple(back)).verify()
