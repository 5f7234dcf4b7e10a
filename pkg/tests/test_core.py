import json

import pytest
from hypothesis import given, settings, strategies as st

from bicyclic2 import core
from bicyclic2.core import (BadParameters, FamilySpec, MatchingNotIso,
                            NoIdentity, NotAssociative, NotCentral, NotLatin,
                            NotNormal, construct, construct_family,
                            generated_subgroup, product, quotient,
                            subgroup_ref, verify_table)

ALL_SPECS = [
    FamilySpec("cyclic", n=0),
    FamilySpec("cyclic", n=4),
    FamilySpec("homocyclic", n=2),
    FamilySpec("dihedral", n=4),
    FamilySpec("quaternion", n=3),
    FamilySpec("semidihedral", n=4),
    FamilySpec("modular", n=4),
    FamilySpec("wreath", n=2),
    FamilySpec("min_nonabelian", r=3, s=2),
    FamilySpec("direct_C2m_x_C2sq", m=3),
    FamilySpec("direct_C2m_x_Q8", m=2),
    FamilySpec("central_C2m_Q8", m=3),
    FamilySpec("janko", n=2, m=2, i=2),
    FamilySpec("janko", n=3, m=2, i=2, x_sq=1, a_pow=1),
    FamilySpec("janko", n=3, m=3, i=3, x_sq=1, a_pow=0),
]


def test_verify_table_trivial_and_c2sq():
    G = verify_table([[0]])
    assert G.order == 1 and G.identity == 0
    # Klein group as xor on 2 bits
    rows = [[a ^ b for b in range(4)] for a in range(4)]
    G = verify_table(rows)
    assert sorted(G.elem_order) == [1, 2, 2, 2]


def test_verify_table_rejects_corruption():
    rows = [[(a + b) % 4 for b in range(4)] for a in range(4)]
    verify_table(rows)
    bad = [r[:] for r in rows]
    bad[2], bad[3] = bad[3], bad[2]  # still Latin, no longer a group
    with pytest.raises((NotAssociative, NoIdentity)):
        verify_table(bad)
    bad = [r[:] for r in rows]
    bad[1][1] = 1
    with pytest.raises(NotLatin):
        verify_table(bad)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.label())
def test_families_are_groups(spec):
    G = construct_family(spec)
    assert G.order == spec.order()
    G.assert_associative()  # builders skip the full check; do it here


def test_family_orders_and_involutions():
    D8 = construct("dihedral", n=3)
    assert sum(1 for g in range(8) if D8.elem_order[g] == 2) == 5
    Q8 = construct("quaternion", n=3)
    assert sum(1 for g in range(8) if Q8.elem_order[g] == 2) == 1
    assert construct("janko", n=2, m=2, i=2).order == 32


def test_wreath_derived_subgroup_order():
    # oracle: commutator closure straight off the table
    G = construct("wreath", n=2)
    comms = {G.comm(a, b) for a in range(G.order) for b in range(G.order)}
    derived = core.closure(G, comms)
    assert len(derived) == 4


def test_bad_parameters():
    with pytest.raises(BadParameters):
        construct("janko", n=3, m=1, i=1)   # i below max(2, n-m+1)
    with pytest.raises(BadParameters):
        construct("janko", n=2, m=2, i=3)   # i > n
    with pytest.raises(BadParameters):
        construct("central_C2m_Q8", m=1)
    with pytest.raises(BadParameters):
        construct("min_nonabelian", r=1, s=2)
    with pytest.raises(BadParameters):
        construct("cyclic", n=9)            # above the order cap
    with pytest.raises(BadParameters):
        construct("nonsense")


def test_direct_product():
    A = construct("cyclic", n=2)
    B = construct("cyclic", n=1)
    G = product(A, B)
    assert G.order == 8
    assert sorted(G.elem_order) == [1, 2, 2, 2, 4, 4, 4, 4]


def _central_involution(G):
    return [g for g in range(G.order) if G.elem_order[g] == 2
            and all(G.m(g, t) == G.m(t, g) for t in range(G.order))][0]


def test_central_product_center():
    # oracle: naive center scan of Q8 * C4
    G = construct("central_C2m_Q8", m=2)
    assert G.order == 16
    center = [g for g in range(16)
              if all(G.m(g, t) == G.m(t, g) for t in range(16))]
    assert len(center) == 4
    assert max(G.elem_order[g] for g in center) == 4  # cyclic center


def test_central_product_errors():
    A = construct("dihedral", n=3)
    C4 = construct("cyclic", n=2)
    noncentral = [g for g in range(8) if A.elem_order[g] == 2
                  and any(A.m(g, t) != A.m(t, g) for t in range(8))][0]
    with pytest.raises(NotCentral):
        product(A, C4, kind="central",
                zG=generated_subgroup(A, [noncentral]),
                zH=generated_subgroup(C4, [2]),
                matching={A.identity: C4.identity, noncentral: 2})
    z = _central_involution(A)
    with pytest.raises(MatchingNotIso):
        product(A, C4, kind="central",
                zG=generated_subgroup(A, [z]),
                zH=generated_subgroup(C4, [2]),
                matching={A.identity: C4.identity, z: 1})


def test_quotient():
    D8 = construct("dihedral", n=3)
    z = _central_involution(D8)
    Q, proj = quotient(D8, generated_subgroup(D8, [z]))
    assert Q.order == 4 and max(Q.elem_order) == 2  # D8/Z = C2^2
    assert all(proj[D8.m(a, b)] == Q.m(proj[a], proj[b])
               for a in range(8) for b in range(8))
    s = [g for g in range(8) if D8.elem_order[g] == 2 and g != z][0]
    with pytest.raises(NotNormal):
        quotient(D8, generated_subgroup(D8, [s]))


def test_generated_subgroup():
    Q8 = construct("quaternion", n=3)
    fours = [g for g in range(8) if Q8.elem_order[g] == 4]
    S = generated_subgroup(Q8, fours[:1])
    assert S.order == 4
    assert generated_subgroup(Q8, fours).order == 8
    with pytest.raises(core.NotSubgroup):
        subgroup_ref(Q8, [0, fours[0]])


def test_janko_split_nonsplit_equivalences():
    from bicyclic2 import morphisms as mo
    # x^2 = 1 vs x^2 = z at i = n - m + 1 give isomorphic groups
    a = construct("janko", n=3, m=2, i=2, x_sq=0, a_pow=0)
    b = construct("janko", n=3, m=2, i=2, x_sq=1, a_pow=0)
    w = mo.isomorphic(a, b)
    assert w is not None and w.verify()
    # a^{2^m} = z: x^2 = 1 and x^2 = z agree for i >= n - m + 2
    c = construct("janko", n=3, m=2, i=3, x_sq=0, a_pow=1)
    d = construct("janko", n=3, m=2, i=3, x_sq=1, a_pow=1)
    assert mo.isomorphic(c, d) is not None


@pytest.mark.parametrize("spec", ALL_SPECS[:8], ids=lambda s: s.label())
def test_serialization_roundtrip(spec, tmp_path):
    G = construct_family(spec)
    path = tmp_path / "g.json"
    core.save_group(G, path)
    H = core.load_group(path)
    assert H.rows == G.rows and H.order == G.order


def test_serialization_format_checks(tmp_path):
    G = construct("cyclic", n=2)
    with pytest.raises(core.BadFormat):
        core.group_to_dict(G, labels=["a"])
    d = core.group_to_dict(G)
    d["version"] = 99
    with pytest.raises(core.BadFormat):
        core.dict_to_group(d)
    d = core.group_to_dict(G)
    d["mult"][0] = 3  # breaks the identity row
    with pytest.raises((NoIdentity, NotLatin, NotAssociative)):
        core.dict_to_group(d)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=6))
def test_cyclic_table_property(n):
    G = construct("cyclic", n=n)
    assert G.order == 2 ** n
    assert G.elem_order[G.identity] == 1
    if n:
        assert max(G.elem_order) == G.order
