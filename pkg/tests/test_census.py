import itertools
import json
import os

import pytest

from bicyclic2 import census, morphisms as mo
from bicyclic2.core import BadFormat, H2TooLarge, construct, product, verify_table


def test_h2_dims():
    assert census.cocycle_space(construct("cyclic", n=0)).h2_dim == 0
    assert census.cocycle_space(construct("cyclic", n=1)).h2_dim == 1
    assert census.cocycle_space(construct("homocyclic", n=1)).h2_dim == 3


def test_h2_c2sq_bruteforce():
    # oracle: scan all normalized functions f on nonidentity pairs of C2^2
    G = construct("homocyclic", n=1)
    nonid = [g for g in range(4) if g != G.identity]
    pairs = [(a, b) for a in nonid for b in nonid]
    z2 = 0
    cocycles = []
    for bits in range(1 << len(pairs)):
        f = {p: (bits >> k) & 1 for k, p in enumerate(pairs)}
        f.update({(G.identity, g): 0 for g in range(4)})
        f.update({(g, G.identity): 0 for g in range(4)})
        ok = all(
            (f[(a, b)] + f[(G.m(a, b), c)]) % 2 ==
            (f[(b, c)] + f[(a, G.m(b, c))]) % 2
            for a in range(4) for b in range(4) for c in range(4))
        if ok:
            z2 += 1
            cocycles.append(bits)
    b2 = set()
    for hbits in range(1 << len(nonid)):
        h = {G.identity: 0}
        for k, g in enumerate(nonid):
            h[g] = (hbits >> k) & 1
        b2.add(tuple((h[a] + h[b] + h[G.m(a, b)]) % 2 for a, b in pairs))
    cs = census.cocycle_space(G)
    assert z2 == 1 << len(cs.z2_basis)
    assert len(b2) == 1 << len(cs.b2_basis)
    assert z2 // len(b2) == 1 << cs.h2_dim == 8


def test_extensions_of_c2():
    exts = census.central_extensions(construct("cyclic", n=1))
    kinds = sorted(max(T.elem_order) for T in exts)
    assert kinds == [2, 4]  # C2^2 and C4


def test_extensions_of_d8():
    exts = census.central_extensions(construct("dihedral", n=3))
    found = set()
    refs = {
        "D16": construct("dihedral", n=4),
        "Q16": construct("quaternion", n=4),
        "SD16": construct("semidihedral", n=4),
        "D8xC2": product(construct("dihedral", n=3), construct("cyclic", n=1)),
    }
    for T in exts:
        for name, R in refs.items():
            if mo.isomorphic(T, R) is not None:
                found.add(name)
    assert found == set(refs)


def test_h2_cap():
    with pytest.raises(H2TooLarge):
        census.cocycle_space(construct("homocyclic", n=1), h2_cap=2)


def test_census_order8():
    cen = census.bicyclic_census(3, with_verdicts=False)
    assert [len(cen[o]) for o in sorted(cen)] == [1, 2, 4]
    # oracle: of the five order-8 groups, all but C2^3 are bicyclic
    refs = [construct("cyclic", n=3), construct("dihedral", n=3),
            construct("quaternion", n=3),
            product(construct("cyclic", n=2), construct("cyclic", n=1))]
    for R in refs:
        assert sum(1 for rec in cen[8]
                   if mo.isomorphic(R, rec.table) is not None) == 1
    E8 = product(construct("homocyclic", n=1), construct("cyclic", n=1))
    assert all(mo.isomorphic(E8, rec.table) is None for rec in cen[8])


def _c4_semi_c4():
    # C4 : C4 with inverting action, as an explicit table
    def mul(a, b):
        i, j = a
        k, l = b
        return ((i + (k if j % 2 == 0 else -k)) % 4, (j + l) % 4)
    elems = [(i, j) for i in range(4) for j in range(4)]
    idx = {e: n for n, e in enumerate(elems)}
    return verify_table([[idx[mul(a, b)] for b in elems] for a in elems])


def test_census_order16_members():
    cen = census.bicyclic_census(4, with_verdicts=False)
    assert len(cen[16]) == 9
    for R in (_c4_semi_c4(), construct("min_nonabelian", r=2, s=1),
              construct("modular", n=4), construct("homocyclic", n=2)):
        assert sum(1 for rec in cen[16]
                   if mo.isomorphic(R, rec.table) is not None) == 1


def test_census_quotient_closure():
    # every record of order 16 has a central involution quotient in order 8
    from bicyclic2 import invariants as inv
    from bicyclic2.core import generated_subgroup, quotient
    cen = census.bicyclic_census(4, with_verdicts=False)
    small = [rec.table for rec in cen[8]]
    for rec in cen[16]:
        T = rec.table
        centrals = [g for g in inv.center(T) if T.elem_order[g] == 2]
        hit = False
        for z in centrals:
            Q, _ = quotient(T, generated_subgroup(T, [z]))
            if any(mo.isomorphic(Q, S) is not None for S in small):
                hit = True
                break
        assert hit


def test_count_table_and_verify_to_32():
    cen = census.bicyclic_census(5)
    table = {row["N"]: row for row in census.count_table(cen)}
    for N, f, g in [(2, 1, 1), (3, 2, 3), (4, 5, 9), (5, 7, 14)]:
        assert table[N]["f_empirical"] == table[N]["f_formula"] == f
        assert table[N]["g_empirical"] == table[N]["g_formula"] == g
    assert census.verify_suite(cen) == []


def test_formulas():
    assert [census.f_formula(N) for N in range(2, 8)] == [1, 2, 5, 7, 14, 19]
    assert [census.g_formula(N) for N in range(2, 8)] == [1, 3, 9, 14, 20, 28]


def test_cache_roundtrip_and_corruption(tmp_path):
    cache = tmp_path / "cache"
    cen1 = census.bicyclic_census(4, cache_dir=str(cache),
                                  with_verdicts=False)
    assert (cache / "order4_idx0.json").exists()
    cen2 = census.bicyclic_census(4, cache_dir=str(cache),
                                  with_verdicts=False)
    assert [len(cen2[o]) for o in sorted(cen2)] == \
           [len(cen1[o]) for o in sorted(cen1)]
    # corrupt one file with a valid table of the wrong isomorphism type:
    # the manifest fingerprint must catch it
    from bicyclic2.core import group_to_dict
    victim = cache / "order4_idx0.json"
    doc = json.loads(victim.read_text())
    wrong = group_to_dict(construct("cyclic", n=4))
    if wrong["mult"] == doc["mult"]:
        wrong = group_to_dict(construct("dihedral", n=4))
    victim.write_text(json.dumps(wrong))
    with pytest.raises(BadFormat):
        census.bicyclic_census(4, cache_dir=str(cache), with_verdicts=False)


def test_verdict_jobs_parallel():
    cen1 = census.bicyclic_census(4, jobs=2)
    cen2 = census.bicyclic_census(4)
    for o in sorted(cen1):
        assert [r.verdict.fs_count for r in cen1[o]] == \
               [r.verdict.fs_count for r in cen2[o]]
