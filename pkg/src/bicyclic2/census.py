"""Census of bicyclic 2-groups via central C2-extensions.

H^2(G, C2) is computed from normalized 2-cocycles over GF(2) by bit-packed
Gaussian elimination; one extension per cohomology class is built, filtered
for bicyclicity and deduplicated up to isomorphism.  Every quotient of a
bicyclic group by a central involution is bicyclic, so the recursion over
orders is complete.
"""
from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .core import (BadFormat, FamilySpec, GroupTable, H2TooLarge,
                   construct_family, group_to_dict, dict_to_group, _table)
from . import fusion
from . import invariants as inv
from . import morphisms as mo
from . import subgroups as sg

H2_DIM_CAP = 16
CACHE_VERSION = 1
MANIFEST = "manifest.json"


# ---------------------------------------------------------------------------
# GF(2) linear algebra on bitmask rows

class GF2Space:
    """Row space over GF(2); rows are int bitmasks kept in echelon form."""

    def __init__(self):
        self.pivots = {}  # leading bit -> row

    def reduce(self, row):
        while row:
            b = row.bit_length() - 1
            p = self.pivots.get(b)
            if p is None:
                return row, b
            row ^= p
        return 0, -1

    def add(self, row):
        row, b = self.reduce(row)
        if row:
            self.pivots[b] = row
            return True
        return False

    @property
    def dim(self):
        return len(self.pivots)

    def contains(self, row):
        return self.reduce(row)[0] == 0


def _nullspace(rows, nvars):
    """Basis of the solution space of the homogeneous system (rows over
    nvars variables), as bitmasks."""
    space = GF2Space()
    for r in rows:
        space.add(r)
    pivots = dict(space.pivots)
    for lead in sorted(pivots):
        r = pivots[lead]
        for lower in sorted(pivots):
            if lower >= lead:
                break
            if (r >> lower) & 1:
                r ^= pivots[lower]
        pivots[lead] = r
    basis = []
    for j in range(nvars):
        if j in pivots:
            continue
        v = 1 << j
        for lead, r in pivots.items():
            if (r >> j) & 1:
                v ^= 1 << lead
        basis.append(v)
    return basis


@dataclass
class CocycleSpace:
    group: GroupTable
    nonid: list                   # element indices other than the identity
    var_index: dict               # (a, b) -> variable bit
    z2_basis: list
    b2_basis: list
    h2_dim: int
    h2_reps: list                 # one cocycle bitmask per cohomology class

    def value(self, f, a, b):
        e = self.group.identity
        if a == e or b == e:
            return 0
        return (f >> self.var_index[(a, b)]) & 1


def cocycle_space(G, h2_cap=H2_DIM_CAP) -> CocycleSpace:
    """Normalized 2-cocycles of G with C2 coefficients.

    Raises H2TooLarge when dim H^2 exceeds h2_cap.
    """
    e = G.identity
    nonid = [g for g in range(G.order) if g != e]
    var_index = {}
    for a in nonid:
        for b in nonid:
            var_index[(a, b)] = len(var_index)
    nvars = len(var_index)

    def var(a, b):
        # returns bitmask contribution, 0 when a or b is the identity
        if a == e or b == e:
            return 0
        return 1 << var_index[(a, b)]

    space = GF2Space()
    rows = []
    for a in nonid:
        ra = G.rows[a]
        for b in nonid:
            ab = ra[b]
            rab = G.rows[ab] if ab != e else None
            for c in nonid:
                bc = G.rows[b][c]
                row = var(a, b) ^ var(b, c) ^ var(ab, c) ^ var(a, bc)
                if row:
                    space.add(row)
    z2 = _nullspace(list(space.pivots.values()), nvars)
    # coboundaries: delta_h(a,b) = h(a) + h(b) + h(ab), h(e) = 0
    b2_space = GF2Space()
    b2 = []
    for g in nonid:
        row = 0
        for a in nonid:
            for b in nonid:
                bits = (a == g) ^ (b == g) ^ (G.rows[a][b] == g)
                if bits:
                    row ^= 1 << var_index[(a, b)]
        if b2_space.add(row):
            b2.append(row)
    h2_dim = len(z2) - b2_space.dim
    if h2_dim > h2_cap:
        raise H2TooLarge(f"dim H^2 = {h2_dim} exceeds cap {h2_cap}")
    # complement of B^2 inside Z^2
    comp_space = GF2Space()
    for r in b2_space.pivots.values():
        comp_space.add(r)
    comp = []
    for v in z2:
        if comp_space.add(v):
            comp.append(v)
    assert len(comp) == h2_dim
    reps = []
    for bits in range(1 << h2_dim):
        f = 0
        for j in range(h2_dim):
            if bits >> j & 1:
                f ^= comp[j]
        reps.append(f)
    return CocycleSpace(group=G, nonid=nonid, var_index=var_index,
                        z2_basis=z2, b2_basis=b2, h2_dim=h2_dim, h2_reps=reps)


def extension_table(cs: CocycleSpace, f) -> GroupTable:
    """Central extension of cs.group by C2 along cocycle f.

    Element (a, s) at index 2a + s; (a,s)(b,t) = (ab, s + t + f(a,b)).
    """
    G = cs.group
    n = G.order
    rows = []
    for a in range(n):
        for s in range(2):
            row = [0] * (2 * n)
            ra = G.rows[a]
            for b in range(n):
                fv = cs.value(f, a, b)
                ab2 = 2 * ra[b]
                for t in range(2):
                    row[2 * b + t] = ab2 + (s ^ t ^ fv)
            rows.append(row)
    T = _table(rows, name=f"ext({G.name})")
    T.assert_associative()
    return T


def central_extensions(G, h2_cap=H2_DIM_CAP):
    """One verified extension table per class of H^2(G, C2)."""
    cs = cocycle_space(G, h2_cap=h2_cap)
    return [extension_table(cs, f) for f in cs.h2_reps]


# ---------------------------------------------------------------------------
# census records

@dataclass
class CensusRecord:
    order: int
    index: int
    table: GroupTable
    fingerprint: object
    shape: object = None
    invariants: object = None
    matched_family: str = None
    verdict: object = None

    def fingerprint_hash(self):
        return fingerprint_hash(self.table)


def fingerprint_hash(T):
    key = repr(mo.fingerprint(T).key()).encode()
    return hashlib.sha256(key).hexdigest()[:16]


def matched_family_label(T):
    """Label of the first constructed family isomorphic to T, if any."""
    N = T.order.bit_length() - 1
    specs = []
    specs.append(FamilySpec("cyclic", n=N))
    if N % 2 == 0 and N >= 2:
        specs.append(FamilySpec("homocyclic", n=N // 2))
    if N >= 3:
        specs.append(FamilySpec("dihedral", n=N))
        specs.append(FamilySpec("quaternion", n=N))
    if N >= 4:
        specs.append(FamilySpec("semidihedral", n=N))
        specs.append(FamilySpec("modular", n=N))
    if N % 2 == 1 and N >= 3:
        specs.append(FamilySpec("wreath", n=(N - 1) // 2))
    for r in range(N - 2, 0, -1):
        s = N - 1 - r
        if r >= s >= 1:
            specs.append(FamilySpec("min_nonabelian", r=r, s=s))
    for case, spec, _count in fusion.janko_case_specs(N):
        specs.append(spec)
    for spec in specs:
        try:
            spec.validate()
        except Exception:
            continue
        if mo.isomorphic(T, construct_family(spec)) is not None:
            return spec.label()
    return None


def _record_verdict(T):
    lattice = sg.all_subgroups(T)
    reports = fusion.essential_candidates(T, lattice=lattice)
    try:
        return fusion.fs_multiplicity(T, lattice=lattice, reports=reports)
    except fusion.UnmatchedGroup:
        raise


def _verdict_worker(doc):
    T = dict_to_group(doc, check=False)
    return _record_verdict(T)


def bicyclic_census(max_order_exp, cache_dir=None, budget=sg.DEFAULT_BUDGET,
                    h2_cap=H2_DIM_CAP, jobs=1, with_verdicts=True):
    """All bicyclic 2-groups of order up to 2^max_order_exp, up to iso.

    Returns dict order -> list of CensusRecord, deterministic.
    """
    cached = _load_cache(cache_dir) if cache_dir else {}
    by_order = {}
    trivial = construct_family(FamilySpec("cyclic", n=0))
    c2 = construct_family(FamilySpec("cyclic", n=1))
    by_order[2] = [c2] if max_order_exp >= 1 else []
    order = 2
    while order < (1 << max_order_exp):
        nxt_order = order * 2
        if nxt_order in cached:
            by_order[nxt_order] = cached[nxt_order]
            order = nxt_order
            continue
        kept = []
        buckets = {}
        for base in by_order[order]:
            for T in central_extensions(base, h2_cap=h2_cap):
                if inv.rank(T) > 2 or not inv.is_bicyclic(T):
                    continue
                key = mo.fingerprint(T).key()
                bucket = buckets.setdefault(key, [])
                if any(mo.isomorphic(T, U) is not None for U in bucket):
                    continue
                bucket.append(T)
                kept.append(T)
        by_order[nxt_order] = kept
        order = nxt_order
    out = {}
    for o in sorted(by_order):
        recs = []
        for k, T in enumerate(by_order[o]):
            recs.append(CensusRecord(order=o, index=k, table=T,
                                     fingerprint=mo.fingerprint(T)))
        out[o] = recs
    if cache_dir:
        _save_cache(cache_dir, out)
    if with_verdicts:
        _attach_verdicts(out, jobs=jobs)
    return out


def _attach_verdicts(census, jobs=1):
    recs = [r for o in sorted(census) for r in census[o]]
    if jobs > 1:
        docs = [group_to_dict(r.table) for r in recs]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            verdicts = list(ex.map(_verdict_worker, docs))
        for r, v in zip(recs, verdicts):
            r.verdict = v
    for r in recs:
        if r.verdict is None:
            r.verdict = _record_verdict(r.table)
        r.shape = inv.classify_shape(r.table)
        r.invariants = inv.structural_invariants(r.table)
        r.matched_family = matched_family_label(r.table)


# ---------------------------------------------------------------------------
# cache

def _save_cache(cache_dir, census):
    os.makedirs(cache_dir, exist_ok=True)
    entries = []
    for o in sorted(census):
        N = o.bit_length() - 1
        for rec in census[o]:
            fname = f"order{N}_idx{rec.index}.json"
            with open(os.path.join(cache_dir, fname), "w") as fh:
                json.dump(group_to_dict(rec.table), fh)
            entries.append({"file": fname, "order": o, "index": rec.index,
                            "fingerprint": rec.fingerprint_hash()})
    manifest = {"version": CACHE_VERSION, "entries": entries}
    with open(os.path.join(cache_dir, MANIFEST), "w") as fh:
        json.dump(manifest, fh, indent=1)


def _load_cache(cache_dir):
    path = os.path.join(cache_dir, MANIFEST)
    if not os.path.exists(path):
        return {}
    with open(path) as fh:
        manifest = json.load(fh)
    if manifest.get("version") != CACHE_VERSION:
        raise BadFormat("cache manifest version mismatch")
    out = {}
    for ent in manifest["entries"]:
        T = dict_to_group(_read_json(os.path.join(cache_dir, ent["file"])),
                          check=False)
        if fingerprint_hash(T) != ent["fingerprint"]:
            raise BadFormat(f"cache entry {ent['file']} fingerprint mismatch")
        out.setdefault(ent["order"], []).append(T)
    return out


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# counting

def f_formula(N):
    """Groups of order 2^N admitting a nonnilpotent fusion system."""
    if N <= 1:
        return 0
    if N == 2:
        return 1
    if N == 3:
        return 2
    if N % 2 == 0:
        return 3 * N * N // 4 - 3 * N + 5
    return (3 * N * N + 1) // 4 - 3 * N + 3


def g_formula(N):
    """Isomorphism classes of nonnilpotent fusion systems at order 2^N."""
    if N <= 1:
        return 0
    if N == 2:
        return 1
    if N == 3:
        return 3
    if N % 2 == 0:
        return 3 * N * N // 4 - 2 * N + 5
    return (3 * N * N + 1) // 4 - 2 * N + 5


def count_table(census):
    """Empirical and closed-form counts per order exponent."""
    out = []
    for o in sorted(census):
        N = o.bit_length() - 1
        recs = census[o]
        f_emp = sum(1 for r in recs if r.verdict.admits_nonnilpotent)
        g_emp = sum(r.verdict.fs_count for r in recs)
        out.append({
            "N": N,
            "order": o,
            "census_size": len(recs),
            "f_empirical": f_emp,
            "f_formula": f_formula(N),
            "g_empirical": g_emp,
            "g_formula": g_formula(N),
        })
    return out


# ---------------------------------------------------------------------------
# verification suite

def janko_equivalence_holds(T, shape=None):
    """Nonmetacyclic T is bicyclic iff rank 2 with exactly one nonmetacyclic
    maximal subgroup.  Returns (lhs, rhs) of the equivalence."""
    if shape is None:
        shape = inv.classify_shape(T)
    if shape.metacyclic:
        return None
    lhs = shape.bicyclic
    if inv.rank(T) != 2:
        return (lhs, False)
    nonmeta = 0
    for M in inv.maximal_subgroups(T):
        MT, _ = M.as_table()
        if not inv.is_metacyclic(MT):
            nonmeta += 1
    return (lhs, nonmeta == 1)


def metanormal_holds(T):
    """Every homocyclic subgroup of metacyclic non-maximal-class T equals
    some Omega_i(T)."""
    lat = sg.all_subgroups(T)
    omegas = {frozenset((T.identity,))}
    i = 1
    while True:
        s = inv.omega_subgroup(T, i)
        omegas.add(s)
        if len(s) == T.order:
            break
        i += 1
    for S in lat.subgroups:
        ST, _ = S.as_table()
        k = S.order.bit_length() - 1
        if k % 2 or k == 0:
            continue
        tags_abelian = len(inv.center(ST)) == ST.order
        if tags_abelian and inv.exponent(ST) ** 2 == ST.order and inv.rank(ST) == 2:
            if S.elemset not in omegas:
                return False
    return True


def verify_suite(census, skip_metacyclic_extra=False):
    """Cross-module invariant checks over a computed census.

    Returns a list of violation dicts (empty when everything holds).
    """
    violations = []

    def flag(check, order, index, detail=""):
        violations.append({"check": check, "order": order, "index": index,
                           "detail": detail})

    for o in sorted(census):
        for rec in census[o]:
            T, v, shape = rec.table, rec.verdict, rec.shape
            reports = v.candidate_classes
            # cyclic commutator theorem: nonnilpotent system requires P' cyclic
            if not rec.invariants.derived_is_cyclic:
                if v.admits_nonnilpotent:
                    flag("cyclic_commutator", o, rec.index,
                         "P' noncyclic but admits nonnilpotent system")
            # admitting groups match exactly one classification case
            if v.admits_nonnilpotent and v.matched_case is None:
                flag("classification_match", o, rec.index)
            # Janko equivalence
            je = janko_equivalence_holds(T, shape)
            if je is not None and je[0] != je[1]:
                flag("janko_equivalence", o, rec.index, str(je))
            # automorphism 2-group dichotomy
            if not mo.automorphisms(T).is_2_group:
                if not (shape.homocyclic or
                        (o == 8 and shape.quaternion)):
                    flag("aut_2_group_dichotomy", o, rec.index,
                         f"|Aut| = {mo.automorphisms(T).order}")
            # essential type conformance
            for rep in reports:
                if rep.rank == 3:
                    if rep.iso_type[0] not in ("C2m_x_C2sq", "C2m_x_Q8",
                                               "C2m_ast_Q8"):
                        flag("rank3_essential_type", o, rec.index,
                             str(rep.iso_type))
                elif rep.rank == 2 and not shape.metacyclic:
                    if not (shape.wreath and rep.iso_type[0] in
                            ("homocyclic", "C2sq")):
                        flag("rank2_essential_type", o, rec.index,
                             str(rep.iso_type))
                if not rep.is_normal:
                    tag = rep.normalizer_type[0]
                    if tag == "SD16_x_C2m":
                        flag("sd16_normalizer_occurs", o, rec.index)
                    if tag not in ("D8_x_C2m", "Q16_x_C2m", "Q16_ast_C2m"):
                        flag("normalizer_shape", o, rec.index, tag)
            # structural lemmas on rank-3 candidates
            for chk in fusion.structural_checks(T, reports=reports):
                if not chk.passed:
                    flag("structural:" + chk.subject, o, rec.index, chk.detail)
            # fixed central involution when all candidates are Q8-type
            if reports and all(r.iso_type[0] in ("C2m_x_Q8", "C2m_ast_Q8")
                               for r in reports):
                if not _fixed_central_involution(T, reports):
                    flag("fixed_central_involution", o, rec.index)
            # sections have rank <= 3
            bad = _max_subgroup_rank(T)
            if bad > 3:
                flag("section_rank_bound", o, rec.index, f"rank {bad}")
    # counting agreement
    for row in count_table(census):
        if row["f_empirical"] != row["f_formula"]:
            flag("count_f", row["order"], -1,
                 f"{row['f_empirical']} != {row['f_formula']}")
        if row["g_empirical"] != row["g_formula"]:
            flag("count_g", row["order"], -1,
                 f"{row['g_empirical']} != {row['g_formula']}")
    # every classification family matches exactly one record
    for o in sorted(census):
        N = o.bit_length() - 1
        for case, spec, _cnt in fusion.theorem_family_specs(N):
            ref = construct_family(spec)
            hits = sum(1 for rec in census[o]
                       if mo.isomorphic(ref, rec.table) is not None)
            if hits != 1:
                flag("family_in_census", o, -1,
                     f"{spec.label()} matched {hits} records")
    # P' = C2^2 without elementary abelian E8: unique of order 32, and no
    # order-32 group with Klein derived subgroup has candidates
    if 32 in census:
        hits = [rec for rec in census[32]
                if rec.invariants.derived_sizes[1:2] == (4,)
                and not rec.invariants.derived_is_cyclic]
        e8free = [rec for rec in hits if rec.invariants.two_rank <= 2]
        if len(e8free) != 1:
            flag("order32_klein_derived", 32, -1,
                 f"{len(e8free)} E8-free hits")
        for rec in hits:
            if rec.verdict.candidate_classes:
                flag("order32_klein_derived", 32, rec.index,
                     "unexpected essential candidate")
    return violations


def _fixed_central_involution(T, reports):
    centrals = [g for g in inv.center(T) if T.elem_order[g] == 2]
    for z in centrals:
        ok = True
        for rep in reports:
            if rep.alpha_witness is None:
                ok = False
                break
            local = {g: k for k, g in enumerate(rep.local_map)}
            if z not in local:
                ok = False
                break
            k = local[z]
            if rep.alpha_witness[k] != k:
                ok = False
                break
        if ok:
            return True
    return False


def _max_subgroup_rank(T):
    lat = sg.all_subgroups(T)
    best = 0
    for cls in lat.classes:
        ST, _ = cls[0].as_table()
        best = max(best, inv.rank(ST))
    return best
