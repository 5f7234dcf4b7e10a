"""Essential-subgroup candidate detection and fusion-system verdicts.

A conjugacy class representative Q < P is a candidate when
  (1) C_P(Q) <= Q,
  (2) |N_P(Q) : Q| = 2,
  (3) every x in N_P(Q) \\ Q acts nontrivially on Q / Phi(Q),
  (4) some order-3 automorphism of Q generates, together with the
      N_P(Q)-conjugation, a copy of S3 inside Aut(Q / Phi(Q)).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import (FamilySpec, GroupTable, NotBicyclic, SubgroupRef,
                   UnmatchedGroup, construct_family, generated_subgroup,
                   product, quotient, subgroup_ref)
from . import invariants as inv
from . import morphisms as mo
from . import subgroups as sg


# ---------------------------------------------------------------------------
# reference groups

_REFS = {}


def reference_group(tag, m=0) -> GroupTable:
    """Small library of comparison groups, cached by (tag, m)."""
    key = (tag, m)
    if key in _REFS:
        return _REFS[key]
    C = lambda **kw: construct_family(FamilySpec(**kw))
    if tag == "C2sq":
        G = C(family="homocyclic", n=1)
    elif tag == "Q8_small":
        G = C(family="quaternion", n=3)
    elif tag == "homocyclic":
        G = C(family="homocyclic", n=m)
    elif tag == "C2m_x_C2sq":
        G = C(family="direct_C2m_x_C2sq", m=m)
    elif tag == "C2m_x_Q8":
        G = C(family="direct_C2m_x_Q8", m=m)
    elif tag == "C2m_ast_Q8":
        G = C(family="central_C2m_Q8", m=m)
    elif tag == "D8_x_C2m":
        D = C(family="dihedral", n=3)
        G = D if m == 0 else product(D, C(family="cyclic", n=m))
    elif tag == "Q16_x_C2m":
        Q16 = C(family="quaternion", n=4)
        G = Q16 if m == 0 else product(Q16, C(family="cyclic", n=m))
    elif tag == "SD16_x_C2m":
        SD = C(family="semidihedral", n=4)
        G = SD if m == 0 else product(SD, C(family="cyclic", n=m))
    elif tag == "Q16_ast_C2m":
        Q16 = C(family="quaternion", n=4)
        Cm = C(family="cyclic", n=m)
        zQ = [g for g in range(16) if Q16.elem_order[g] == 2][0]
        zC = Cm.power(1, 1 << (m - 1))
        G = product(Q16, Cm, kind="central",
                    zG=generated_subgroup(Q16, [zQ]),
                    zH=generated_subgroup(Cm, [zC]),
                    matching={Q16.identity: Cm.identity, zQ: zC})
    else:
        raise UnmatchedGroup(f"unknown reference tag {tag!r}")
    _REFS[key] = G
    return G


def essential_iso_type(T: GroupTable):
    """Classify a candidate subgroup table against the reference library.

    Returns (tag, m) with tag in {C2sq, Q8_small, homocyclic, C2m_x_C2sq,
    C2m_x_Q8, C2m_ast_Q8, other}.
    """
    k = T.order.bit_length() - 1
    trials = []
    if T.order == 4:
        trials.append(("C2sq", 0))
    if T.order == 8:
        trials.append(("Q8_small", 0))
    if k % 2 == 0 and k >= 4:
        trials.append(("homocyclic", k // 2))
    if k >= 3:
        trials.append(("C2m_x_C2sq", k - 2))
    if k >= 4:
        trials.append(("C2m_x_Q8", k - 3))
    if k >= 4:
        trials.append(("C2m_ast_Q8", k - 2))
    for tag, m in trials:
        if mo.isomorphic(T, reference_group(tag, m)) is not None:
            return tag, m
    return "other", 0


def normalizer_iso_type(P, N: SubgroupRef):
    """Classify N_P(Q) against the normalizer reference library."""
    if N.order == P.order:
        return "whole_group", 0
    T, _ = N.as_table()
    k = N.order.bit_length() - 1
    trials = []
    if k >= 3:
        trials.append(("D8_x_C2m", k - 3))
    if k >= 4:
        trials.append(("Q16_x_C2m", k - 4))
        trials.append(("SD16_x_C2m", k - 4))
    if k >= 5:
        trials.append(("Q16_ast_C2m", k - 3))
    for tag, m in trials:
        if mo.isomorphic(T, reference_group(tag, m)) is not None:
            return tag, m
    return "other", 0


# ---------------------------------------------------------------------------
# GF(2) matrices for the Frattini-quotient action

def _frattini_coords(T):
    """Coordinates of each element of T in T/Phi(T) =~ GF(2)^r.

    Returns (coords list elem -> bitmask, basis elements, r).
    """
    phi = sorted(inv.frattini_subgroup(T))
    r = (T.order // len(phi)).bit_length() - 1
    basis = mo.generating_tuple(T)[:r]
    coords = [None] * T.order
    for bits in range(1 << r):
        e = T.identity
        for j in range(r):
            if bits >> j & 1:
                e = T.m(e, basis[j])
        for p in phi:
            coords[T.m(e, p)] = bits
    return coords, basis, r


def _action_matrix(perm, coords, basis, r):
    """Matrix (as a tuple of r column bitmasks) of the permutation's action
    on the Frattini quotient."""
    return tuple(coords[perm[b]] for b in basis)


def _mat_apply(A, v):
    out = 0
    j = 0
    while v:
        if v & 1:
            out ^= A[j]
        v >>= 1
        j += 1
    return out


def _mat_mul(A, B):
    return tuple(_mat_apply(A, col) for col in B)


def _mat_identity(r):
    return tuple(1 << j for j in range(r))


def _mat_closure(mats, r):
    seen = set(mats) | {_mat_identity(r)}
    stack = list(seen)
    while stack:
        a = stack.pop()
        for b in list(mats):
            c = _mat_mul(a, b)
            if c not in seen:
                seen.add(c)
                stack.append(c)
        if len(seen) > 24:
            break
    return seen


# ---------------------------------------------------------------------------
# candidate reports

@dataclass
class EssentialReport:
    subgroup: SubgroupRef             # class representative
    class_size: int
    rank: int
    conditions: dict
    is_candidate: bool
    is_normal: bool
    iso_type: tuple                   # (tag, m)
    normalizer_type: tuple            # (tag, m)
    alpha_witness: tuple = None       # local permutation of Q's table
    local_table: GroupTable = None
    local_map: list = None            # local index -> parent index


def _class_report(P, cls) -> EssentialReport:
    Q = cls[0]
    N = inv.normalizer(P, Q)
    Cent = inv.centralizer(P, Q)
    qset = Q.elemset
    e1 = all(c in qset for c in Cent.elems)
    e2 = N.order == 2 * Q.order
    T, mapping = Q.as_table()
    local = {g: k for k, g in enumerate(mapping)}
    coords, basis, r = _frattini_coords(T)

    def conj_matrix(x):
        perm = [local[P.conj(x, mapping[k])] for k in range(T.order)]
        return _action_matrix(perm, coords, basis, r)

    ident = _mat_identity(r)
    outside = [x for x in N.elems if x not in qset]
    e3 = bool(outside) and all(conj_matrix(x) != ident for x in outside)

    e4 = False
    alpha = None
    if e1 and e2 and e3 and r >= 2:
        B = conj_matrix(outside[0])
        for a in mo.order3_automorphisms(T):
            A = _action_matrix(a, coords, basis, r)
            if A == ident:
                continue
            grp = _mat_closure({A, B}, r)
            if len(grp) == 6 and _mat_mul(A, B) != _mat_mul(B, A):
                e4 = True
                alpha = a
                break

    cand = e1 and e2 and e3 and e4
    iso_t = essential_iso_type(T) if cand else ("other", 0)
    norm_t = normalizer_iso_type(P, N) if cand else ("other", 0)
    return EssentialReport(
        subgroup=Q,
        class_size=len(cls),
        rank=r,
        conditions={
            "self_centralizing": e1,
            "norm_index_two": e2,
            "faithful_on_frattini_quotient": e3,
            "s3_realizable": e4,
        },
        is_candidate=cand,
        is_normal=len(cls) == 1 and N.order == P.order,
        iso_type=iso_t,
        normalizer_type=norm_t,
        alpha_witness=alpha,
        local_table=T,
        local_map=mapping,
    )


def essential_candidates(P, lattice=None, budget=sg.DEFAULT_BUDGET):
    """Reports for every proper subgroup conjugacy class that is a candidate.

    Returns the list of EssentialReport whose is_candidate is True, in
    deterministic lattice order.
    """
    if lattice is None:
        lattice = sg.all_subgroups(P, budget=budget)
    out = []
    for cls in lattice.classes:
        if cls[0].order == P.order or cls[0].order == 1:
            continue
        rep = _class_report(P, cls)
        if rep.is_candidate:
            out.append(rep)
    return out


# ---------------------------------------------------------------------------
# verdicts

@dataclass
class FusionVerdict:
    admits_nonnilpotent: bool
    reason: str                       # essential_candidate_exists | aut_not_2_group | none
    candidate_classes: list
    aut_order: int
    matched_case: dict = None
    fs_count: int = 0


CASE_NAMES = {
    2: "homocyclic",
    3: "dihedral",
    4: "Q8",
    5: "quaternion",
    6: "semidihedral",
    7: "wreath",
    8: "min_nonabelian_n1",
    9: "D_nonsplit",
    10: "D_split",
    11: "Q8_type_nonsplit",
    12: "Q8_type_split",
    13: "ast_type_split",
    14: "ast_type_nonsplit",
}


def janko_case_specs(N):
    """Presentation parameters of the two-generator extension cases of order
    2^N, as (case id, FamilySpec, fs_count), pairwise non-isomorphic."""
    out = []
    for n in range(2, N - 1):
        m = N - 1 - n
        lo = max(2, n - m + 2)
        if n > m > 1:
            i = n - m + 1
            out.append((9, FamilySpec("janko", n=n, m=m, i=i, x_sq=0, a_pow=1), 1))
            out.append((11, FamilySpec("janko", n=n, m=m, i=i, x_sq=1, a_pow=1), 1))
            out.append((13, FamilySpec("janko", n=n, m=m, i=i, x_sq=1, a_pow=0), 1))
        if m >= 2:
            for i in range(lo, n + 1):
                out.append((10, FamilySpec("janko", n=n, m=m, i=i, x_sq=0, a_pow=0),
                            2 if i == n else 1))
                out.append((12, FamilySpec("janko", n=n, m=m, i=i, x_sq=1, a_pow=0), 1))
                if not (m == n and i == n):
                    out.append((14, FamilySpec("janko", n=n, m=m, i=i, x_sq=1, a_pow=1), 1))
    return out


def theorem_family_specs(N):
    """All FamilySpecs of order 2^N appearing in the classification, with
    (case id, spec, fs_count)."""
    out = []
    if N % 2 == 0 and N >= 2:
        out.append((2, FamilySpec("homocyclic", n=N // 2), 1))
    if N >= 3:
        out.append((3, FamilySpec("dihedral", n=N), 2))
    if N == 3:
        out.append((4, FamilySpec("quaternion", n=3), 1))
    if N >= 4:
        out.append((5, FamilySpec("quaternion", n=N), 2))
        out.append((6, FamilySpec("semidihedral", n=N), 3))
    if N % 2 == 1 and N >= 5:
        out.append((7, FamilySpec("wreath", n=(N - 1) // 2), 3))
    if N >= 4:
        out.append((8, FamilySpec("min_nonabelian", r=N - 2, s=1), 1))
    out.extend(janko_case_specs(N))
    return out


def admits_nonnilpotent(P, lattice=None, reports=None) -> FusionVerdict:
    """Decide whether P carries a nonnilpotent fusion system.

    True iff an essential candidate class exists or Aut(P) is not a 2-group.
    Raises NotBicyclic for non-bicyclic input.
    """
    if not inv.is_bicyclic(P):
        raise NotBicyclic(f"group of order {P.order} is not bicyclic")
    if reports is None:
        reports = essential_candidates(P, lattice=lattice)
    ag = mo.automorphisms(P)
    if reports:
        return FusionVerdict(True, "essential_candidate_exists", reports, ag.order)
    if not ag.is_2_group:
        return FusionVerdict(True, "aut_not_2_group", reports, ag.order)
    return FusionVerdict(False, "none", reports, ag.order)


def fs_multiplicity(P, lattice=None, reports=None) -> FusionVerdict:
    """admits_nonnilpotent plus the classification match and the number of
    isomorphism classes of nonnilpotent fusion systems on P."""
    v = admits_nonnilpotent(P, lattice=lattice, reports=reports)
    if not v.admits_nonnilpotent:
        v.matched_case = None
        v.fs_count = 0
        return v
    N = P.order.bit_length() - 1
    for case, spec, count in theorem_family_specs(N):
        ref = construct_family(spec)
        if mo.isomorphic(P, ref) is not None:
            v.matched_case = {"case": case, "name": CASE_NAMES[case],
                              "spec": spec.label()}
            v.fs_count = count
            return v
    raise UnmatchedGroup(
        f"group {P.name or P.order} admits a nonnilpotent system but matches "
        f"no classification case")


# ---------------------------------------------------------------------------
# structural checks from the supporting lemmas

@dataclass
class StructuralCheck:
    subject: str
    passed: bool
    detail: str = ""


def structural_checks(P, reports=None, lattice=None):
    """Verify the normalizer / core decompositions for candidate classes.

    Checks, per rank-3 candidate Q with normalizer N and core K:
      - N / Phi(Q) is D8 x C2 or minimal nonabelian of type (2, 1);
      - K != 1, |Z(P/K)| = 2 and N/K = Q/K x Z(P/K) (internal direct);
      - Q normal implies P' cyclic;
      - Q non-normal implies normalizer type D8 x C2^m, Q16 x C2^m or
        Q16 * C2^m, never SD16 x C2^m.
    """
    if reports is None:
        reports = essential_candidates(P, lattice=lattice)
    out = []
    derived = inv.derived_subgroup(P)
    derived_cyclic = inv.is_cyclic_set(P, derived)
    for rep in reports:
        Q = rep.subgroup
        label = f"Q(order={Q.order}, rank={rep.rank})"
        N = inv.normalizer(P, Q)
        if rep.rank == 3:
            # N / Phi(Q)
            T, mapping = N.as_table()
            local = {g: k for k, g in enumerate(mapping)}
            Tq, qmap = Q.as_table()
            phi_parent = sorted({qmap[k] for k in inv.frattini_subgroup(Tq)})
            phi_local = sorted(local[g] for g in phi_parent)
            NQ, _ = quotient(T, subgroup_ref(T, phi_local, check=False))
            ok = (mo.isomorphic(NQ, reference_group("D8_x_C2m", 1)) is not None or
                  mo.isomorphic(NQ, construct_family(
                      FamilySpec("min_nonabelian", r=2, s=1))) is not None)
            out.append(StructuralCheck(f"{label}: N/Phi(Q) shape", ok,
                                       f"|N/Phi(Q)| = {NQ.order}"))
            # core decomposition
            K = inv.normal_core(P, Q)
            ok_core = K.order > 1
            out.append(StructuralCheck(f"{label}: core nontrivial", ok_core,
                                       f"|K| = {K.order}"))
            if ok_core:
                PK, proj = quotient(P, K)
                zbar = sorted(inv.center(PK))
                nbar = sorted({proj[g] for g in N.elems})
                qbar = sorted({proj[g] for g in Q.elems})
                zset, qset = set(zbar), set(qbar)
                ok_z = len(zbar) == 2
                inter = zset & qset
                prod = {PK.m(a, b) for a in qbar for b in zbar}
                ok_dp = (inter == {PK.identity} and prod == set(nbar)
                         and len(qbar) * len(zbar) == len(nbar))
                out.append(StructuralCheck(f"{label}: |Z(P/K)| = 2", ok_z,
                                           f"|Z(P/K)| = {len(zbar)}"))
                out.append(StructuralCheck(
                    f"{label}: N/K = Q/K x Z(P/K)", ok_dp))
        if rep.is_normal:
            out.append(StructuralCheck(f"{label}: normal => P' cyclic",
                                       derived_cyclic,
                                       f"|P'| = {len(derived)}"))
        else:
            tag, m = rep.normalizer_type
            allowed = tag in ("D8_x_C2m", "Q16_x_C2m", "Q16_ast_C2m")
            out.append(StructuralCheck(
                f"{label}: non-normal normalizer shape", allowed,
                f"type {tag}(m={m})"))
    return out
