"""Finite 2-groups as dense multiplication tables.

Groups of order up to 2^8 are stored as explicit multiplication tables over
element indices 0..n-1.  Family constructors build tables from normal forms;
`verify_table` validates an arbitrary square matrix as a group table.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

MAX_ORDER = 256
FORMAT_NAME = "group-table"
FORMAT_VERSION = 1

FAMILIES = (
    "cyclic",
    "homocyclic",
    "dihedral",
    "quaternion",
    "semidihedral",
    "modular",
    "wreath",
    "min_nonabelian",
    "direct_C2m_x_C2sq",
    "direct_C2m_x_Q8",
    "central_C2m_Q8",
    "janko",
)


class GroupError(Exception):
    """Base class for structured errors raised by this package."""


class NotLatin(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NotAssociative(GroupError):
    pass


class BadParameters(GroupError):
    pass


class NotCentral(GroupError):
    pass


class MatchingNotIso(GroupError):
    pass


class NotNormal(GroupError):
    pass


class NotSubgroup(GroupError):
    pass


class BadFormat(GroupError):
    pass


class BudgetExceeded(GroupError):
    pass


class RankTooHigh(GroupError):
    pass


class OutOfRange(GroupError):
    pass


class NotBicyclic(GroupError):
    pass


class UnmatchedGroup(GroupError):
    pass


class H2TooLarge(GroupError):
    pass


class GroupTable:
    """Immutable finite group given by its multiplication table.

    Attributes: order, rows (list of rows of element indices), identity,
    inv (index -> inverse index), elem_order (index -> element order).
    """

    __slots__ = ("order", "rows", "identity", "inv", "elem_order", "name", "_cache")

    def __init__(self, rows, identity, inv, elem_order, name=""):
        self.order = len(rows)
        self.rows = rows
        self.identity = identity
        self.inv = inv
        self.elem_order = elem_order
        self.name = name
        self._cache = {}

    def m(self, a, b):
        return self.rows[a][b]

    def conj(self, g, x):
        """g x g^-1."""
        return self.rows[self.rows[g][x]][self.inv[g]]

    def comm(self, a, b):
        """[a, b] = a b a^-1 b^-1 = (ab)(ba)^-1."""
        return self.rows[self.rows[a][b]][self.inv[self.rows[b][a]]]

    def power(self, g, k):
        r = self.identity
        if k < 0:
            g, k = self.inv[g], -k
        while k:
            if k & 1:
                r = self.rows[r][g]
            g = self.rows[g][g]
            k >>= 1
        return r

    @property
    def mult(self):
        return np.array(self.rows, dtype=np.int16)

    def assert_associative(self):
        """Full associativity check, vectorized; raises NotAssociative."""
        t = self.mult
        left = t[t, :]
        right = t[:, t]
        if not np.array_equal(left, right):
            a, b, c = np.argwhere(left != right)[0]
            raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})")

    def __repr__(self):
        return f"GroupTable(order={self.order}, name={self.name!r})"


def _find_identity(rows):
    n = len(rows)
    for e in range(n):
        if all(rows[e][b] == b for b in range(n)) and all(rows[a][e] == a for a in range(n)):
            return e
    raise NoIdentity("no two-sided identity element")


def _latin_check(rows):
    n = len(rows)
    full = set(range(n))
    for a in range(n):
        if set(rows[a]) != full:
            raise NotLatin(f"row {a} is not a permutation")
    for b in range(n):
        if {rows[a][b] for a in range(n)} != full:
            raise NotLatin(f"column {b} is not a permutation")


def _inverses(rows, identity):
    n = len(rows)
    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if rows[a][b] == identity:
                if rows[b][a] != identity:
                    raise NoIdentity(f"one-sided inverse for element {a}")
                inv[a] = b
                break
    return inv


def _element_orders(rows, identity):
    n = len(rows)
    out = [0] * n
    for g in range(n):
        k, x = 1, g
        while x != identity:
            x = rows[x][g]
            k += 1
        out[g] = k
    return out


def _table(rows, name="", full_check=False):
    """Build a GroupTable from rows; cheap validation unless full_check."""
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise BadFormat("table is not square")
    if n > MAX_ORDER:
        raise BadParameters(f"order {n} exceeds cap {MAX_ORDER}")
    _latin_check(rows)
    identity = _find_identity(rows)
    inv = _inverses(rows, identity)
    G = GroupTable(rows, identity, inv, _element_orders(rows, identity), name=name)
    if full_check:
        G.assert_associative()
    return G


def verify_table(raw, name=""):
    """Validate an arbitrary square matrix as a group table.

    Checks Latin square, two-sided identity, inverses, full associativity.
    Raises NotLatin / NoIdentity / NotAssociative on the first failure.
    """
    rows = [list(map(int, r)) for r in raw]
    return _table(rows, name=name, full_check=True)


def closure(G, gens):
    """Element set of the subgroup generated by gens."""
    gens = [g for g in set(gens)]
    seen = {G.identity}
    stack = [G.identity]
    rows = G.rows
    while stack:
        ra = rows[stack.pop()]
        for g in gens:
            b = ra[g]
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


@dataclass
class SubgroupRef:
    """A subgroup of a parent GroupTable, as a sorted element tuple."""

    parent: GroupTable
    elems: tuple
    _set: frozenset = field(default=None, repr=False, compare=False)

    @property
    def order(self):
        return len(self.elems)

    @property
    def elemset(self):
        if self._set is None:
            self._set = frozenset(self.elems)
        return self._set

    def __contains__(self, g):
        return g in self.elemset

    def as_table(self):
        """Return (GroupTable of this subgroup, local index -> parent index)."""
        mapping = list(self.elems)
        local = {g: k for k, g in enumerate(mapping)}
        rows = [[local[self.parent.rows[a][b]] for b in mapping] for a in mapping]
        T = _table(rows, name=f"sub{len(mapping)}")
        return T, mapping


def subgroup_ref(G, elems, check=True):
    elems = tuple(sorted(set(elems)))
    S = SubgroupRef(G, elems)
    if check:
        es = S.elemset
        if G.identity not in es:
            raise NotSubgroup("missing identity")
        if G.order % len(elems):
            raise NotSubgroup("order does not divide group order")
        for a in elems:
            if G.inv[a] not in es:
                raise NotSubgroup(f"inverse of {a} missing")
            for b in elems:
                if G.rows[a][b] not in es:
                    raise NotSubgroup(f"product {a}*{b} escapes the set")
    return S


def generated_subgroup(G, gens):
    """Subgroup generated by parent element indices gens."""
    for g in gens:
        if not 0 <= g < G.order:
            raise BadParameters(f"element index {g} out of range")
    return SubgroupRef(G, tuple(sorted(closure(G, gens))))


def trivial_subgroup(G):
    return SubgroupRef(G, (G.identity,))


def full_subgroup(G):
    return SubgroupRef(G, tuple(range(G.order)))


# ---------------------------------------------------------------------------
# family constructors

@dataclass(frozen=True)
class FamilySpec:
    """Parameters naming a concrete 2-group construction."""

    family: str
    n: int = 0
    m: int = 0
    i: int = 0
    r: int = 0
    s: int = 0
    x_sq: int = 0
    a_pow: int = 0

    def validate(self):
        f = self.family
        if f not in FAMILIES:
            raise BadParameters(f"unknown family {f!r}")
        if f == "cyclic" and not self.n >= 0:
            raise BadParameters("cyclic: need n >= 0")
        if f == "homocyclic" and not self.n >= 1:
            raise BadParameters("homocyclic: need n >= 1")
        if f in ("dihedral", "quaternion") and not self.n >= 3:
            raise BadParameters(f"{f}: need n >= 3")
        if f in ("semidihedral", "modular") and not self.n >= 4:
            raise BadParameters(f"{f}: need n >= 4")
        if f == "wreath" and not self.n >= 1:
            raise BadParameters("wreath: need n >= 1")
        if f == "min_nonabelian" and not self.r >= self.s >= 1:
            raise BadParameters("min_nonabelian: need r >= s >= 1")
        if f in ("direct_C2m_x_C2sq", "direct_C2m_x_Q8") and not self.m >= 1:
            raise BadParameters(f"{f}: need m >= 1")
        if f == "central_C2m_Q8" and not self.m >= 2:
            raise BadParameters("central_C2m_Q8: need m >= 2")
        if f == "janko":
            n, m, i = self.n, self.m, self.i
            if not (n >= 2 and m >= 1):
                raise BadParameters("janko: need n >= 2, m >= 1")
            if not max(2, n - m + 1) <= i <= n:
                raise BadParameters("janko: need max(2, n-m+1) <= i <= n")
            if self.x_sq not in (0, 1) or self.a_pow not in (0, 1):
                raise BadParameters("janko: x_sq and a_pow must be 0 or 1")
        order = self.order()
        if order > MAX_ORDER:
            raise BadParameters(f"order {order} exceeds cap {MAX_ORDER}")

    def order(self):
        f = self.family
        if f == "cyclic":
            return 1 << self.n
        if f == "homocyclic":
            return 1 << (2 * self.n)
        if f in ("dihedral", "quaternion", "semidihedral", "modular"):
            return 1 << self.n
        if f == "wreath":
            return 1 << (2 * self.n + 1)
        if f == "min_nonabelian":
            return 1 << (self.r + self.s + 1)
        if f == "direct_C2m_x_C2sq":
            return 1 << (self.m + 2)
        if f == "direct_C2m_x_Q8":
            return 1 << (self.m + 3)
        if f == "central_C2m_Q8":
            return 1 << (self.m + 2)
        if f == "janko":
            return 1 << (self.n + self.m + 1)
        raise BadParameters(f"unknown family {f!r}")

    def label(self):
        f = self.family
        if f in ("cyclic", "homocyclic", "dihedral", "quaternion", "semidihedral",
                 "modular", "wreath"):
            return f"{f}(n={self.n})"
        if f == "min_nonabelian":
            return f"min_nonabelian(r={self.r},s={self.s})"
        if f == "janko":
            return (f"janko(n={self.n},m={self.m},i={self.i},"
                    f"x_sq={self.x_sq},a_pow={self.a_pow})")
        return f"{f}(m={self.m})"


def _cyclic_rows(N):
    return [[(a + b) % N for b in range(N)] for a in range(N)]


def _dihedral_like_rows(n, twist, x_sq_half):
    """<v, x | v^{2^{n-1}}, x^2 = v^{x_sq_half * 2^{n-2}}, x v x^-1 = v^twist>.

    Element (e, f) -> v^e x^f at index 2*e + f.
    """
    vN = 1 << (n - 1)
    sq = (x_sq_half * (vN >> 1)) % vN
    idx = lambda e, f: 2 * (e % vN) + f
    rows = []
    for e1 in range(vN):
        for f1 in range(2):
            row = [0] * (2 * vN)
            for e2 in range(vN):
                for f2 in range(2):
                    e = e1 + (e2 * twist if f1 else e2)
                    f = f1 + f2
                    if f == 2:
                        e, f = e + sq, 0
                    row[idx(e2, f2)] = idx(e, f)
            rows.append(row)
    return rows


def _pair_rows(rowsA, rowsB):
    nA, nB = len(rowsA), len(rowsB)
    out = []
    for a in range(nA):
        ra = rowsA[a]
        for b in range(nB):
            rb = rowsB[b]
            out.append([ra[c] * nB + rb[d] for c in range(nA) for d in range(nB)])
    return out


def _wreath_rows(n):
    """C_{2^n} wr C_2: base pair (a, b), swap bit f; index ((a << n) + b)*2 + f."""
    N = 1 << n
    idx = lambda a, b, f: (((a % N) << n) + (b % N)) * 2 + f
    elems = [(a, b, f) for a in range(N) for b in range(N) for f in range(2)]
    rows = []
    for a1, b1, f1 in elems:
        row = [0] * (2 * N * N)
        for a2, b2, f2 in elems:
            c, d = (b2, a2) if f1 else (a2, b2)
            row[idx(a2, b2, f2)] = idx(a1 + c, b1 + d, f1 ^ f2)
        rows.append(row)
    return rows


def _min_nonabelian_rows(r, s):
    """<x, y | x^{2^r} = y^{2^s} = z^2 = 1, [x, y] = z central>."""
    R, S = 1 << r, 1 << s
    idx = lambda i, j, k: ((i % R) * S + (j % S)) * 2 + (k % 2)
    rows = []
    for i1 in range(R):
        for j1 in range(S):
            for k1 in range(2):
                row = [0] * (2 * R * S)
                for i2 in range(R):
                    for j2 in range(S):
                        for k2 in range(2):
                            row[idx(i2, j2, k2)] = idx(i1 + i2, j1 + j2,
                                                       k1 + k2 + j1 * i2)
                rows.append(row)
    return rows


def _janko_rows(n, m, i, x_sq, a_pow):
    """Normal form v^e x^f a^g, index ((e*2)+f)*2^m + g, collected via
    a^g v = v^{s^g} a^g and a^g x = v^{c_g} x a^g with s = -1 + 2^i."""
    vN, aN = 1 << n, 1 << m
    z = vN >> 1
    s = (-1 + (1 << i)) % vN
    spow = [1] * aN
    for g in range(1, aN):
        spow[g] = spow[g - 1] * s % vN
    c = [0] * aN
    for g in range(1, aN):
        c[g] = (1 + s * c[g - 1]) % vN
    idx = lambda e, f, g: ((e % vN) * 2 + f) * aN + g
    elems = [(e, f, g) for e in range(vN) for f in range(2) for g in range(aN)]

    def mul(e1, f1, g1, e2, f2, g2):
        # times v^{e2}
        sign = -1 if f1 else 1
        e = e1 + sign * e2 * spow[g1]
        f, g = f1, g1
        # times x^{f2}
        if f2:
            e += (-1 if f else 1) * c[g]
            f += 1
            if f == 2:
                e, f = e + x_sq * z, 0
        # times a^{g2}
        g += g2
        if g >= aN:
            g -= aN
            e += a_pow * z
        return idx(e, f, g)

    rows = []
    for e1, f1, g1 in elems:
        rows.append([mul(e1, f1, g1, e2, f2, g2) for e2, f2, g2 in elems])
    return rows, idx


def _spot_check(G, relations):
    for lhs, rhs, what in relations:
        if lhs != rhs:
            raise NotAssociative(f"relation failed in builder: {what}")


def construct_family(spec: FamilySpec) -> GroupTable:
    """Build the group table named by spec.  Raises BadParameters."""
    spec.validate()
    f = spec.family
    name = spec.label()
    if f == "cyclic":
        return _table(_cyclic_rows(1 << spec.n), name=name)
    if f == "homocyclic":
        N = 1 << spec.n
        return _table(_pair_rows(_cyclic_rows(N), _cyclic_rows(N)), name=name)
    if f == "dihedral":
        return _table(_dihedral_like_rows(spec.n, -1, 0), name=name)
    if f == "quaternion":
        return _table(_dihedral_like_rows(spec.n, -1, 1), name=name)
    if f == "semidihedral":
        return _table(_dihedral_like_rows(spec.n, -1 + (1 << (spec.n - 2)), 0), name=name)
    if f == "modular":
        return _table(_dihedral_like_rows(spec.n, 1 + (1 << (spec.n - 2)), 0), name=name)
    if f == "wreath":
        return _table(_wreath_rows(spec.n), name=name)
    if f == "min_nonabelian":
        return _table(_min_nonabelian_rows(spec.r, spec.s), name=name)
    if f == "direct_C2m_x_C2sq":
        A = construct_family(FamilySpec("cyclic", n=spec.m))
        B = construct_family(FamilySpec("homocyclic", n=1))
        G = product(A, B, kind="direct")
        G.name = name
        return G
    if f == "direct_C2m_x_Q8":
        A = construct_family(FamilySpec("cyclic", n=spec.m))
        B = construct_family(FamilySpec("quaternion", n=3))
        G = product(A, B, kind="direct")
        G.name = name
        return G
    if f == "central_C2m_Q8":
        A = construct_family(FamilySpec("cyclic", n=spec.m))
        B = construct_family(FamilySpec("quaternion", n=3))
        zA = A.power(1, 1 << (spec.m - 1))        # order-2 element of C_{2^m}
        zB = [g for g in range(B.order) if B.elem_order[g] == 2][0]
        G = product(A, B, kind="central",
                    zG=generated_subgroup(A, [zA]), zH=generated_subgroup(B, [zB]),
                    matching={A.identity: B.identity, zA: zB})
        G.name = name
        return G
    # janko
    n, m, i = spec.n, spec.m, spec.i
    rows, idx = _janko_rows(n, m, i, spec.x_sq, spec.a_pow)
    G = _table(rows, name=name)
    v, x, a = idx(1, 0, 0), idx(0, 1, 0), idx(0, 0, 1)
    z = idx(1 << (n - 1), 0, 0)
    vN = 1 << n
    _spot_check(G, [
        (G.power(v, vN), G.identity, "v^{2^n} = 1"),
        (G.m(x, x), G.power(z, spec.x_sq), "x^2 = z^x_sq"),
        (G.power(a, 1 << m), G.power(z, spec.a_pow), "a^{2^m} = z^a_pow"),
        (G.conj(x, v), G.inv[v], "x v x^-1 = v^-1"),
        (G.conj(a, v), G.power(v, -1 + (1 << i)), "a v a^-1 = v^{-1+2^i}"),
        (G.conj(a, x), G.m(v, x), "a x a^-1 = v x"),
    ])
    return G


def construct(family, **params) -> GroupTable:
    return construct_family(FamilySpec(family, **params))


# ---------------------------------------------------------------------------
# products and quotients

def product(G, H, kind="direct", zG=None, zH=None, matching=None):
    """Direct or central product of two tables.

    central: zG <= Z(G) and zH <= Z(H) are identified via matching (a parent
    element bijection that must be an isomorphism); the result is
    (G x H) / {(g, matching[g]^-1)}.
    """
    if kind == "direct":
        T = _table(_pair_rows(G.rows, H.rows), name=f"({G.name})x({H.name})")
        return T
    if kind != "central":
        raise BadParameters(f"unknown product kind {kind!r}")
    if zG is None or zH is None or matching is None:
        raise BadParameters("central product needs zG, zH, matching")
    for g in zG.elems:
        if any(G.m(g, t) != G.m(t, g) for t in range(G.order)):
            raise NotCentral(f"element {g} of zG is not central in G")
    for h in zH.elems:
        if any(H.m(h, t) != H.m(t, h) for t in range(H.order)):
            raise NotCentral(f"element {h} of zH is not central in H")
    if set(matching) != set(zG.elems) or set(matching.values()) != set(zH.elems):
        raise MatchingNotIso("matching is not a bijection zG -> zH")
    for a in zG.elems:
        for b in zG.elems:
            if matching[G.m(a, b)] != H.m(matching[a], matching[b]):
                raise MatchingNotIso("matching is not a homomorphism")
    D = _table(_pair_rows(G.rows, H.rows))
    nH = H.order
    anti = [g * nH + H.inv[matching[g]] for g in zG.elems]
    N = subgroup_ref(D, anti)
    Q, _ = quotient(D, N)
    Q.name = f"({G.name})*({H.name})"
    return Q


def quotient(G, N: SubgroupRef):
    """Quotient table G/N together with the projection list.

    Raises NotNormal if N is not normal in G.
    """
    es = N.elemset
    for g in range(G.order):
        for h in N.elems:
            if G.conj(g, h) not in es:
                raise NotNormal(f"conjugate of {h} by {g} escapes N")
    proj = [-1] * G.order
    reps = []
    for g in range(G.order):
        if proj[g] < 0:
            cid = len(reps)
            reps.append(g)
            for h in N.elems:
                proj[G.m(g, h)] = cid
    k = len(reps)
    rows = [[proj[G.m(reps[a], reps[b])] for b in range(k)] for a in range(k)]
    Q = _table(rows, name=f"({G.name})/N{len(es)}")
    return Q, proj


# ---------------------------------------------------------------------------
# serialization

def group_to_dict(G, labels=None):
    d = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "order": G.order,
        "mult": [v for row in G.rows for v in row],
    }
    if G.name:
        d["name"] = G.name
    if labels is not None:
        if len(labels) != G.order:
            raise BadFormat("labels length must equal order")
        d["labels"] = list(labels)
    return d


def dict_to_group(d, check=True):
    if not isinstance(d, dict) or d.get("format") != FORMAT_NAME:
        raise BadFormat("not a group-table document")
    if d.get("version") != FORMAT_VERSION:
        raise BadFormat(f"unsupported version {d.get('version')!r}")
    n = d["order"]
    flat = d["mult"]
    if len(flat) != n * n:
        raise BadFormat("mult length must be order^2")
    rows = [flat[a * n:(a + 1) * n] for a in range(n)]
    if check:
        return verify_table(rows, name=d.get("name", ""))
    return _table(rows, name=d.get("name", ""))


def save_group(G, path, labels=None):
    with open(path, "w") as fh:
        json.dump(group_to_dict(G, labels=labels), fh)
        fh.write("\n")


def load_group(path, check=True):
    with open(path) as fh:
        return dict_to_group(json.load(fh), check=check)
