"""Cyclotomic values at 2 and exponents of the relevant simple groups.

Used for the divisibility obstructions that bound which simple groups can
appear as sections of small 2-rank groups.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm

from .core import BadParameters, OutOfRange


@lru_cache(maxsize=None)
def phi_at_2(d):
    """Value of the d-th cyclotomic polynomial at 2, by divisor recursion:
    prod_{e | d} Phi_e(2) = 2^d - 1."""
    if d < 1:
        raise BadParameters("need d >= 1")
    v = (1 << d) - 1
    for e in range(1, d):
        if d % e == 0:
            v //= phi_at_2(e)
    return v


def euler_phi(n):
    out = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


def gl2_exponent(r):
    """exp GL(r, 2) = 2^ceil(log2 r) * lcm{2^i - 1 : i <= r}."""
    if r < 1:
        raise OutOfRange("need r >= 1")
    two_part = 1
    while two_part < r:
        two_part *= 2
    return two_part * lcm(*[(1 << i) - 1 for i in range(1, r + 1)])


def sl2_exponent(n):
    """exp SL(2, 2^n) = 2 (2^{2n} - 1)."""
    if n < 1:
        raise OutOfRange("need n >= 1")
    return 2 * ((1 << (2 * n)) - 1)


def suzuki_exponent(n):
    """exp Sz(2^{2n-1}) = 4 (2^{2n-1} - 1) (2^{4n-2} + 1), n >= 2."""
    if n < 2:
        raise OutOfRange("need n >= 2")
    q = 1 << (2 * n - 1)
    return 4 * (q - 1) * (q * q + 1)


def psu3_exponent_divisor(n):
    """(2^{2n} - 2^n + 1) / gcd(2^n + 1, 3) divides exp PSU(3, 2^n)."""
    if n < 1:
        raise OutOfRange("need n >= 1")
    q = 1 << n
    return (q * q - q + 1) // gcd(q + 1, 3)


@dataclass
class ExponentFormula:
    group: str
    parameter: int
    exponent: int


def group_exponent(kind, n) -> ExponentFormula:
    if kind == "GL2":
        return ExponentFormula("GL2", n, gl2_exponent(n))
    if kind == "SL2":
        return ExponentFormula("SL2", n, sl2_exponent(n))
    if kind == "Sz":
        return ExponentFormula("Sz", n, suzuki_exponent(n))
    if kind == "PSU3":
        return ExponentFormula("PSU3", n, psu3_exponent_divisor(n))
    raise BadParameters(f"unknown group kind {kind!r}")


# ---------------------------------------------------------------------------
# section bounds

def _odd_lcm(r):
    return lcm(*[(1 << i) - 1 for i in range(1, r + 1)])


_FAMILY_SCANS = {
    # bound(n) <= r; odd divisor forced into adjust(n) * lcm{2^i-1 : i <= r}
    "SL2": {
        "n_min": 1,
        "bound": lambda n: 2 * n,
        "divisor": lambda n: (1 << (2 * n)) - 1,
        "adjust": lambda n: 1,
    },
    "Sz": {
        "n_min": 2,
        "bound": lambda n: 8 * n - 4,
        "divisor": lambda n: (1 << (4 * n - 2)) + 1,
        "adjust": lambda n: 1,
    },
    "PSU3": {
        "n_min": 2,
        "bound": lambda n: 6 * n,
        "divisor": lambda n: (1 << (2 * n)) - (1 << n) + 1,
        "adjust": lambda n: gcd((1 << n) + 1, 3),
    },
}


def section_bound_verify(family="all", r_max=24):
    """Confirm the divisibility obstructions behind the section bounds.

    A section SL(2, 2^n) of GL(r, 2) forces n <= r/2, Sz(2^{2n-1}) forces
    4n - 2 <= r/2, and PSU(3, 2^n) forces 3n <= r/2.  For each parameter n
    violating the stated bound, the family's odd factor must NOT divide the
    (gcd-adjusted) lcm{2^i - 1 : i <= r}; any violating n that still divides
    is reported as a failure.

    Returns {"r_max", "families": {family: per-r scan}, "failures": [...]}.
    """
    if r_max > 64:
        raise OutOfRange("need r_max <= 64")
    fams = list(_FAMILY_SCANS) if family == "all" else [family]
    for f in fams:
        if f not in _FAMILY_SCANS:
            raise BadParameters(f"unknown family {f!r}")
    report = {"r_max": r_max, "families": {}, "failures": []}
    for f in fams:
        scan = _FAMILY_SCANS[f]
        rows = []
        for r in range(1, r_max + 1):
            L = _odd_lcm(r)
            checked = []
            largest_dividing = None
            n = scan["n_min"]
            while scan["bound"](n) <= 2 * r:
                divides = (scan["adjust"](n) * L) % scan["divisor"](n) == 0
                within_bound = scan["bound"](n) <= r
                if divides:
                    largest_dividing = n
                if not within_bound:
                    checked.append({"n": n, "obstructed": not divides})
                    if divides:
                        report["failures"].append({"family": f, "r": r, "n": n})
                n += 1
            rows.append({"r": r, "violating_checked": checked,
                         "largest_non_obstructed": largest_dividing})
        report["families"][f] = rows
    return report


def cyclotomic_identity_holds(i_max=64):
    """prod_{d | i} Phi_d(2) = 2^i - 1 for all i <= i_max."""
    for i in range(1, i_max + 1):
        prod = 1
        for d in range(1, i + 1):
            if i % d == 0:
                prod *= phi_at_2(d)
        if prod != (1 << i) - 1:
            return False
    return True


def phi_lower_bounds_hold(n_max=21):
    """Phi_{2n}(2) > 1 for n <= n_max, and Phi_{6n}(2) > 2^{phi(6n)} / 2
    for odd n with 3 <= n <= n_max."""
    for n in range(1, n_max + 1):
        if phi_at_2(2 * n) <= 1:
            return False
    for n in range(3, n_max + 1, 2):
        if 2 * phi_at_2(6 * n) <= (1 << euler_phi(6 * n)):
            return False
    return True
