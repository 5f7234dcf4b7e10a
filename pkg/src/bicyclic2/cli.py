"""Command line interface.

Subcommands: construct, analyze, subgroups, essential, fusion, census,
count, verify, numtheory.  Reports are emitted as a JSON envelope (or a
plain-text rendering); exit code 0 = pass, 1 = violations found, 2 = usage
or input error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time

from .core import (FamilySpec, GroupError, construct_family, load_group,
                   save_group)
from . import census as cen
from . import fusion
from . import invariants as inv
from . import morphisms as mo
from . import numtheory as nt
from . import subgroups as sg

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _family_parser(p):
    p.add_argument("--group", help="path to a group file")
    p.add_argument("--family", choices=sorted(
        ("cyclic", "homocyclic", "dihedral", "quaternion", "semidihedral",
         "modular", "wreath", "min_nonabelian", "direct_C2m_x_C2sq",
         "direct_C2m_x_Q8", "central_C2m_Q8", "janko")))
    p.add_argument("--order", type=int, help="group order 2^k, for families "
                   "parameterized by their order")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--xsq", type=int, default=0)
    p.add_argument("--apow", type=int, default=0)


def _common(p):
    p.add_argument("--format", choices=("text", "json"), default="json")


def build_parser():
    ap = argparse.ArgumentParser(prog="bicyclic2")
    sub = ap.add_subparsers(dest="command")
    for name in ("construct", "analyze", "subgroups", "essential", "fusion"):
        p = sub.add_parser(name)
        _family_parser(p)
        _common(p)
        if name == "construct":
            p.add_argument("--out", help="output group file path")
        p.add_argument("--budget", type=int, default=sg.DEFAULT_BUDGET)
    for name in ("census", "count", "verify"):
        p = sub.add_parser(name)
        p.add_argument("--max-order", type=int, required=True,
                       help="maximum order exponent N (orders up to 2^N)")
        p.add_argument("--cache", help="cache directory")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--budget", type=int, default=sg.DEFAULT_BUDGET)
        _common(p)
    p = sub.add_parser("numtheory")
    p.add_argument("--family", choices=("all", "SL2", "Sz", "PSU3"),
                   default="all")
    p.add_argument("--r-max", type=int, default=24)
    _common(p)
    return ap


def _spec_from_args(args):
    if args.family is None:
        raise UsageError("need --family (or --group for reading commands)")
    kw = {}
    order_families = ("cyclic", "dihedral", "quaternion", "semidihedral",
                      "modular")
    n = args.n
    if n is None and args.order is not None:
        if args.family in order_families:
            k = args.order.bit_length() - 1
            if 1 << k != args.order:
                raise UsageError(f"--order {args.order} is not a power of 2")
            n = k
        else:
            raise UsageError("--order only applies to order-parameterized "
                             "families; use the family parameters instead")
    for key, val in (("n", n), ("m", args.m), ("i", args.i),
                     ("r", args.r), ("s", args.s),
                     ("x_sq", args.xsq), ("a_pow", args.apow)):
        if val is not None:
            kw[key] = val
    return FamilySpec(args.family, **kw)


def _load_or_construct(args):
    if getattr(args, "group", None):
        return load_group(args.group)
    return construct_family(_spec_from_args(args))


def _to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        d = {}
        for f in dataclasses.fields(obj):
            if f.name in ("parent", "table", "local_table", "group",
                          "source", "target"):
                continue
            d[f.name] = _to_jsonable(getattr(obj, f.name))
        return d
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return repr(obj)


def _report_reports(reports):
    return [{
        "subgroup_order": r.subgroup.order,
        "class_size": r.class_size,
        "rank": r.rank,
        "conditions": r.conditions,
        "is_normal": r.is_normal,
        "iso_type": {"tag": r.iso_type[0], "m": r.iso_type[1]},
        "normalizer_type": {"tag": r.normalizer_type[0],
                            "m": r.normalizer_type[1]},
    } for r in reports]


def run_command(args):
    """Execute one subcommand; returns (results dict, violations list)."""
    cmd = args.command
    if cmd == "construct":
        G = _load_or_construct(args)
        out = args.out or "group.json"
        save_group(G, out)
        return {"order": G.order, "name": G.name, "file": out}, []
    if cmd == "analyze":
        G = _load_or_construct(args)
        return {
            "order": G.order,
            "name": G.name,
            "invariants": _to_jsonable(inv.structural_invariants(G)),
            "shape": _to_jsonable(inv.classify_shape(G)),
        }, []
    if cmd == "subgroups":
        G = _load_or_construct(args)
        lat = sg.all_subgroups(G, budget=args.budget)
        return {
            "order": G.order,
            "subgroup_count": lat.count(),
            "by_order": {str(k): len(v) for k, v in lat.by_order.items()},
            "class_count": len(lat.classes),
        }, []
    if cmd == "essential":
        G = _load_or_construct(args)
        reports = fusion.essential_candidates(G, budget=args.budget)
        return {"order": G.order, "candidate_class_count": len(reports),
                "candidates": _report_reports(reports)}, []
    if cmd == "fusion":
        G = _load_or_construct(args)
        v = fusion.fs_multiplicity(G)
        return {
            "order": G.order,
            "admits_nonnilpotent": v.admits_nonnilpotent,
            "reason": v.reason,
            "aut_order": v.aut_order,
            "matched_case": v.matched_case,
            "fs_count": v.fs_count,
            "candidates": _report_reports(v.candidate_classes),
        }, []
    if cmd in ("census", "count", "verify"):
        census = cen.bicyclic_census(args.max_order, cache_dir=args.cache,
                                     budget=args.budget, jobs=args.jobs)
        if cmd == "census":
            rows = []
            for o in sorted(census):
                for rec in census[o]:
                    rows.append({
                        "order": o,
                        "index": rec.index,
                        "matched_family": rec.matched_family,
                        "admits_nonnilpotent":
                            rec.verdict.admits_nonnilpotent,
                        "fs_count": rec.verdict.fs_count,
                        "fingerprint": rec.fingerprint_hash(),
                    })
            return {"records": rows}, []
        if cmd == "count":
            return {"table": cen.count_table(census)}, []
        violations = cen.verify_suite(census)
        return {"counts": cen.count_table(census),
                "checks_passed": not violations}, violations
    if cmd == "numtheory":
        rep = nt.section_bound_verify(family=args.family, r_max=args.r_max)
        results = {
            "cyclotomic_identity": nt.cyclotomic_identity_holds(64),
            "phi_lower_bounds": nt.phi_lower_bounds_hold(21),
            "section_bounds": {
                f: {"rows": len(rows)} for f, rows in rep["families"].items()
            },
        }
        violations = [{"check": "section_bound", **f} for f in rep["failures"]]
        if not results["cyclotomic_identity"]:
            violations.append({"check": "cyclotomic_identity"})
        if not results["phi_lower_bounds"]:
            violations.append({"check": "phi_lower_bounds"})
        return results, violations
    raise UsageError(f"unknown command {cmd!r}")


def render_text(env):
    lines = [f"command: {env['command']}  status: {env['status']}  "
             f"({env['timing_seconds']:.2f}s)"]
    lines.append(json.dumps(env["results"], indent=2, default=str))
    for v in env["violations"]:
        lines.append(f"VIOLATION: {v}")
    return "\n".join(lines)


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command is None:
        ap.print_usage(sys.stderr)
        return 2
    t0 = time.time()
    try:
        results, violations = run_command(args)
    except (UsageError, GroupError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    env = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "inputs": {k: v for k, v in vars(args).items()
                   if k != "command" and v is not None},
        "results": results,
        "violations": violations,
        "status": "fail" if violations else "pass",
        "timing_seconds": time.time() - t0,
    }
    if getattr(args, "format", "json") == "text":
        print(render_text(env))
    else:
        print(json.dumps(env, indent=1, default=str))
    return 1 if violations else 0


if __name__ == "__main__":
    sys.exit(main())
