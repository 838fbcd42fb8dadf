"""Command-line surface: every operation, machine-readable output.

Structured JSON is the default output; --pretty switches to human tables.
Exit codes: 0 success, 1 domain error, 2 usage error, 3 integrity failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import datasets
from .datasets import DatasetError
from .invariants import deduce, lspace_cable, lspace_knot_invariants, sl_upper_bound
from .knots import Cable, KnotError, format_knot, genus, parse_knot
from .slopes import SlopeError, format_cf, neg_cf, parse_slope, triad
from .surgery import (
    DimensionError,
    IntegrityError,
    Surgery,
    census_dim,
    homeo_identities,
    manifold_dim,
    parse_manifold,
)
from .values import Inconsistency
from .verify import (
    check_census,
    check_identities,
    check_integer_surgery_table,
    check_spectral,
    rederive_nu_tau,
    rederive_r0,
    verify_all,
)


def emit(obj, pretty: bool):
    if pretty:
        print(_pretty(obj))
    else:
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _pretty(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in obj:
            v = obj[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(
            _pretty(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}"
            for v in obj)
    return f"{pad}{obj}"


def _bundle_json(b, trace: bool):
    out = b.to_json()
    if trace:
        out["trace"] = [t.to_json() for t in b.trace]
    return out


def cmd_dim(args, ds):
    m = parse_manifold(args.manifold)
    result = manifold_dim(m, ds)
    out = result.to_json()
    out["manifold"] = str(m)
    if not args.graded:
        out.pop("graded", None)
    if args.trace and isinstance(m, Surgery):
        b = deduce(m.knot, ds)
        out["trace"] = [t.to_json() for t in b.trace]
    emit(out, args.pretty)


def cmd_invariants(args, ds):
    k = parse_knot(args.knot)
    b = deduce(k, ds)
    out = _bundle_json(b, args.trace)
    bound, violation = sl_upper_bound(k, ds)
    if bound is not None:
        out["sl_max_bound"] = int(bound) if bound.denominator == 1 else [bound.numerator, bound.denominator]
        if violation:
            out["sl_max_violation"] = True
    emit(out, args.pretty)


def cmd_triad(args, ds):
    s = parse_slope(args.slope)
    t = triad(s)
    emit({"slope": str(s), "cf": format_cf(neg_cf(s)), "ab": str(t.ab),
          "cd": str(t.cd), "ef": str(t.ef), "sum_case": t.sum_case}, args.pretty)


def cmd_cf(args, ds):
    s = parse_slope(args.slope)
    emit({"slope": str(s), "cf": format_cf(neg_cf(s))}, args.pretty)


def cmd_cable(args, ds):
    k = parse_knot(args.knot)
    cable = Cable(args.p, args.q, k)
    status = lspace_cable(args.p, args.q, k, ds)
    out = {"cable": format_knot(cable),
           "lspace": status,
           "genus": genus(cable, ds).to_json()}
    if status:
        nu, r0 = lspace_knot_invariants(cable, ds)
        out.update({"nu": nu, "r0": r0})
    emit(out, args.pretty)


def cmd_sum(args, ds):
    summands = [parse_knot(t) for t in args.knots]
    from .knots import make_sum
    k = make_sum(summands)
    b = deduce(k, ds)
    emit(_bundle_json(b, args.trace), args.pretty)


def cmd_census(args, ds):
    if args.index == "all":
        rows = []
        for i in range(20):
            entry = ds.lookup("T2", i)
            out = census_dim(i, ds).to_json()
            out.update({"index": i, "name": entry.payload["name"]})
            rows.append(out)
        emit(rows, args.pretty)
        return
    i = int(args.index)
    entry = ds.lookup("T2", i)
    out = census_dim(i, ds).to_json()
    out.update({"index": i, "name": entry.payload["name"]})
    emit(out, args.pretty)


def cmd_dcover(args, ds):
    from .surgery import branched_cover_dim
    k = parse_knot(args.knot)
    out = branched_cover_dim(k, ds).to_json()
    out["manifold"] = f"dcover({format_knot(k)})"
    emit(out, args.pretty)


def cmd_verify(args, ds):
    target = args.target
    if target == "all":
        report = verify_all(ds)
    elif target == "identities":
        report = check_identities(ds)
    elif target == "T3":
        report = rederive_nu_tau(ds)
    elif target == "T1":
        _, report = rederive_r0(ds)
    elif target == "T4":
        report = check_integer_surgery_table(ds)
    elif target in ("T2", "T6", "T7", "T8"):
        full = check_census(ds)
        report = type(full)()
        report.cells = [c for c in full.cells if c.section == target]
    elif target == "T5":
        report = check_spectral(ds)
    else:
        raise DatasetError(f"nothing to verify for {target!r}")
    if args.pretty:
        for c in report.cells:
            print(c.line())
        print(f"{report.passed}/{len(report.cells)} passed")
    else:
        emit(report.to_json(), False)
    if report.failed:
        sys.exit(3)


def cmd_identities(args, ds):
    k = parse_knot(args.knot)
    s = parse_slope(args.slope)
    rows = [{"knot": format_knot(rk), "slope": str(rs)}
            for rk, rs in homeo_identities(k, s, ds)]
    emit(rows, args.pretty)


def cmd_export(args, ds):
    sys.stdout.write(ds.export_tsv(args.table))


def build_parser():
    ap = argparse.ArgumentParser(
        prog="isharp",
        description="Exact dimensions of framed instanton homology for "
                    "surgeries, branched double covers, and census manifolds.")
    ap.add_argument("--data", help="path to an alternate record file")
    ap.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="dimension of a manifold description")
    p.add_argument("manifold", help='e.g. "surg(6_2; -9/1)", "lens(9,2)", '
                                    '"dcover(9_49)", "census(7)"')
    p.add_argument("--graded", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("invariants", help="deduced invariants of a knot")
    p.add_argument("knot")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("triad", help="surgery triad of a slope")
    p.add_argument("slope")
    p.set_defaults(func=cmd_triad)

    p = sub.add_parser("cf", help="negative continued fraction of a slope")
    p.add_argument("slope")
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("cable", help="is the (p,q)-cable an instanton L-space knot")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("knot")
    p.set_defaults(func=cmd_cable)

    p = sub.add_parser("sum", help="invariants of a connected sum")
    p.add_argument("knots", nargs="+")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("census", help="census manifold dimension")
    p.add_argument("index", help="0..19 or 'all'")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("dcover", help="branched double cover dimension")
    p.add_argument("knot")
    p.set_defaults(func=cmd_dcover)

    p = sub.add_parser("verify", help="re-derive table cells and cross-checks")
    p.add_argument("target", nargs="?", default="all",
                   choices=["all", "identities", "T1", "T2", "T3", "T4",
                            "T5", "T6", "T7", "T8"])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identities", help="registered surgery re-descriptions")
    p.add_argument("knot")
    p.add_argument("slope")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("export", help="tab-separated dump of a table")
    p.add_argument("table", choices=["T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8"])
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        ds = datasets.load(args.data) if args.data else datasets.default()
        args.func(args, ds)
    except (IntegrityError, DatasetError) as e:
        print(f"integrity error: {e}", file=sys.stderr)
        return 3
    except (KnotError, SlopeError, DimensionError, Inconsistency, KeyError,
            ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
