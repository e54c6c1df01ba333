"""Command-line front end (``kht``).

Exit codes: 0 ok, 1 usage or input error, 2 computation error, 3 a theorem,
Phi or regression check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .complex import BN, build_complex
from .diagram import DiagramError, TableError, load_table, parse_pd, torus_knot
from .oracle import UnsupportedFieldError, bn_profile, lee_profile, verify_phi, verify_theorem
from .reduce import PIVOT_HEURISTICS
from .ring import parse_field
from .scan import SCAN_ORDERS, scan_build
from .torsion import format_laurent, graded_euler, khovanov_betti, page_betti, page_count

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_CHECK = 0, 1, 2, 3
CSV_COLUMNS = ["name", "field", "reduced", "xo", "pages", "free_count", "max_k", "seconds"]
COMMANDS = ("torsion", "pages", "betti", "euler", "verify", "phi", "batch")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _field_arg(text):
    try:
        return parse_field(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _default_jobs():
    raw = os.environ.get("KHT_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--pd", help="planar diagram, e.g. 'PD[X[1,5,2,4],...]' ('PD[]' is the unknot)")
    src.add_argument("--torus", nargs=2, type=int, metavar=("P", "Q"), help="torus knot T(p,q)")
    src.add_argument("--table", help="knot table file (name,PD[,field=xo...] per line)")
    common.add_argument("--field", action="append", type=_field_arg, dest="fields",
                        help="q, f2, f3, f5, f7 or f<p>; repeatable (default q)")
    red = common.add_mutually_exclusive_group()
    red.add_argument("--reduced", dest="reduced", action="store_true", default=None)
    red.add_argument("--unreduced", dest="reduced", action="store_false")
    common.add_argument("--basepoint", type=int, help="edge label carrying the basepoint")
    common.add_argument("--scan", action="store_true", help="build the Bar-Natan side by scanning")
    common.add_argument("--scan-order", choices=SCAN_ORDERS, default="pd")
    common.add_argument("--pivot-heuristic", choices=PIVOT_HEURISTICS, default="markowitz")
    common.add_argument("--page", type=int, default=None, help="betti: dimensions of page E_r")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default $KHT_JOBS or 1)")
    common.add_argument("--strict", action="store_true",
                        help="fail on bad table lines and on regression mismatches")

    p = _Parser(prog="kht", description="X-torsion order and Bar-Natan page counts of knots.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "torsion": "X-torsion order (Lee side in odd characteristic) and page count",
        "pages": "page count of the reduced Bar-Natan spectral sequence",
        "betti": "Khovanov (or page E_r) dimensions by bidegree",
        "euler": "graded Euler characteristic of the complex",
        "verify": "check xo = pages - 1 with the two pipelines run separately",
        "phi": "check the ring map between the Bar-Natan and Lee Frobenius systems",
        "batch": "torsion over a table, comparing against expected columns",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return p


def _items(args):
    """[(name, diagram, expected_xo, expected_pages)] from the knot source."""
    try:
        if args.pd is not None:
            d = parse_pd(args.pd)
            items = [(args.pd.strip() if d.n_crossings else "unknot", d, {}, {})]
        elif args.torus is not None:
            p, q = args.torus
            items = [(f"T({p},{q})", torus_knot(p, q), {}, {})]
        elif args.table is not None:
            items = [(e.name, e.pd, e.expected_xo, e.expected_pages)
                     for e in load_table(args.table, strict=args.strict)]
        else:
            raise UsageError("one of --pd, --torus or --table is required")
        if args.basepoint is not None:
            items = [(n, d.with_basepoint(args.basepoint), x, pg) for n, d, x, pg in items]
    except (DiagramError, TableError, OSError) as exc:
        raise UsageError(str(exc)) from None
    return items


def _profile_row(name, f, prof, xo, pages, seconds):
    return {"knot": name, "field": f.name, "reduced": prof.reduced,
            "free": [list(x) for x in prof.free], "pairs": [list(x) for x in prof.pairs],
            "xo": xo, "pages": pages,
            "_csv": [name, f.name, prof.reduced, xo, pages, len(prof.free), prof.max_k,
                     f"{seconds:.3f}"]}


def _bn(d, f, opts, reduced=True):
    return bn_profile(d, f, reduced=reduced, scan=opts["scan"], heuristic=opts["heuristic"],
                      order=opts["order"])


def _torsion(name, d, f, opts):
    t0 = time.perf_counter()
    bn = _bn(d, f, opts)
    pages = page_count(bn)
    if f.p == 2 or opts["scan"]:
        prof, xo = bn, pages - 1
    else:
        prof = lee_profile(d, f, opts["heuristic"])
        xo = prof.max_k
    return _profile_row(name, f, prof, xo, pages, time.perf_counter() - t0)


def _work(task):
    """One (knot, field) item; returns (row, None) or (None, error message)."""
    cmd, name, d, f, expected, opts = task
    try:
        if cmd in ("torsion", "batch"):
            row = _torsion(name, d, f, opts)
            if cmd == "batch":
                exp_xo, exp_pages = expected
                bad = []
                if f.name in exp_xo and exp_xo[f.name] != row["xo"]:
                    bad.append(f"xo {row['xo']} != expected {exp_xo[f.name]}")
                if f.name in exp_pages and exp_pages[f.name] != row["pages"]:
                    bad.append(f"pages {row['pages']} != expected {exp_pages[f.name]}")
                if f.name in exp_xo or f.name in exp_pages:
                    row["match"] = not bad
                row["_mismatch"] = bad
            return row, None
        if cmd == "pages":
            t0 = time.perf_counter()
            prof = _bn(d, f, opts)
            pages = page_count(prof)
            return _profile_row(name, f, prof, pages - 1, pages, time.perf_counter() - t0), None
        if cmd == "betti":
            t0 = time.perf_counter()
            prof = _bn(d, f, opts, reduced=opts["reduced"])
            red = prof if prof.reduced else _bn(d, f, opts)
            pages = page_count(red)
            row = _profile_row(name, f, prof, pages - 1, pages, time.perf_counter() - t0)
            if opts["page"] is not None:
                dims = page_betti(prof, opts["page"])
                row["page"] = opts["page"]
            else:
                dims = khovanov_betti(prof)
            row["betti"] = [[i, q, n] for (i, q), n in sorted(dims.items())]
            return row, None
        if cmd == "euler":
            reduced = opts["reduced"]
            if opts["scan"]:
                c = scan_build(d, BN, reduced, f, heuristic=opts["heuristic"], order=opts["order"])
            else:
                c = build_complex(d, BN, reduced, f)
            chi = graded_euler(c)
            return {"knot": name, "field": f.name, "reduced": reduced,
                    "euler": [[q, v] for q, v in chi.items()],
                    "_text": format_laurent(chi)}, None
        if cmd == "verify":
            rep = verify_theorem(d, f, name, scan=opts["scan"], heuristic=opts["heuristic"])
            row = rep.to_json()
            row.pop("seconds", None)
            row["_csv"] = [name, f.name, True, rep.xo_lee, rep.pages_bn, len(rep.profile.free),
                           rep.profile.max_k, f"{sum(rep.timings.values()):.3f}"]
            row["_failed"] = not rep.equal
            return row, None
    except UnsupportedFieldError as exc:
        return None, f"{name} over {f.name}: {exc}"
    except (ValueError, ArithmeticError) as exc:
        return None, f"{name} over {f.name}: {exc}"
    raise AssertionError(cmd)


def _emit_rows(rows, fmt, out, header=CSV_COLUMNS):
    if fmt == "json":
        for r in rows:
            out.write(json.dumps({k: v for k, v in r.items() if not k.startswith("_")}) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(r["_csv"])
    else:
        for r in rows:
            if "_text" in r:
                out.write(f"{r['knot']} [{r['field']}] {r['_text']}\n")
                continue
            line = f"{r['knot']} [{r['field']}] xo={r['xo']} pages={r['pages']}"
            if "theorem_ok" in r:
                line += " ok" if r["theorem_ok"] else " FAILED"
            if r.get("_mismatch"):
                line += " MISMATCH: " + "; ".join(r["_mismatch"])
            if "betti" in r:
                line += " betti=" + " ".join(f"({i},{q}):{n}" for i, q, n in r["betti"])
            out.write(line + "\n")


def _run_phi(args, out):
    rows, failed, err = [], False, None
    for f in args.fields:
        try:
            w = verify_phi(f)
        except (ValueError, ZeroDivisionError) as exc:
            err = f"phi over {f.name}: {exc}"
            continue
        rows.append((f, w))
        failed |= not w.ok
    if args.format == "json":
        for f, w in rows:
            out.write(json.dumps(w.to_json(f)) + "\n")
    elif args.format == "csv":
        wr = csv.writer(out, lineterminator="\n")
        wr.writerow(["field", "ok", "comult_twist", "counit_twist"])
        for f, w in rows:
            j = w.to_json(f)
            wr.writerow([f.name, w.ok, j["comult_twist"], j["counit_twist"]])
    else:
        for f, w in rows:
            bad = [k for k, v in w.checks.items() if not v]
            out.write(f"phi [{f.name}] {'ok' if w.ok else 'FAILED: ' + ', '.join(bad)}\n")
    if err:
        print(f"kht: {err}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_CHECK if failed else EXIT_OK


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        args.fields = args.fields or [parse_field("q")]
        if args.command == "phi":
            return _run_phi(args, out)
        if args.command == "batch" and args.table is None:
            raise UsageError("batch needs --table")
        if args.command == "pages" and args.reduced is False:
            raise UsageError("page counts are defined for the reduced complex only")
        if args.page is not None and (args.command != "betti" or args.reduced is False):
            raise UsageError("--page applies to betti on the reduced complex")
        if args.command == "verify" and args.reduced is False:
            raise UsageError("verify compares against the reduced complex")
        jobs = args.jobs if args.jobs is not None else _default_jobs()
        if jobs < 1:
            raise UsageError("--jobs must be positive")
        items = _items(args)
    except UsageError as exc:
        print(f"kht: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    opts = {"scan": args.scan, "heuristic": args.pivot_heuristic, "order": args.scan_order,
            "reduced": True if args.reduced is None else args.reduced, "page": args.page}
    tasks = [(args.command, name, d, f, (xo, pg), opts)
             for name, d, xo, pg in items for f in args.fields]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_work, tasks))
    else:
        results = [_work(t) for t in tasks]
    rows = [r for r, _ in results if r is not None]
    errors = [e for _, e in results if e is not None]
    buf = io.StringIO()
    header = ["name", "field", "reduced", "euler"] if args.command == "euler" else CSV_COLUMNS
    if args.command == "euler":
        for r in rows:
            r["_csv"] = [r["knot"], r["field"], r["reduced"], r["_text"]]
    _emit_rows(rows, args.format, buf, header)
    out.write(buf.getvalue())
    for e in errors:
        print(f"kht: {e}", file=sys.stderr)
    if errors:
        return EXIT_COMPUTE
    if any(r.get("_failed") for r in rows):
        return EXIT_CHECK
    mism = [r for r in rows if r.get("_mismatch")]
    for r in mism:
        print(f"kht: {r['knot']} [{r['field']}]: " + "; ".join(r["_mismatch"]), file=sys.stderr)
    if mism and args.strict:
        return EXIT_CHECK
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
