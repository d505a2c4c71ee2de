"""Command-line entry point: ``latticeholes <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .bases import build_B, verify_B
from .combinatorics import count_T, depth_tuple, enum_F, enum_T, mu_F, mu_F_holes
from .determinant import delta
from .diagrams import LatticeDiagram, format_cells, parse_cell, parse_cells, parse_partition
from .harness import CHECKS, DEFAULT_CEILING, BudgetError, any_failure, default_report_path, format_table, run_suite, summarize, write_csv
from .polycore import format_polynomial, polynomial_to_json
from .shiftops import check_shift, shift
from .spaces import build_Mkij, dimension_bound


@contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _emit(args, payload: dict, text: str) -> None:
    with _sink(args.out) as fh:
        if args.json:
            fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        else:
            fh.write(text.rstrip("\n") + "\n")


def _anchor(args):
    return parse_partition(args.mu), parse_cell(args.cell), args.k


# -- subcommands --------------------------------------------------------------


def cmd_delta(args) -> int:
    D = LatticeDiagram(parse_cells(args.cells))
    P = delta(D)
    payload = {"cells": [list(c) for c in D.order], "terms": polynomial_to_json(P)}
    _emit(args, payload, f"cells (pseudo-lex): {format_cells(D.order)}\n{format_polynomial(P)}")
    return 0


def cmd_shift(args) -> int:
    D = LatticeDiagram(parse_cells(args.cells))
    res = shift(args.op, args.k, D, args.alphabet)
    payload = {"op": args.op, "k": args.k, "alphabet": args.alphabet, "terms": res.to_json()}
    lines = [f"{c:+d} {format_cells(L.order)}" for c, L in res] or ["0"]
    if args.check:
        ok = check_shift(args.op, args.k, D, args.alphabet)
        payload["check"] = ok
        lines.append(f"direct differentiation agrees: {ok}")
        _emit(args, payload, "\n".join(lines))
        return 0 if ok else 1
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_mkij(args) -> int:
    mu, c, k = _anchor(args)
    M = build_Mkij(mu, c, k, x_only=args.x_only)
    bound = dimension_bound(mu, c, k)
    hs = M.hilbert_series()
    payload = {
        "mu": list(mu.parts),
        "cell": list(c),
        "k": k,
        "x_only": args.x_only,
        "dimension": M.dimension,
        "bound": bound,
        "hilbert": [list(t) for t in hs],
    }
    text = [f"dimension {M.dimension} (bound C(s,k)*n! = {bound})"]
    text += [f"  ({dx},{dy}): {d}" for dx, dy, d in hs]
    _emit(args, payload, "\n".join(text))
    return 0


def cmd_tableaux(args) -> int:
    mu, c, k = _anchor(args)
    payload = {"count": count_T(mu, c, k)}
    text = [f"#T = {payload['count']}"]
    if args.list:
        tabs = enum_T(mu, c, k)
        payload["tableaux"] = [t.to_json() for t in tabs]
        for t in tabs:
            rows = t.to_json()["rows"]
            text.append(" / ".join(" ".join("." if e is None else str(e) for e in row) for row in rows))
    _emit(args, payload, "\n".join(text))
    return 0


def cmd_selections(args) -> int:
    mu, c, k = _anchor(args)
    out, text = [], []
    for F in enum_F(mu, c, k):
        hd = mu_F_holes(F)
        d = depth_tuple(hd)
        out.append(
            {
                **F.to_json(),
                "mu_F": list(mu_F(F).parts),
                "holes": [list(h) for h in sorted(hd.holes)],
                "depths": list(d),
            }
        )
        text.append(
            f"circled {format_cells(sorted(F.circled))}  mu_F={mu_F(F).parts}  holes {format_cells(sorted(hd.holes))}  depths {d}"
        )
    _emit(args, {"selections": out}, "\n".join(text) or "no selections")
    return 0


def cmd_basis(args) -> int:
    mu, c, k = _anchor(args)
    fam = build_B(mu, c, k)
    payload = {
        "size": len(fam),
        "entries": [
            {"selection": e.selection.to_json(), "index": e.index.to_json(), "value": polynomial_to_json(e.value)}
            for e in fam.entries
        ],
    }
    text = [f"{len(fam)} basis elements from {len(fam.selections())} selections"]
    rc = 0
    if args.verify:
        rep = verify_B(fam)
        payload["verify"] = rep
        text.append(
            "size {size}, #T {count_T}, dimension {dimension}, independent {independent}, contained {contained}".format(**rep)
        )
        rc = 0 if rep["ok"] else 1
    if args.show:
        for e in fam.entries:
            text.append(f"{sorted(e.selection.circled)} {e.index.layer} {e.index.xmon}: {format_polynomial(e.value)}")
    _emit(args, payload, "\n".join(text))
    return rc


def cmd_verify(args) -> int:
    checks = args.checks or list(CHECKS)
    report = Path(args.out) if args.out else default_report_path(checks, args.max_size or "default")
    try:
        records = run_suite(
            args.max_size,
            checks,
            out=report,
            jobs=args.jobs,
            seed=args.seed,
            timings=args.timings,
            resume=not args.fresh,
            ceiling=args.ceiling,
        )
    except BudgetError as err:
        print(f"refusing: {err}", file=sys.stderr)
        return 2
    if args.csv:
        write_csv(records, args.csv)
    if args.json:
        payload = {"report": str(report), "summary": summarize(records), "failed": any_failure(records)}
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(f"report: {report}\n{format_table(records)}")
    return 1 if any_failure(records) else 0


# -- parser -------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes for verify")
    p.add_argument("--seed", type=int, default=0, metavar="N", help="seed for randomized trials")
    return p


def _anchored(p):
    p.add_argument("--mu", required=True, help="partition, e.g. 3,2")
    p.add_argument("--cell", required=True, help="anchor cell (row,col), e.g. 0,0")
    p.add_argument("--k", type=int, required=True, help="number of holes")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="latticeholes", description="Lattice determinants, hole sums and their bases.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", parents=[common], help="expand a lattice determinant")
    p.add_argument("--cells", required=True, help='cells "(p,q);(p,q);..."')
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("shift", parents=[common], help="apply p_k, e_k or h_k combinatorially")
    p.add_argument("--op", choices=["pk", "ek", "hk"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cells", required=True)
    p.add_argument("--alphabet", choices=["x", "y"], default="x")
    p.add_argument("--check", action="store_true", help="compare with direct differentiation")
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("mkij", parents=[common], help="dimension and Hilbert series of a k-hole sum")
    _anchored(p)
    p.add_argument("--x-only", action="store_true", help="restrict to Y-degree 0")
    p.set_defaults(func=cmd_mkij)

    p = sub.add_parser("tableaux", parents=[common], help="count (or list) tableaux with white cells")
    _anchored(p)
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_tableaux)

    p = sub.add_parser("selections", parents=[common], help="circled selections with holes and depths")
    _anchored(p)
    p.set_defaults(func=cmd_selections)

    p = sub.add_parser("basis", parents=[common], help="X-part basis of a k-hole sum")
    _anchored(p)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--show", action="store_true", help="print every basis polynomial")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser(
        "verify",
        parents=[common],
        help="run the verification harness",
        description="--out names the JSONL report; without it the report goes under $LATTICEHOLES_OUT (or .).",
    )
    p.add_argument("checks", nargs="*", metavar="CHECK", help=f"any of: {', '.join(CHECKS)} (default: all)")
    p.add_argument("--max-size", type=int, help="largest |mu| (default: per-check budget)")
    p.add_argument("--csv", metavar="FILE", help="also export a CSV")
    p.add_argument("--timings", action="store_true", help="record wall times (reports stop being reproducible)")
    p.add_argument("--fresh", action="store_true", help="ignore records already in the report")
    p.add_argument("--ceiling", type=int, default=int(os.environ.get("LATTICEHOLES_CEILING", DEFAULT_CEILING)))
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
