"""Batch verification: deterministic case enumeration, one record per case per check.

Records are written as JSON lines in enumeration order and flushed one by
one, so an interrupted run can be resumed by skipping the ids already on
disk.  Wall times are left out unless asked for, which keeps reports
byte-identical across runs.
"""

from __future__ import annotations

import csv
import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from math import comb, factorial
from pathlib import Path
from typing import Callable, Iterator

from .bases import build_B, depth_filtration_kill, verify_B
from .combinatorics import counting_identity, depth_tuples_distinct, enum_F
from .diagrams import Cell, HoledDiagram, LatticeDiagram, Partition, partitions_of, shadow_size
from .determinant import delta
from .polycore import Polynomial
from .shiftops import check_shift
from .spaces import (
    build_Mkij,
    derivative_closure,
    dimension_bound,
    ideal_member_direct,
    ideal_member_intersection,
    orbit_points,
    orbit_vanishing_transfer,
    sum_spaces,
    vanishing_polynomials,
)

OUT_ENV = "LATTICEHOLES_OUT"
DEFAULT_CEILING = 5_000_000


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    cases: Callable[[int], Iterator[dict]]
    run: Callable[[dict, int], dict]
    cost: Callable[[dict], int]
    default_max: int
    conjectural: bool = False


# -- case enumeration --------------------------------------------------------


def anchored_cases(max_size: int, min_k: int = 0, max_k: int | None = None):
    """Every ``(mu, cell, k)`` with ``|mu| <= max_size`` and at least one variable left."""
    for m in range(1, max_size + 1):
        for mu in partitions_of(m):
            for c in sorted(mu.diagram.cells):
                s = shadow_size(mu, c)
                top = s if max_k is None else min(s, max_k)
                for k in range(min_k, top + 1):
                    if m - k >= 1:
                        yield {"mu": list(mu.parts), "cell": list(c), "k": k}


def partition_cases(max_size: int):
    for m in range(1, max_size + 1):
        for mu in partitions_of(m):
            yield {"mu": list(mu.parts)}


def case_id(check: str, case: dict) -> str:
    return check + ":" + json.dumps(case, sort_keys=True, separators=(",", ":"))


def _unpack(case):
    return Partition(case["mu"]), Cell(*case["cell"]), case["k"]


def _status(ok: bool, conjectural: bool = False) -> str:
    if ok:
        return "pass"
    return "finding" if conjectural else "fail"


# -- random polynomials -------------------------------------------------------


def random_bihomogeneous(n: int, bidegree, rng: random.Random, terms: int = 3) -> Polynomial:
    a, b = bidegree
    xs = [e for e in product(range(a + 1), repeat=n) if sum(e) == a]
    ys = [e for e in product(range(b + 1), repeat=n) if sum(e) == b]
    out = {}
    for _ in range(terms):
        m = rng.choice(xs) + rng.choice(ys)
        out[m] = out.get(m, 0) + rng.choice([-3, -2, -1, 1, 2, 3])
    return Polynomial(n, out)


def ideal_trials(mu: Partition, c, k: int, count: int, rng: random.Random) -> list[tuple]:
    """``(P, direct, intersection)`` for ``count`` random bihomogeneous ``P``.

    Even trials use a bidegree where the space is nonzero, so they are
    mostly outside the ideal; odd trials use any bidegree up to ``(3, 3)``
    and are pushed into the ideal by removing their apolar projection.
    """
    n = mu.size - k
    M = build_Mkij(mu, c, k)
    live = [(a, b) for a, b, _ in M.hilbert_series() if a <= 3 and b <= 3]
    out = []
    for t in range(count):
        if t % 2:
            P = M.project_out(random_bihomogeneous(n, (rng.randint(0, 3), rng.randint(0, 3)), rng))
        else:
            P = random_bihomogeneous(n, rng.choice(live), rng)
        out.append((P, ideal_member_direct(P, mu, c, k), ideal_member_intersection(P, mu, c, k)))
    return out


def orbit_trials(mu: Partition, c, k: int, count: int, rng: random.Random) -> list[bool]:
    """Transfer results for random combinations of interpolated annihilators."""
    n = mu.size - k
    basis = vanishing_polynomials(orbit_points(mu, c, k), n)
    out = []
    for _ in range(count):
        P = Polynomial.zero(n)
        for B in rng.sample(basis, min(len(basis), rng.randint(1, 3))):
            P = P + B.scale(rng.choice([-2, -1, 1, 2, 3]))
        out.append(orbit_vanishing_transfer(P, mu, c, k) if P else True)
    return out


def _seed_for(seed: int, cid: str) -> int:
    # stable across processes, unlike hash()
    h = 0
    for ch in cid:
        h = (h * 131 + ord(ch)) % (1 << 61)
    return h ^ seed


# -- checks -------------------------------------------------------------------


def _run_nfact(case, seed):
    mu = Partition(case["mu"])
    dim = derivative_closure(delta(mu.diagram)).dimension
    return {"status": _status(dim == factorial(mu.size)), "dimension": dim, "expected": factorial(mu.size)}


def _run_onehole(case, seed):
    mu, c, _ = _unpack(case)
    M = build_Mkij(mu, c, 1)
    single = derivative_closure(delta(HoledDiagram(mu, [c]).diagram))
    bound = dimension_bound(mu, c, 1)
    same = M.same_space(single)
    return {
        "status": _status(M.dimension == bound and same),
        "dimension": M.dimension,
        "expected": bound,
        "equals_single_hole": same,
    }


def _run_bound(case, seed):
    mu, c, k = _unpack(case)
    dim, bound = build_Mkij(mu, c, k).dimension, dimension_bound(mu, c, k)
    return {"status": _status(dim <= bound), "dimension": dim, "bound": bound}


def _run_conjecture(case, seed):
    mu, c, k = _unpack(case)
    dim, bound = build_Mkij(mu, c, k).dimension, dimension_bound(mu, c, k)
    return {"status": _status(dim == bound, conjectural=True), "dimension": dim, "bound": bound}


def _run_ideal(case, seed, trials=200):
    mu, c, k = _unpack(case)
    rng = random.Random(_seed_for(seed, case_id("ideal-eq", case)))
    res = ideal_trials(mu, c, k, trials, rng)
    agree = sum(d == i for _, d, i in res)
    members = sum(d for _, d, _ in res)
    return {"status": _status(agree == len(res)), "trials": len(res), "agree": agree, "members": members}


def _run_remark3_counterexample(case, seed):
    mu = Partition([3, 2])
    gens = [
        HoledDiagram(mu, [(0, 0), (1, 0), (0, 1)]),
        HoledDiagram(mu, [(0, 0), (0, 1), (0, 2)]),
    ]
    S = sum_spaces([derivative_closure(delta(h.diagram)) for h in gens])
    probe = HoledDiagram(mu, [(0, 0), (1, 0), (0, 2)])
    inside = S.contains(delta(probe.diagram))
    return {"status": _status(not inside), "contained": inside, "sum_dimension": S.dimension}


def two_generator_sum(mu: Partition, c):
    """``M_{mu/{c, c+(0,1)}} + M_{mu/{c, c+(1,0)}}``, skipping a generator whose holes leave ``mu``."""
    i, j = c
    pairs = [[(i, j), (i, j + 1)], [(i, j), (i + 1, j)]]
    live = [p for p in pairs if all(Cell(*h) in mu for h in p)]
    return sum_spaces([derivative_closure(delta(HoledDiagram(mu, p).diagram)) for p in live]), len(live)


def _run_remark3_twogen(case, seed):
    mu, c, k = _unpack(case)
    S, used = two_generator_sum(mu, c)
    M = build_Mkij(mu, c, k)
    same = M.same_space(S)
    return {"status": _status(same), "dimension": M.dimension, "sum_dimension": S.dimension, "generators": used}


def _run_xbasis(case, seed):
    mu, c, k = _unpack(case)
    fam = build_B(mu, c, k)
    report = verify_B(fam)
    kill = all(depth_filtration_kill(fam, F)["ok"] for F in fam.selections())
    ok = report["ok"] and kill
    out = {k2: v for k2, v in report.items() if k2 != "ok"}
    out["kill"] = kill
    out["status"] = _status(ok)
    return out


def _run_depth(case, seed):
    mu, c, k = _unpack(case)
    distinct = depth_tuples_distinct(mu, c, k)
    counting = counting_identity(mu, c, k) if mu.size <= 7 else None
    ok = distinct and counting is not False
    return {"status": _status(ok), "selections": len(enum_F(mu, c, k)), "distinct": distinct, "counting": counting}


def _run_orbit(case, seed, trials=20):
    mu, c, k = _unpack(case)
    pts = orbit_points(mu, c, k)
    bound = dimension_bound(mu, c, k)
    rng = random.Random(_seed_for(seed, case_id("orbit", case)))
    res = orbit_trials(mu, c, k, trials, rng)
    ok = len(pts) == bound and all(res)
    return {"status": _status(ok), "points": len(pts), "expected": bound, "trials": len(res), "transferred": sum(res)}


def box_diagrams(cells: int, box: int = 4):
    grid = [Cell(p, q) for q in range(box) for p in range(box)]
    for S in combinations(grid, cells):
        yield LatticeDiagram(S)


def shift_cases(max_size: int):
    for m in range(1, max_size + 1):
        for kind in ("pk", "ek", "hk"):
            for k in (1, 2, 3):
                for alphabet in ("x", "y"):
                    yield {"cells": m, "op": kind, "k": k, "alphabet": alphabet}


def _run_shift(case, seed):
    bad = []
    total = 0
    for L in box_diagrams(case["cells"]):
        total += 1
        if not check_shift(case["op"], case["k"], L, case["alphabet"]):
            bad.append([list(x) for x in L.order])
    return {"status": _status(not bad), "diagrams": total, "failures": len(bad), "first_failure": bad[0] if bad else None}


def _single(max_size):
    yield {"mu": [3, 2]}


def _closure_cost(case):
    mu = case["mu"]
    n = sum(mu) - case.get("k", 0)
    c = case.get("cell")
    mult = comb(shadow_size(Partition(mu), c), case["k"]) if c is not None else 1
    return mult * factorial(n) * (2 * n)


CHECKS: dict[str, Check] = {
    "nfact": Check("nfact", partition_cases, _run_nfact, _closure_cost, 5),
    "onehole": Check("onehole", lambda m: anchored_cases(m, 1, 1), _run_onehole, _closure_cost, 5),
    "bound": Check("bound", anchored_cases, _run_bound, _closure_cost, 5),
    "conjecture": Check("conjecture", anchored_cases, _run_conjecture, _closure_cost, 5, conjectural=True),
    "ideal-eq": Check("ideal-eq", anchored_cases, _run_ideal, lambda c: 50 * _closure_cost(c), 4),
    "remark3-counterexample": Check("remark3-counterexample", _single, _run_remark3_counterexample, lambda c: 1000, 5),
    "remark3-twogen": Check("remark3-twogen", lambda m: anchored_cases(m, 2, 2), _run_remark3_twogen, _closure_cost, 6),
    "xbasis": Check("xbasis", lambda m: anchored_cases(m, 0, 3), _run_xbasis, lambda c: _closure_cost(c) // 10, 6),
    "depth": Check(
        "depth", lambda m: anchored_cases(m, 1, 4), _run_depth, lambda c: comb(sum(c["mu"]), c["k"]), 10
    ),
    "orbit": Check("orbit", anchored_cases, _run_orbit, lambda c: _closure_cost(c) ** 2 // 1000, 5),
    "shift": Check("shift", shift_cases, _run_shift, lambda c: comb(16, c["cells"]) * c["cells"], 5),
}


def estimate_cost(check: Check, max_size: int) -> int:
    return sum(check.cost(cs) for cs in check.cases(max_size))


# -- running ------------------------------------------------------------------


def _execute(args):
    name, case, seed, timings = args
    chk = CHECKS[name]
    t0 = time.perf_counter()
    values = chk.run(case, seed)
    status = values.pop("status")
    rec = {"id": case_id(name, case), "check": name, "case": case, "status": status, "values": values}
    if timings:
        rec["seconds"] = round(time.perf_counter() - t0, 4)
    return rec


def load_records(path: Path) -> list[dict]:
    """Complete records from a report, ignoring a torn last line."""
    out = []
    if not path.exists():
        return out
    with path.open() as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError:
                break
    return out


def default_report_path(checks, max_size) -> Path:
    base = Path(os.environ.get(OUT_ENV, "."))
    return base / f"verify-{'+'.join(checks)}-{max_size}.jsonl"


def run_suite(
    max_size: int | None,
    checks: list[str],
    out: Path | str | None = None,
    jobs: int = 1,
    seed: int = 0,
    timings: bool = False,
    resume: bool = True,
    ceiling: int = DEFAULT_CEILING,
    progress: Callable[[dict], None] | None = None,
) -> list[dict]:
    """Run ``checks`` over every case up to ``max_size`` and return all records.

    ``max_size=None`` uses each check's own default.  Records already present
    in ``out`` (matched by id) are kept and not recomputed.
    """
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    plan = []
    for name in checks:
        chk = CHECKS[name]
        size = chk.default_max if max_size is None else max_size
        cost = estimate_cost(chk, size)
        if cost > ceiling:
            raise BudgetError(f"{name} up to size {size} is estimated at {cost} units, above the ceiling {ceiling}")
        plan.extend((name, cs) for cs in chk.cases(size))

    done = {}
    path = Path(out) if out is not None else None
    if path is not None:
        if resume:
            done = {r["id"]: r for r in load_records(path)}
        path.parent.mkdir(parents=True, exist_ok=True)

    todo = [(n, cs, seed, timings) for n, cs in plan if case_id(n, cs) not in done]
    results = dict(done)
    fh = None
    if path is not None:
        # rewrite the kept records first so the file stays in enumeration order
        kept = [done[case_id(n, cs)] for n, cs in plan if case_id(n, cs) in done]
        fh = path.open("w")
        for r in kept:
            fh.write(json.dumps(r, sort_keys=True) + "\n")
        fh.flush()
    try:
        if jobs > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                stream = pool.map(_execute, todo)
                _drain(stream, results, fh, progress)
        else:
            _drain(map(_execute, todo), results, fh, progress)
    finally:
        if fh is not None:
            fh.close()
    records = [results[case_id(n, cs)] for n, cs in plan]
    if path is not None and [r["id"] for r in records] != [r["id"] for r in load_records(path)]:
        # resumed runs append new records after the kept ones; restore plan order
        with path.open("w") as fh2:
            for r in records:
                fh2.write(json.dumps(r, sort_keys=True) + "\n")
    return records


def _drain(stream, results, fh, progress):
    for rec in stream:
        results[rec["id"]] = rec
        if fh is not None:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
            fh.flush()
        if progress is not None:
            progress(rec)


def summarize(records: list[dict]) -> dict:
    out = {}
    for r in records:
        row = out.setdefault(r["check"], {"pass": 0, "fail": 0, "finding": 0})
        row[r["status"]] += 1
    return out


def any_failure(records) -> bool:
    return any(r["status"] == "fail" for r in records)


def format_table(records: list[dict]) -> str:
    summary = summarize(records)
    lines = [f"{'check':<24}{'pass':>8}{'fail':>8}{'finding':>9}"]
    for name, row in summary.items():
        lines.append(f"{name:<24}{row['pass']:>8}{row['fail']:>8}{row['finding']:>9}")
    bad = [r for r in records if r["status"] != "pass"]
    for r in bad[:20]:
        lines.append(f"  {r['status']}: {r['id']} {json.dumps(r['values'], sort_keys=True)}")
    if len(bad) > 20:
        lines.append(f"  ... {len(bad) - 20} more")
    return "\n".join(lines)


def write_csv(records: list[dict], path) -> None:
    keys = sorted({k for r in records for k in r["values"]})
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["check", "case", "status"] + keys + (["seconds"] if any("seconds" in r for r in records) else []))
        for r in records:
            row = [r["check"], json.dumps(r["case"], sort_keys=True), r["status"]]
            row += [json.dumps(r["values"].get(k)) if isinstance(r["values"].get(k), list) else r["values"].get(k, "") for k in keys]
            if "seconds" in r:
                row.append(r["seconds"])
            w.writerow(row)
