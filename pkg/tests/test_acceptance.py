"""Acceptance criteria 1-10, each recorded as a PASS/FAIL line in the terminal summary.

Criterion 2 and 8 take a few minutes each on one core.
"""

import random
from fractions import Fraction
from math import comb, factorial

from latticeholes.bases import build_B, verify_B
from latticeholes.combinatorics import depth_tuples_distinct, enum_T
from latticeholes.determinant import delta
from latticeholes.diagrams import Cell, HoledDiagram, LatticeDiagram, Partition, partitions_of, pseudo_lex_key, shadow_size
from latticeholes.harness import anchored_cases, box_diagrams, ideal_trials, orbit_trials
from latticeholes.polycore import Polynomial, falling, parse_polynomial, power_sum
from latticeholes.shiftops import check_shift, shift
from latticeholes.spaces import (
    build_Mkij,
    derivative_closure,
    dimension_bound,
    ideal_member_direct,
    ideal_member_intersection,
    orbit_points,
    sum_spaces,
)


def cases(max_size, min_k=0, max_k=None):
    for cs in anchored_cases(max_size, min_k, max_k):
        yield Partition(cs["mu"]), Cell(*cs["cell"]), cs["k"]


def closure_of_holes(mu, holes):
    return derivative_closure(delta(HoledDiagram(mu, holes).diagram))


# -- 1 ------------------------------------------------------------------------


def test_criterion_1_determinant_ground_truth(acceptance):
    checks = [
        delta(LatticeDiagram([(0, 0)])) == Polynomial.constant(1, 1),
        delta(LatticeDiagram([(0, 0), (1, 0)])) == parse_polynomial("x2 - x1", 2),
        delta(LatticeDiagram([(0, 0), (1, 0), (0, 1)]))
        == parse_polynomial("x2*y3 - x3*y2 - x1*y3 + x3*y1 + x1*y2 - x2*y1", 3),
    ]
    mu = Partition([4, 2, 1])
    checks.append(mu.diagram.cells == {Cell(*c) for c in [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 0)]})
    checks.append(list(mu.diagram.order) == [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2), (0, 3)])
    ok = all(checks)
    acceptance(1, ok, "three hand-expanded determinants and the (4,2,1) cell order")
    assert ok, checks


# -- 2 ------------------------------------------------------------------------


def _inversion_sign(cells):
    keys = [pseudo_lex_key(c) for c in cells]
    inv = sum(1 for a in range(len(keys)) for b in range(a + 1, len(keys)) if keys[a] > keys[b])
    return -1 if inv % 2 else 1


def _expected_pk(k, L, axis):
    """Independent p_k oracle: one cell moves k steps, sign from counting inversions."""
    out = {}
    cells = list(L.order)
    for t, c in enumerate(cells):
        a = c[axis]
        if a < k:
            continue
        moved = list(cells)
        moved[t] = Cell(c.p - k, c.q) if axis == 0 else Cell(c.p, c.q - k)
        if len(set(moved)) < len(moved):
            continue
        D = LatticeDiagram(moved)
        out[D] = out.get(D, 0) + _inversion_sign(moved) * falling(a, k)
    return {D: c for D, c in out.items() if c}


def test_criterion_2_shift_operators(acceptance):
    mismatches, negative, parity = [], [], []
    total = 0
    for m in range(1, 6):
        for L in box_diagrams(m):
            for k in (1, 2, 3):
                for alphabet in ("x", "y"):
                    for kind in ("pk", "ek", "hk"):
                        total += 1
                        if not check_shift(kind, k, L, alphabet):
                            mismatches.append((kind, k, alphabet, L))
                        if alphabet == "x" and kind != "pk":
                            if any(c < 0 for c, _ in shift(kind, k, L, alphabet)):
                                negative.append((kind, k, L))
                    got = shift("pk", k, L, alphabet).as_dict()
                    if got != _expected_pk(k, L, 0 if alphabet == "x" else 1):
                        parity.append((k, alphabet, L))
    ok = not mismatches and not negative and not parity
    acceptance(
        2,
        ok,
        f"{total} expansions vs direct differentiation; mismatches {len(mismatches)}, "
        f"negative e/h coefficients {len(negative)}, p_k sign errors {len(parity)}",
    )
    assert ok, (mismatches[:3], negative[:3], parity[:3])


# -- 3 ------------------------------------------------------------------------


def test_criterion_3_two_generator_remark(acceptance):
    mu = Partition([3, 2])
    partial = sum_spaces([closure_of_holes(mu, [(0, 0), (1, 0), (0, 1)]), closure_of_holes(mu, [(0, 0), (0, 1), (0, 2)])])
    outside = not partial.contains(delta(HoledDiagram(mu, [(0, 0), (1, 0), (0, 2)]).diagram))
    M2 = build_Mkij(mu, (0, 0), 2)
    two = sum_spaces([closure_of_holes(mu, [(0, 0), (0, 1)]), closure_of_holes(mu, [(0, 0), (1, 0)])])
    mutual = M2.contains_space(two) and two.contains_space(M2)
    ok = outside and mutual
    acceptance(3, ok, f"non-membership {outside}; two-generator sum equals M2 (dim {M2.dimension}) {mutual}")
    assert ok


# -- 4 ------------------------------------------------------------------------


def test_criterion_4_n_factorial(acceptance):
    bad = []
    count = 0
    for n in range(1, 6):
        for mu in partitions_of(n):
            count += 1
            dim = derivative_closure(delta(mu.diagram)).dimension
            if dim != factorial(n):
                bad.append((mu, dim))
    acceptance(4, not bad, f"{count} partitions with |mu| <= 5")
    assert not bad, bad


# -- 5 ------------------------------------------------------------------------


def test_criterion_5_one_hole(acceptance):
    bad = []
    count = 0
    for mu, c, k in cases(5, 1, 1):
        count += 1
        M = build_Mkij(mu, c, 1)
        single = closure_of_holes(mu, [c])
        want = shadow_size(mu, c) * factorial(mu.size - 1)
        if M.dimension != want or not (M.contains_space(single) and single.contains_space(M)):
            bad.append((mu, c, M.dimension, want))
    acceptance(5, not bad, f"{count} (mu, cell) pairs: dim = s*n! and equal to the single-hole module")
    assert not bad, bad


# -- 6 ------------------------------------------------------------------------


def test_criterion_6_upper_bound(acceptance):
    over, findings = [], []
    count = 0
    for mu, c, k in cases(5):
        count += 1
        dim, bound = build_Mkij(mu, c, k).dimension, dimension_bound(mu, c, k)
        if dim > bound:
            over.append((mu, c, k, dim, bound))
        elif dim < bound:
            findings.append((mu, c, k, dim, bound))
    detail = f"{count} cases; bound violations {len(over)}; equality findings (dim < bound) {len(findings)}"
    if findings:
        detail += f", first {findings[0]}"
    acceptance(6, not over, detail)
    assert not over, over


# -- 7 ------------------------------------------------------------------------


def test_criterion_7_ideal_equality(acceptance):
    rng = random.Random(20240607)
    disagreements, witnesses = [], []
    trials = members = 0
    ncases = 0
    for mu, c, k in cases(4):
        ncases += 1
        n = mu.size - k
        for P, d, i in ideal_trials(mu, c, k, 200, rng):
            trials += 1
            members += d
            if d != i:
                disagreements.append((mu, c, k, P))
        one = Polynomial.constant(n, 1)
        # every generator has X-degree at most that of mu itself
        high = power_sum(mu.diagram.x_degree + 1, n)
        if ideal_member_direct(one, mu, c, k) or ideal_member_intersection(one, mu, c, k):
            witnesses.append(("one", mu, c, k))
        if not (ideal_member_direct(high, mu, c, k) and ideal_member_intersection(high, mu, c, k)):
            witnesses.append(("power sum", mu, c, k))
    ok = not disagreements and not witnesses
    acceptance(
        7,
        ok,
        f"{ncases} cases, {trials} random polynomials ({members} members), "
        f"disagreements {len(disagreements)}, witness failures {len(witnesses)}",
    )
    assert ok, (disagreements[:3], witnesses[:3])


# -- 8 ------------------------------------------------------------------------


def test_criterion_8_x_basis(acceptance):
    bad = []
    count = 0
    for mu, c, k in cases(6, 0, 3):
        count += 1
        fam = build_B(mu, c, k)
        rep = verify_B(fam)
        nT = len(enum_T(mu, c, k))
        if not (rep["ok"] and rep["dimension"] == nT == len(fam)):
            bad.append((mu, c, k, rep, nT))
    acceptance(8, not bad, f"{count} cases with |mu| <= 6, k <= 3: dim = #T = |B|, independent and contained")
    assert not bad, bad[:3]


# -- 9 ------------------------------------------------------------------------


def test_criterion_9_depth_lemma(acceptance):
    bad = []
    count = 0
    for n in range(1, 11):
        for mu in partitions_of(n):
            for c in sorted(mu.diagram.cells):
                for k in range(1, min(4, shadow_size(mu, c)) + 1):
                    count += 1
                    if not depth_tuples_distinct(mu, c, k):
                        bad.append((mu, c, k))
    acceptance(9, not bad, f"{count} cases with |mu| <= 10, k <= 4")
    assert not bad, bad[:3]


# -- 10 -----------------------------------------------------------------------


def test_criterion_10_orbits(acceptance):
    rng = random.Random(11)
    wrong_size, failed = [], []
    count = trials = 0
    for mu, c, k in cases(5):
        count += 1
        want = comb(shadow_size(mu, c), k) * factorial(mu.size - k)
        alpha = [Fraction(3 * r + 1, 2) for r in range(len(mu))]
        beta = [Fraction(-5 * q, 3) for q in range(mu[0])]
        for params in ((None, None), (alpha, beta)):
            if len(orbit_points(mu, c, k, *params)) != want:
                wrong_size.append((mu, c, k, params))
        res = orbit_trials(mu, c, k, 20, rng)
        trials += len(res)
        if not all(res):
            failed.append((mu, c, k))
    ok = not wrong_size and not failed
    acceptance(
        10,
        ok,
        f"{count} cases; orbit size errors {len(wrong_size)}; {trials} transfer trials, failures {len(failed)}",
    )
    assert ok, (wrong_size[:3], failed[:3])
