from itertools import permutations

import pytest

from latticeholes.determinant import (
    NotInSpanError,
    delta,
    extract_diagram_coefficients,
    permutation_sign,
    probe_monomial,
    sort_sign,
    support_diagram,
)
from latticeholes.diagrams import LatticeDiagram, Partition
from latticeholes.polycore import Polynomial, apply_operator, parse_polynomial, power_sum


def D(*cells):
    return LatticeDiagram(cells)


def test_small_determinants():
    assert delta(D((0, 0))) == Polynomial.constant(1, 1)
    assert delta(D((0, 0), (1, 0))) == parse_polynomial("x2 - x1", 2)
    expected = parse_polynomial("x2*y3 - x3*y2 - x1*y3 + x3*y1 + x1*y2 - x2*y1", 3)
    assert delta(D((0, 0), (1, 0), (0, 1))) == expected


def test_empty_diagram_rejected():
    with pytest.raises(ValueError):
        delta(LatticeDiagram([]))


def test_probe_monomial_has_coefficient_one():
    for mu in ([3, 1], [2, 2], [2, 1, 1]):
        L = Partition(mu).diagram
        assert delta(L).terms[probe_monomial(L)] == 1


def test_support_diagram_recovers_cells():
    L = D((0, 0), (2, 1), (1, 3))
    assert support_diagram(probe_monomial(L)) == tuple(sorted(L.order))


def test_delta_matches_leibniz_formula():
    # independent oracle: sum over permutations of the matrix entries
    L = D((0, 0), (1, 0), (0, 1), (2, 1))
    n = len(L)
    cols = L.order
    total = Polynomial.zero(n)
    for perm in permutations(range(n)):
        exps = [0] * (2 * n)
        for row, col in enumerate(perm):
            exps[row] += cols[col].p
            exps[n + row] += cols[col].q
        total = total + Polynomial(n, {tuple(exps): permutation_sign(perm)})
    assert delta(L) == total


def test_signs():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([2, 0, 1]) == 1
    assert sort_sign([3, 1, 2]) == 1
    assert sort_sign([1, 1]) == 0


def test_extract_examples():
    two = D((0, 0), (1, 0))
    assert extract_diagram_coefficients(delta(two).scale(3), [two]) == [3]
    assert extract_diagram_coefficients(delta(two).scale(2), [two, D((0, 0), (2, 0))]) == [2, 0]
    P = apply_operator(power_sum(1, 2), delta(D((0, 0), (2, 0))))
    assert extract_diagram_coefficients(P, [two]) == [2]


def test_extract_residual_raises():
    with pytest.raises(NotInSpanError):
        extract_diagram_coefficients(parse_polynomial("x1", 2), [D((0, 0), (1, 0))])
