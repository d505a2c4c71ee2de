from fractions import Fraction

import pytest

from latticeholes.polycore import (
    ArityError,
    Polynomial,
    apolar_pairing,
    apply_operator,
    bihomogeneous_components,
    complete,
    elementary,
    falling,
    format_polynomial,
    parse_polynomial,
    polynomial_from_json,
    polynomial_to_json,
    power_sum,
    y_layers,
)


def x(n, i):
    return Polynomial.var(n, i, "x")


def y(n, i):
    return Polynomial.var(n, i, "y")


def test_arithmetic_basics():
    assert not (x(1, 1) + (-x(1, 1)))
    assert x(1, 1) * y(1, 1) == Polynomial.monomial([1], [1])
    a, b = x(2, 2) - x(2, 1), x(2, 2) + x(2, 1)
    assert a * b == x(2, 2) ** 2 - x(2, 1) ** 2


def test_arity_mismatch():
    with pytest.raises(ArityError):
        x(2, 1) + x(3, 1)
    with pytest.raises(ArityError):
        Polynomial.var(2, 0)


def test_apply_operator_examples():
    assert apply_operator(x(1, 1), x(1, 1) ** 2) == x(1, 1).scale(2)
    assert not apply_operator(x(2, 1) + x(2, 2), x(2, 2) - x(2, 1))
    assert apply_operator(x(1, 1) * y(1, 1), x(1, 1) * y(1, 1)) == Polynomial.constant(1, 1)


def test_apolar_pairing_examples():
    assert apolar_pairing(x(1, 1) ** 2, x(1, 1) ** 2) == 2
    assert apolar_pairing(x(2, 1), x(2, 2)) == 0
    d = x(2, 2) - x(2, 1)
    assert apolar_pairing(d, d) == 2


def test_bihomogeneous_components():
    P = x(1, 1) + y(1, 1)
    assert bihomogeneous_components(P) == {(1, 0): x(1, 1), (0, 1): y(1, 1)}
    assert bihomogeneous_components(Polynomial.zero(2)) == {}
    Q = x(2, 1) * y(2, 2) - x(2, 2) * y(2, 1)
    assert list(bihomogeneous_components(Q)) == [(1, 1)]
    assert Q.is_bihomogeneous() and Q.bidegree() == (1, 1)


def test_y_layers():
    P = y(2, 2) - y(2, 1)
    assert y_layers(P) == {(0, 1): Polynomial.constant(2, 1), (1, 0): Polynomial.constant(2, -1)}
    Q = x(2, 1) ** 2 + x(2, 2)
    assert y_layers(Q) == {(0, 0): Q}


def test_derivative_and_evaluate():
    P = x(2, 1) ** 3 * y(2, 2)
    assert P.derivative(1, "x", 2) == (x(2, 1) * y(2, 2)).scale(6)
    assert P.derivative(2, "y") == x(2, 1) ** 3
    assert P.evaluate([2, 5, 7, 3]) == 8 * 3


def test_embed_shifts_variables():
    P = x(1, 1) * y(1, 1)
    Q = P.embed(3, x_offset=2, y_offset=1)
    assert Q == x(3, 3) * y(3, 2)


def test_symmetric_operators_small():
    n = 3
    assert power_sum(2, n) == x(n, 1) ** 2 + x(n, 2) ** 2 + x(n, 3) ** 2
    assert elementary(2, n) == x(n, 1) * x(n, 2) + x(n, 1) * x(n, 3) + x(n, 2) * x(n, 3)
    assert len(complete(2, n).terms) == 6
    assert not elementary(4, n)
    assert power_sum(1, 2, "y") == y(2, 1) + y(2, 2)


def test_falling():
    assert falling(5, 2) == 20
    assert falling(2, 3) == 0
    assert falling(7, 0) == 1


def test_fraction_coefficients_normalize():
    P = x(1, 1).scale(Fraction(3, 2)) + x(1, 1).scale(Fraction(1, 2))
    assert P == x(1, 1).scale(2)
    assert all(type(c) is int for c in P.terms.values())


def test_text_round_trip():
    P = parse_polynomial("3/2*x1^2*y2 - x2 + 1", 2)
    assert format_polynomial(P) == "3/2*x1^2*y2 - x2 + 1"
    assert parse_polynomial(format_polynomial(P), 2) == P


def test_json_round_trip():
    P = parse_polynomial("-1/3*x1*y1^2 + 4*y2", 2)
    assert polynomial_from_json(polynomial_to_json(P), 2) == P
