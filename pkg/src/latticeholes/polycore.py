"""Sparse polynomials over Q in two alphabets ``X_n`` and ``Y_n``.

A monomial is a tuple of ``2n`` exponents, the x-block first.  Coefficients
are ints while they stay integral and ``Fraction`` otherwise; there is no
floating point anywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial, perm
from numbers import Rational
from typing import Iterable, Mapping

Monomial = tuple  # tuple[int, ...] of length 2n


class ArityError(ValueError):
    """Polynomials with different numbers of variables were combined."""


def _norm(c):
    if type(c) is int:
        return c
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def falling(a: int, k: int) -> int:
    """``a (a-1) ... (a-k+1)``; zero when ``k > a``."""
    return perm(a, k) if k <= a else 0


def mono_key(m: Monomial):
    """Graded, then lexicographic on the full exponent vector."""
    return (sum(m), m)


class Polynomial:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None, *, _trusted=False):
        self.n = n
        if terms is None:
            self.terms = {}
        elif _trusted:
            self.terms = terms
        else:
            out = {}
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != 2 * n:
                    raise ArityError(f"monomial {m} does not have {2 * n} exponents")
                c = _norm(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
                if c:
                    out[m] = out.get(m, 0) + c
            self.terms = {m: c for m, c in out.items() if c}

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, n):
        return cls(n, {}, _trusted=True)

    @classmethod
    def constant(cls, n, c=1):
        c = _norm(Fraction(c))
        return cls(n, {(0,) * (2 * n): c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, n, index: int, alphabet: str = "x"):
        """``x_index`` or ``y_index`` with 1-based ``index``."""
        if not 1 <= index <= n:
            raise ArityError(f"variable index {index} outside 1..{n}")
        e = [0] * (2 * n)
        e[index - 1 + (n if alphabet == "y" else 0)] = 1
        return cls(n, {tuple(e): 1}, _trusted=True)

    @classmethod
    def monomial(cls, xexp: Iterable[int], yexp: Iterable[int] | None = None, coef=1):
        xexp = tuple(xexp)
        yexp = tuple(yexp) if yexp is not None else (0,) * len(xexp)
        if len(xexp) != len(yexp):
            raise ArityError("x and y exponent vectors differ in length")
        return cls(len(xexp), {xexp + yexp: coef})

    # -- basic protocol --------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * (2 * self.n): other}
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        return "Polynomial(%d, %s)" % (self.n, format_polynomial(self))

    def __str__(self):
        return format_polynomial(self)

    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.n != self.n:
            raise ArityError(f"arity mismatch: {self.n} vs {other.n}")

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Rational)):
            other = Polynomial.constant(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = _norm(v)
            else:
                out.pop(m, None)
        return Polynomial(self.n, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        if isinstance(other, (int, Rational)):
            other = Polynomial.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _norm(Fraction(c)) if not isinstance(c, int) else c
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial(self.n, {m: _norm(v * c) for m, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.n, {m: _norm(c) for m, c in out.items() if c}, _trusted=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        out = Polynomial.constant(self.n, 1)
        for _ in range(e):
            out = out * self
        return out

    # -- structure -------------------------------------------------------

    def sorted_terms(self, reverse=True):
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]), reverse=reverse)

    def bidegree_of(self, m):
        return (sum(m[: self.n]), sum(m[self.n :]))

    def is_bihomogeneous(self) -> bool:
        return len({self.bidegree_of(m) for m in self.terms}) <= 1

    def bidegree(self):
        """The common bidegree of a nonzero bihomogeneous polynomial."""
        degs = {self.bidegree_of(m) for m in self.terms}
        if len(degs) != 1:
            raise ValueError("polynomial is zero or not bihomogeneous")
        return degs.pop()

    def is_x_only(self) -> bool:
        return all(not any(m[self.n :]) for m in self.terms)

    def derivative(self, index: int, alphabet: str = "x", order: int = 1):
        """Partial derivative in ``x_index`` (or ``y_index``), 1-based."""
        v = index - 1 + (self.n if alphabet == "y" else 0)
        return Polynomial(self.n, _diff(self.terms, v, order), _trusted=True)

    def evaluate(self, point):
        """Evaluate at ``point = (x_1..x_n, y_1..y_n)``."""
        if len(point) != 2 * self.n:
            raise ArityError(f"point needs {2 * self.n} coordinates")
        total = 0
        for m, c in self.terms.items():
            t = c
            for a, e in zip(point, m):
                if e:
                    t *= a**e
            total += t
        return _norm(Fraction(total)) if isinstance(total, Fraction) else total

    def embed(self, n_new: int, x_offset: int = 0, y_offset: int = 0):
        """Rename ``x_i -> x_{i+x_offset}``, ``y_i -> y_{i+y_offset}`` inside ``n_new`` variables."""
        n = self.n
        if n_new < n + max(x_offset, y_offset):
            raise ArityError("target arity too small")
        out = {}
        for m, c in self.terms.items():
            e = [0] * (2 * n_new)
            e[x_offset : x_offset + n] = m[:n]
            e[n_new + y_offset : n_new + y_offset + n] = m[n:]
            out[tuple(e)] = c
        return Polynomial(n_new, out, _trusted=True)

    def max_coefficient_denominator(self):
        from math import lcm

        out = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                out = lcm(out, c.denominator)
        return out


def _diff(terms, v, order=1):
    out = {}
    for m, c in terms.items():
        e = m[v]
        if e >= order:
            f = falling(e, order)
            out[m[:v] + (e - order,) + m[v + 1 :]] = c * f
    return out


def add(P: Polynomial, Q: Polynomial) -> Polynomial:
    return P + Q


def scale(c, P: Polynomial) -> Polynomial:
    return P.scale(c)


def mul(P: Polynomial, Q: Polynomial) -> Polynomial:
    return P * Q


_FALL = [[perm(a, e) for e in range(a + 1)] for a in range(32)]


def apply_operator(P: Polynomial, Q: Polynomial) -> Polynomial:
    """``P(d)Q``: replace each variable of ``P`` by the matching partial derivative."""
    P._check(Q)
    out = {}
    qterms = Q.terms
    table = _FALL
    for mp, cp in P.terms.items():
        nz = [(v, e) for v, e in enumerate(mp) if e]
        if not nz:
            for mq, cq in qterms.items():
                out[mq] = out.get(mq, 0) + cp * cq
            continue
        for mq, cq in qterms.items():
            c = cp * cq
            for v, e in nz:
                a = mq[v]
                if a < e:
                    break
                c *= table[a][e] if a < 32 else perm(a, e)
            else:
                m = list(mq)
                for v, e in nz:
                    m[v] -= e
                m = tuple(m)
                out[m] = out.get(m, 0) + c
    return Polynomial(Q.n, {m: _norm(c) for m, c in out.items() if c}, _trusted=True)


def apolar_pairing(P: Polynomial, Q: Polynomial):
    """Constant term of ``P(d)Q``, computed directly on matching monomials."""
    P._check(Q)
    total = 0
    small, big = (P, Q) if len(P) <= len(Q) else (Q, P)
    for m, c in small.terms.items():
        d = big.terms.get(m)
        if d:
            w = 1
            for e in m:
                if e > 1:
                    w *= factorial(e)
            total += c * d * w
    return _norm(total) if isinstance(total, Fraction) else total


def bihomogeneous_components(P: Polynomial) -> dict:
    out = {}
    n = P.n
    for m, c in P.terms.items():
        bd = (sum(m[:n]), sum(m[n:]))
        out.setdefault(bd, {})[m] = c
    return {bd: Polynomial(n, t, _trusted=True) for bd, t in out.items()}


def y_layers(P: Polynomial) -> dict:
    """Decompose ``P = sum_beta y^beta c_beta(X)``; keys are y-exponent tuples."""
    n = P.n
    zero_y = (0,) * n
    out = {}
    for m, c in P.terms.items():
        out.setdefault(m[n:], {})[m[:n] + zero_y] = c
    return {b: Polynomial(n, t, _trusted=True) for b, t in out.items()}


# -- symmetric polynomials ------------------------------------------------


def _var_index(n, i, alphabet):
    return i + (n if alphabet == "y" else 0)


def power_sum(k: int, n: int, alphabet: str = "x") -> Polynomial:
    terms = {}
    for i in range(n):
        e = [0] * (2 * n)
        e[_var_index(n, i, alphabet)] = k
        terms[tuple(e)] = terms.get(tuple(e), 0) + 1
    return Polynomial(n, terms)


def elementary(k: int, n: int, alphabet: str = "x") -> Polynomial:
    from itertools import combinations

    terms = {}
    for S in combinations(range(n), k):
        e = [0] * (2 * n)
        for i in S:
            e[_var_index(n, i, alphabet)] = 1
        terms[tuple(e)] = 1
    return Polynomial(n, terms)


def complete(k: int, n: int, alphabet: str = "x") -> Polynomial:
    from itertools import combinations_with_replacement

    terms = {}
    for S in combinations_with_replacement(range(n), k):
        e = [0] * (2 * n)
        for i in S:
            e[_var_index(n, i, alphabet)] += 1
        terms[tuple(e)] = 1
    return Polynomial(n, terms)


# -- text and JSON --------------------------------------------------------


def _fmt_coef(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_polynomial(P: Polynomial) -> str:
    if not P.terms:
        return "0"
    n = P.n
    pieces = []
    for m, c in P.sorted_terms():
        factors = []
        for i, e in enumerate(m):
            if e:
                name = ("x%d" if i < n else "y%d") % (i % n + 1)
                factors.append(name if e == 1 else f"{name}^{e}")
        neg = c < 0
        a = -c if neg else c
        if factors:
            body = "*".join(factors) if a == 1 else _fmt_coef(a) + "*" + "*".join(factors)
        else:
            body = _fmt_coef(a)
        pieces.append(("-" if neg else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_TERM_RE = re.compile(r"([+-]?)\s*([^+-]+)")


def parse_polynomial(text: str, n: int) -> Polynomial:
    """Inverse of :func:`format_polynomial` (exponent 1 elided, ``p/q`` coefficients)."""
    text = text.replace(" ", "")
    if text in ("", "0"):
        return Polynomial.zero(n)
    terms = {}
    for sign, body in _TERM_RE.findall(text):
        coef = Fraction(1)
        e = [0] * (2 * n)
        for f in body.split("*"):
            m = re.fullmatch(r"([xy])(\d+)(?:\^(\d+))?", f)
            if m:
                idx = int(m.group(2))
                if not 1 <= idx <= n:
                    raise ArityError(f"variable {f} outside 1..{n}")
                e[_var_index(n, idx - 1, m.group(1))] += int(m.group(3) or 1)
            else:
                coef *= Fraction(f)
        if sign == "-":
            coef = -coef
        terms[tuple(e)] = terms.get(tuple(e), 0) + coef
    return Polynomial(n, terms)


def polynomial_to_json(P: Polynomial) -> list:
    n = P.n
    return [
        {"coef": _fmt_coef(c), "x": list(m[:n]), "y": list(m[n:])}
        for m, c in P.sorted_terms()
    ]


def polynomial_from_json(data: list, n: int | None = None) -> Polynomial:
    if n is None:
        if not data:
            raise ValueError("cannot infer arity of an empty term list")
        n = len(data[0]["x"])
    return Polynomial(n, {tuple(t["x"]) + tuple(t["y"]): Fraction(t["coef"]) for t in data})
