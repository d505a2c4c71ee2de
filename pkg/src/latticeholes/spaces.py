"""Derivative-closed spaces, the k-hole sums and the annihilator/orbit checks.

A :class:`GradedSubspace` keeps one echelon block per bidegree.  Closures are
computed top-down in total degree: derivatives only lower the degree, so a
block is complete by the time it is reached and each basis row is
differentiated exactly once.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial

from .determinant import delta
from .diagrams import Cell, HoledDiagram, Partition, hole_subsets, shadow, shadow_size
from .echelon import Echelon, nullspace
from .polycore import (
    ArityError,
    Polynomial,
    _diff,
    apolar_pairing,
    apply_operator,
    bihomogeneous_components,
    y_layers,
)


class DegeneracyError(ValueError):
    """Orbit parameters are not distinct."""


class PreconditionError(ValueError):
    pass


class GradedSubspace:
    def __init__(self, n: int):
        self.n = n
        self.blocks: dict[tuple, Echelon] = {}

    # -- size --------------------------------------------------------------

    @property
    def dimension(self) -> int:
        return sum(len(b) for b in self.blocks.values())

    def __len__(self):
        return self.dimension

    def __repr__(self):
        return f"GradedSubspace(n={self.n}, dim={self.dimension})"

    def hilbert_series(self) -> list:
        return [(dx, dy, len(b)) for (dx, dy), b in sorted(self.blocks.items()) if len(b)]

    def x_only(self) -> "GradedSubspace":
        """The blocks of Y-degree 0."""
        out = GradedSubspace(self.n)
        out.blocks = {bd: b.copy() for bd, b in self.blocks.items() if bd[1] == 0}
        return out

    def basis(self) -> list[Polynomial]:
        out = []
        for bd in sorted(self.blocks, reverse=True):
            for piv in reversed(self.blocks[bd].pivots()):
                out.append(Polynomial(self.n, dict(self.blocks[bd].rows[piv]), _trusted=True))
        return out

    def reduced_basis(self, bidegree) -> list[Polynomial]:
        b = self.blocks.get(tuple(bidegree))
        if b is None:
            return []
        return [Polynomial(self.n, {m: c for m, c in r.items()}) for r in b.reduced_rows()]

    # -- mutation during construction -------------------------------------

    def _insert_terms(self, bd, terms) -> bool:
        block = self.blocks.get(bd)
        if block is None:
            block = self.blocks[bd] = Echelon()
        return block.insert(terms)

    def add(self, P: Polynomial) -> int:
        """Insert the bihomogeneous components of ``P``; returns how many were new."""
        self._check(P)
        return sum(self._insert_terms(bd, c.terms) for bd, c in bihomogeneous_components(P).items())

    def _check(self, P):
        if P.n != self.n:
            raise ArityError(f"arity mismatch: space has {self.n}, polynomial {P.n}")

    # -- queries ------------------------------------------------------------

    def contains(self, P: Polynomial) -> bool:
        self._check(P)
        for bd, comp in bihomogeneous_components(P).items():
            block = self.blocks.get(bd)
            if block is None or not block.contains(comp.terms):
                return False
        return True

    def contains_space(self, other: "GradedSubspace") -> bool:
        if other.n != self.n:
            raise ArityError("arity mismatch")
        for bd, b in other.blocks.items():
            mine = self.blocks.get(bd)
            for row in b.rows.values():
                if mine is None or not mine.contains(row):
                    return False
        return True

    def same_space(self, other: "GradedSubspace") -> bool:
        return self.dimension == other.dimension and self.contains_space(other)

    def is_closed(self, variables=None) -> bool:
        """Every first derivative of every basis row lies back in the space."""
        variables = range(2 * self.n) if variables is None else variables
        for bd, b in self.blocks.items():
            for row in b.rows.values():
                for v in variables:
                    d = _diff(row, v)
                    if not d:
                        continue
                    tgt = (bd[0] - 1, bd[1]) if v < self.n else (bd[0], bd[1] - 1)
                    blk = self.blocks.get(tgt)
                    if blk is None or not blk.contains(d):
                        return False
        return True

    def project_out(self, P: Polynomial) -> Polynomial:
        """``P`` minus its apolar-orthogonal projection onto the space."""
        self._check(P)
        out = Polynomial.zero(self.n)
        for bd, comp in bihomogeneous_components(P).items():
            rows = self.reduced_basis(bd)
            if not rows:
                out = out + comp
                continue
            k = len(rows)
            gram = [[Fraction(apolar_pairing(rows[a], rows[b])) for b in range(k)] for a in range(k)]
            rhs = [Fraction(apolar_pairing(rows[a], comp)) for a in range(k)]
            coef = _solve(gram, rhs)
            proj = Polynomial.zero(self.n)
            for c, r in zip(coef, rows):
                if c:
                    proj = proj + r.scale(c)
            out = out + (comp - proj)
        return out


def _solve(A, b):
    """Gauss-Jordan on a small nonsingular rational system."""
    k = len(A)
    M = [list(A[r]) + [b[r]] for r in range(k)]
    for col in range(k):
        piv = next(r for r in range(col, k) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(k):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][k] for r in range(k)]


def closure(generators, n: int, variables=None) -> GradedSubspace:
    """Smallest space containing ``generators`` and closed under the given partials.

    ``variables`` are 0-based positions in the ``2n`` exponent vector; the
    default is every variable.
    """
    variables = list(range(2 * n)) if variables is None else list(variables)
    S = GradedSubspace(n)
    heap = []
    for P in generators:
        if P.n != n:
            raise ArityError(f"generator in {P.n} variables, expected {n}")
        for bd, comp in bihomogeneous_components(P).items():
            if S._insert_terms(bd, comp.terms) and len(S.blocks[bd]) == 1:
                heapq.heappush(heap, (-(bd[0] + bd[1]), bd))
    done = set()
    while heap:
        _, bd = heapq.heappop(heap)
        if bd in done:
            continue
        done.add(bd)
        for row in list(S.blocks[bd].rows.values()):
            for v in variables:
                d = _diff(row, v)
                if not d:
                    continue
                tgt = (bd[0] - 1, bd[1]) if v < n else (bd[0], bd[1] - 1)
                if S._insert_terms(tgt, d) and tgt not in done:
                    heapq.heappush(heap, (-(tgt[0] + tgt[1]), tgt))
    S.blocks = {bd: b for bd, b in S.blocks.items() if len(b)}
    return S


def derivative_closure(P: Polynomial) -> GradedSubspace:
    """The span of all partial derivatives of a bihomogeneous ``P``."""
    if not P:
        raise ValueError("derivative closure of the zero polynomial")
    if not P.is_bihomogeneous():
        raise ValueError("derivative_closure expects a bihomogeneous polynomial")
    return closure([P], P.n)


def x_closure(generators, n: int) -> GradedSubspace:
    return closure(generators, n, variables=range(n))


def sum_spaces(spaces) -> GradedSubspace:
    spaces = list(spaces)
    if not spaces:
        raise ValueError("empty sum")
    n = spaces[0].n
    out = GradedSubspace(n)
    for S in spaces:
        if S.n != n:
            raise ArityError("arity mismatch in sum")
        for bd, b in S.blocks.items():
            for row in b.rows.values():
                out._insert_terms(bd, row)
    return out


def contains(S: GradedSubspace, P: Polynomial) -> bool:
    return S.contains(P)


def hilbert_series(S: GradedSubspace) -> list:
    return S.hilbert_series()


# -- the k-hole sums ----------------------------------------------------------


def _check_k(mu: Partition, c, k: int) -> int:
    s = shadow_size(mu, c)
    if k < 0 or k > s:
        raise ValueError(f"k={k} must lie in 0..{s} (the shadow size)")
    if mu.size - k < 1:
        raise ValueError("removing every cell leaves no variables")
    return s


def hole_generators(mu: Partition, c, k: int) -> list[Polynomial]:
    """``Delta_{mu/S}`` for every k-subset ``S`` of the shadow of ``c``."""
    _check_k(mu, c, k)
    return [delta(HoledDiagram(mu, S).diagram) for S in hole_subsets(mu, c, k)]


@lru_cache(maxsize=256)
def _mkij(mu: Partition, c: Cell, k: int, x_only: bool) -> GradedSubspace:
    gens = hole_generators(mu, c, k)
    n = mu.size - k
    if x_only:
        layers = [L for P in gens for L in y_layers(P).values()]
        return x_closure(layers, n)
    return closure(gens, n)


def build_Mkij(mu: Partition, c, k: int, x_only: bool = False) -> GradedSubspace:
    """The sum of ``M_{mu/S}`` over the k-subsets ``S`` of the shadow of ``c``.

    With ``x_only`` the result is its Y-degree-0 part, computed as the
    X-closure of the Y-layer coefficients of the generators.
    """
    return _mkij(mu, Cell(*c), k, bool(x_only))


def dimension_bound(mu: Partition, c, k: int) -> int:
    s = shadow_size(mu, c)
    return comb(s, k) * factorial(mu.size - k)


# -- annihilator ideal membership -------------------------------------------


def ideal_member_direct(P: Polynomial, mu: Partition, c, k: int) -> bool:
    """``P(d)`` kills ``Delta_{mu/S}`` for every k-subset of the shadow."""
    for D in hole_generators(mu, c, k):
        if P.n != D.n:
            raise ArityError(f"P has {P.n} variables, the hole diagrams {D.n}")
        if apply_operator(P, D):
            return False
    return True


@lru_cache(maxsize=64)
def _delta_mu(mu: Partition) -> Polynomial:
    return delta(mu.diagram)


def ideal_member_intersection(P: Polynomial, mu: Partition, c, k: int) -> bool:
    """Membership in the intersection over k-tuples of shadow cells.

    For each tuple ``(a_1,b_1) < ... < (a_k,b_k)`` the operator
    ``prod_r d x_{n+r}^{a_r} d y_{n+r}^{b_r}`` is applied to ``Delta_mu`` in
    ``n+k`` variables, then ``P(d)`` on the first ``n``.
    """
    _check_k(mu, c, k)
    n = mu.size - k
    if P.n != n:
        raise ArityError(f"P has {P.n} variables, expected {n}")
    N = n + k
    big = _delta_mu(mu)
    Pe = P.embed(N)
    for S in hole_subsets(mu, c, k):
        cells = sorted(S)
        e = [0] * (2 * N)
        for r, (a, b) in enumerate(cells):
            e[n + r] = a
            e[N + n + r] = b
        op = Polynomial(N, {tuple(e): 1}, _trusted=True)
        if apply_operator(Pe, apply_operator(op, big)):
            return False
    return True


# -- orbits -------------------------------------------------------------------


def _check_params(mu: Partition, alpha, beta):
    alpha = [Fraction(a) for a in alpha]
    beta = [Fraction(b) for b in beta]
    if len(alpha) < len(mu) or len(beta) < mu[0]:
        raise DegeneracyError("need one alpha per row and one beta per column")
    if len(set(alpha)) != len(alpha) or len(set(beta)) != len(beta):
        raise DegeneracyError("alpha and beta entries must be distinct")
    return alpha, beta


def default_params(mu: Partition):
    return list(range(1, len(mu) + 1)), list(range(1, mu[0] + 1))


def _point(positions, alpha, beta):
    """``positions[e]`` is the cell holding entry ``e+1``."""
    return tuple(alpha[p] for p, _ in positions) + tuple(beta[q] for _, q in positions)


def orbit_points(mu: Partition, c, k: int, alpha=None, beta=None) -> set:
    """One point per injective filling of ``n`` cells whose ``k`` white cells lie in the shadow."""
    if alpha is None or beta is None:
        alpha, beta = default_params(mu)
    alpha, beta = _check_params(mu, alpha, beta)
    _check_k(mu, c, k)
    cells = sorted(mu.diagram.cells)
    pts = set()
    for white in hole_subsets(mu, c, k):
        filled = [x for x in cells if x not in white]
        for perm in permutations(filled):
            pts.add(_point(perm, alpha, beta))
    return pts


def full_orbit(mu: Partition, alpha=None, beta=None) -> set:
    if alpha is None or beta is None:
        alpha, beta = default_params(mu)
    alpha, beta = _check_params(mu, alpha, beta)
    return {_point(perm, alpha, beta) for perm in permutations(sorted(mu.diagram.cells))}


def _monomials_up_to(nvars: int, count: int) -> list:
    """The first ``count`` monomials in ``nvars`` variables in graded order."""
    out = []
    d = 0
    while len(out) < count:
        out.extend(sorted(_exps(nvars, d), reverse=True))
        d += 1
    return out[:count]


def _exps(nvars, d):
    if nvars == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in _exps(nvars - 1, d - a):
            yield (a,) + rest


def vanishing_polynomials(points, n: int, extra: int = 12) -> list[Polynomial]:
    """A basis of the polynomials on a graded monomial window that vanish on ``points``."""
    points = sorted(points)
    monos = _monomials_up_to(2 * n, len(points) + extra)
    rows = []
    for pt in points:
        row = []
        for m in monos:
            v = 1
            for a, e in zip(pt, m):
                if e:
                    v *= a**e
            row.append(v)
        rows.append(row)
    out = []
    for vec in nullspace(rows, len(monos)):
        out.append(Polynomial(n, {m: c for m, c in zip(monos, vec) if c}))
    return out


class TransferPolynomial:
    """``P(X_n,Y_n)`` times the row/column vanishing factors in the extra variables."""

    def __init__(self, P: Polynomial, mu: Partition, c, k: int, alpha, beta):
        self.P = P
        self.N = P.n + k
        i, j = c
        n = P.n
        # (variable position in the 2N vector, root)
        self.factors = []
        for r in range(k):
            self.factors += [(n + r, alpha[t]) for t in range(i)]
            self.factors += [(self.N + n + r, beta[t]) for t in range(j)]

    def evaluate(self, point) -> Fraction:
        n, N = self.P.n, self.N
        val = 1
        for pos, root in self.factors:
            val *= point[pos] - root
            if not val:
                return 0
        sub = tuple(point[:n]) + tuple(point[N : N + n])
        return val * self.P.evaluate(sub)

    def expand(self) -> Polynomial:
        N, n = self.N, self.P.n
        out = self.P.embed(N)
        for pos, root in self.factors:
            e = [0] * (2 * N)
            e[pos] = 1
            lin = Polynomial(N, {tuple(e): 1, (0,) * (2 * N): -root})
            out = out * lin
        return out


def orbit_vanishing_transfer(P: Polynomial, mu: Partition, c, k: int, alpha=None, beta=None) -> bool:
    """Lift a polynomial vanishing on the k-white orbit to one vanishing on the full orbit."""
    if alpha is None or beta is None:
        alpha, beta = default_params(mu)
    alpha, beta = _check_params(mu, alpha, beta)
    _check_k(mu, c, k)
    n = mu.size - k
    if P.n != n:
        raise ArityError(f"P has {P.n} variables, expected {n}")
    for pt in orbit_points(mu, c, k, alpha, beta):
        if P.evaluate(pt) != 0:
            raise PreconditionError("P does not vanish on the k-white orbit")
    Q = TransferPolynomial(P, mu, c, k, alpha, beta)
    return all(Q.evaluate(pt) == 0 for pt in full_orbit(mu, alpha, beta))
