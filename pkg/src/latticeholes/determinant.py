"""Lattice determinants and coefficient extraction in the basis of determinants.

Every monomial of ``Delta_D`` carries the cells of ``D`` as its biexponents,
one cell per variable index, so determinants of distinct diagrams have
disjoint supports.  That is what makes coefficient extraction a lookup.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from .diagrams import LatticeDiagram
from .polycore import Polynomial


class NotInSpanError(ValueError):
    """A polynomial is not a combination of the requested determinants."""


def permutation_sign(perm) -> int:
    """Sign of a permutation of ``0..n-1`` given as a sequence."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sort_sign(seq, key=None) -> int:
    """Sign of the permutation that sorts ``seq``; 0 if two entries coincide."""
    keys = [key(s) for s in seq] if key else list(seq)
    if len(set(keys)) != len(keys):
        return 0
    order = sorted(range(len(keys)), key=keys.__getitem__)
    return permutation_sign(order)


@lru_cache(maxsize=4096)
def _delta_terms(cells: tuple) -> dict:
    n = len(cells)
    ps = [c[0] for c in cells]
    qs = [c[1] for c in cells]
    out = {}
    for sigma in permutations(range(n)):
        # row i picks column sigma[i]
        m = tuple(ps[s] for s in sigma) + tuple(qs[s] for s in sigma)
        out[m] = permutation_sign(sigma)
    return out


def delta(D: LatticeDiagram) -> Polynomial:
    """``det || x_i^{p_j} y_i^{q_j} ||`` with columns in pseudo-lex order."""
    if len(D) == 0:
        raise ValueError("the lattice determinant of an empty diagram is undefined")
    cells = D.order
    return Polynomial(len(cells), dict(_delta_terms(cells)), _trusted=True)


def probe_monomial(D: LatticeDiagram) -> tuple:
    """The identity-permutation monomial of ``Delta_D``; its coefficient is +1."""
    cells = D.order
    return tuple(c.p for c in cells) + tuple(c.q for c in cells)


def extract_diagram_coefficients(P: Polynomial, Ds) -> list:
    """Coefficients ``c_D`` with ``P = sum c_D Delta_D``; raises if ``P`` is outside that span."""
    Ds = list(Ds)
    if len(set(Ds)) != len(Ds):
        raise ValueError("diagrams must be distinct")
    coefs = []
    residual = P
    for D in Ds:
        if len(D) != P.n:
            raise ValueError(f"diagram with {len(D)} cells against a polynomial in {P.n} variables")
        c = P.terms.get(probe_monomial(D), 0)
        coefs.append(c)
        if c:
            residual = residual - delta(D).scale(c)
    if residual:
        raise NotInSpanError(f"residual with {len(residual)} terms after subtracting {len(Ds)} determinants")
    return coefs


def support_diagram(monomial: tuple) -> tuple:
    """The multiset of biexponents ``(p_i, q_i)`` of a monomial, sorted."""
    n = len(monomial) // 2
    return tuple(sorted(zip(monomial[:n], monomial[n:])))
