"""Sparse row echelon form over Q with integer rows.

Rows are dicts ``key -> int`` kept primitive (content 1) with a positive
pivot coefficient; the pivot of a row is its largest key.  Reduction is
fraction-free, so no ``Fraction`` arithmetic happens on the hot path.
"""

from __future__ import annotations

from bisect import insort
from fractions import Fraction
from math import gcd, lcm


def integer_row(vec: dict) -> dict:
    """Scale a rational vector to a primitive integer vector (sign kept); always a new dict."""
    den = 1
    for c in vec.values():
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    if den != 1 or any(isinstance(c, Fraction) for c in vec.values()):
        vec = {k: int(c * den) for k, c in vec.items()}
    g = gcd(*vec.values()) if vec else 1
    if g > 1:
        return {k: c // g for k, c in vec.items()}
    return dict(vec)


class Echelon:
    """Echelon basis of a subspace of the vectors with sortable keys."""

    __slots__ = ("rows", "_pivots")

    def __init__(self):
        self.rows = {}  # pivot key -> row
        self._pivots = []  # ascending

    def __len__(self):
        return len(self.rows)

    def copy(self):
        out = Echelon()
        out.rows = dict(self.rows)
        out._pivots = list(self._pivots)
        return out

    def reduce(self, vec: dict) -> dict:
        """Integer multiple of ``vec`` minus a combination of rows, with no pivot keys left."""
        v = integer_row(vec) if vec else {}
        if not v or not self.rows:
            return v
        rows = self.rows
        for piv in reversed(self._pivots):
            a = v.get(piv)
            if not a:
                continue
            row = rows[piv]
            b = row[piv]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            if fa != 1:
                v = {k: c * fa for k, c in v.items()}
            for k, c in row.items():
                t = v.get(k, 0) - fb * c
                if t:
                    v[k] = t
                else:
                    del v[k]
            if not v:
                return v
        g = gcd(*v.values())
        if g > 1:
            v = {k: c // g for k, c in v.items()}
        return v

    def insert(self, vec: dict) -> bool:
        """Add ``vec`` to the span; return True if the dimension grew."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = max(v)
        if v[piv] < 0:
            v = {k: -c for k, c in v.items()}
        self.rows[piv] = v
        insort(self._pivots, piv)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def pivots(self):
        return list(self._pivots)

    def reduced_rows(self) -> list:
        """Reduced row echelon form with pivot coefficient 1, pivots descending."""
        out = {}
        for piv in self._pivots:  # ascending: earlier rows are already fully reduced
            row = {k: Fraction(c, self.rows[piv][piv]) for k, c in self.rows[piv].items()}
            for p2, r2 in out.items():
                a = row.get(p2)
                if a:
                    for k, c in r2.items():
                        t = row.get(k, 0) - a * c
                        if t:
                            row[k] = t
                        else:
                            row.pop(k, None)
            out[piv] = row
        return [out[p] for p in reversed(self._pivots)]


def nullspace(matrix_rows: list[list], ncols: int) -> list[list]:
    """Basis of ``{v : M v = 0}`` for a dense rational matrix given by rows."""
    ech = Echelon()
    for r in matrix_rows:
        # negate column order so the pivot (max key) is the leftmost nonzero column
        ech.insert({-j: c for j, c in enumerate(r) if c})
    rref = ech.reduced_rows()
    pivot_cols = {}
    for row in rref:
        p = -max(row)
        pivot_cols[p] = row
    free = [j for j in range(ncols) if j not in pivot_cols]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for p, row in pivot_cols.items():
            v[p] = -row.get(-f, 0)
        basis.append(v)
    return basis
