"""Tableaux with white cells, circled selections and the holed diagrams they induce.

White cells of a row-increasing tableau sit at the right end of their row
(a white cell counts as larger than every entry).  A selection circles cells
column by column from the right: a cell may be circled when it ends its row
once the circled cells to its right are gone.  Either way, row ``r`` loses a
suffix of ``w_r`` cells inside the shadow, and the two families are indexed
by the same vectors ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial

from .diagrams import Cell, HoledDiagram, Partition, pseudo_lex_key, shadow_size


def count_row_increasing(nu: Partition, n: int) -> int:
    """``n! / nu!``"""
    if nu.size != n:
        raise ValueError(f"{nu} is not a partition of {n}")
    return factorial(n) // nu.factorial()


def _multinomial(lengths) -> int:
    n = sum(lengths)
    out = factorial(n)
    for x in lengths:
        out //= factorial(x)
    return out


def white_vectors(mu: Partition, c, k: int) -> list[tuple]:
    """Vectors ``w`` (one entry per row) with ``sum w = k`` and row ``r``'s
    ``w_r`` rightmost cells inside the shadow of ``c``."""
    i, j = c
    if Cell(i, j) not in mu:
        raise ValueError(f"cell {c} is not in {mu}")
    caps = [max(0, mu[r] - j) if r >= i else 0 for r in range(len(mu))]
    out = []

    def rec(r, left, acc):
        if r == len(caps):
            if left == 0:
                out.append(tuple(acc))
            return
        for w in range(min(caps[r], left), -1, -1):
            rec(r + 1, left - w, acc + [w])

    rec(0, k, [])
    return out


def _check_k(mu, c, k):
    s = shadow_size(mu, c)
    if k < 0 or k > s:
        raise ValueError(f"k={k} must lie in 0..{s} (the shadow size)")
    return s


# -- tableaux -------------------------------------------------------------------


@dataclass(frozen=True)
class Tableau:
    shape: Partition
    filling: tuple  # ((cell, entry), ...) sorted by cell
    white: frozenset

    def entry(self, cell):
        return dict(self.filling).get(Cell(*cell))

    def row_of(self, e: int) -> int:
        for cell, x in self.filling:
            if x == e:
                return cell.p
        raise KeyError(e)

    def column_of(self, e: int) -> int:
        for cell, x in self.filling:
            if x == e:
                return cell.q
        raise KeyError(e)

    def to_json(self):
        rows = []
        fill = dict(self.filling)
        for r, m in enumerate(self.shape.parts):
            rows.append([fill.get(Cell(r, q)) for q in range(m)])
        return {"rows": rows, "white": [list(x) for x in sorted(self.white)]}


def _row_fillings(groups, entries):
    """Distribute ``entries`` into consecutive groups of given sizes, each sorted."""
    if not groups:
        yield ()
        return
    first, rest = groups[0], groups[1:]
    for chosen in combinations(entries, first):
        remaining = [e for e in entries if e not in chosen]
        for tail in _row_fillings(rest, remaining):
            yield (chosen,) + tail


def enum_T(mu: Partition, c, k: int) -> list[Tableau]:
    """Injective row-increasing fillings by ``1..n`` whose ``k`` white cells end
    their rows inside the shadow of ``c``."""
    _check_k(mu, c, k)
    n = mu.size - k
    out = []
    for w in white_vectors(mu, c, k):
        filled = [mu[r] - w[r] for r in range(len(mu))]
        white = frozenset(Cell(r, q) for r in range(len(mu)) for q in range(filled[r], mu[r]))
        for rows in _row_fillings(filled, list(range(1, n + 1))):
            fill = tuple(
                (Cell(r, q), e) for r, row in enumerate(rows) for q, e in enumerate(row)
            )
            out.append(Tableau(mu, fill, white))
    return out


def count_T(mu: Partition, c, k: int) -> int:
    """``#T`` by the product formula, without enumerating."""
    _check_k(mu, c, k)
    return sum(_multinomial([mu[r] - w[r] for r in range(len(mu))]) for w in white_vectors(mu, c, k))


# -- selections -----------------------------------------------------------------


@dataclass(frozen=True)
class Selection:
    shape: Partition
    anchor: Cell
    circled: frozenset

    @property
    def k(self):
        return len(self.circled)

    def removed_per_row(self) -> tuple:
        return tuple(sum(1 for x in self.circled if x.p == r) for r in range(len(self.shape)))

    def to_json(self):
        return {
            "parts": list(self.shape.parts),
            "anchor": list(self.anchor),
            "circled": [list(x) for x in sorted(self.circled, key=pseudo_lex_key)],
        }


def is_valid_selection(sel: Selection) -> bool:
    """Circled cells lie in the shadow and each row's circles form a suffix of it."""
    mu, (i, j) = sel.shape, sel.anchor
    for x in sel.circled:
        if x not in mu or x.p < i or x.q < j:
            return False
    for r, w in enumerate(sel.removed_per_row()):
        if any(Cell(r, q) not in sel.circled for q in range(mu[r] - w, mu[r])):
            return False
    return True


def enum_F(mu: Partition, c, k: int) -> list[Selection]:
    c = Cell(*c)
    if c not in mu:
        raise ValueError(f"cell {c} is not in {mu}")
    if k > shadow_size(mu, c):
        return []
    out = []
    for w in white_vectors(mu, c, k):
        circ = frozenset(Cell(r, q) for r in range(len(mu)) for q in range(mu[r] - w[r], mu[r]))
        out.append(Selection(mu, c, circ))
    return out


def mu_F(sel: Selection) -> Partition:
    """Row lengths after removing the circled cells, re-sorted into a partition."""
    w = sel.removed_per_row()
    return Partition.from_lengths(sel.shape[r] - w[r] for r in range(len(sel.shape)))


def available_positions(sel: Selection) -> dict:
    """Per shadow column ``q``: rows at or above the anchor whose last cell is in
    column ``q`` once their circled cells right of ``q`` are removed (ascending)."""
    mu, (i, j) = sel.shape, sel.anchor
    w = sel.removed_per_row()
    out = {}
    for q in range(mu[i] - 1, j - 1, -1):
        out[q] = [r for r in range(i, len(mu)) if mu[r] > q and mu[r] - w[r] <= q + 1]
    return out


def mu_F_holes(sel: Selection) -> HoledDiagram:
    """Place one hole per circled cell, in the same column.

    Columns are scanned from the right; a circled cell with ``l`` available
    positions below it in its column puts a hole at ``(i + l, column)``.
    """
    i, _ = sel.anchor
    avail = available_positions(sel)
    holes = []
    for q in sorted(avail, reverse=True):
        rows = avail[q]
        for r in rows:
            if Cell(r, q) in sel.circled:
                l = sum(1 for r2 in rows if r2 < r)
                holes.append(Cell(i + l, q))
    if len(holes) != sel.k:
        raise AssertionError(f"placed {len(holes)} holes for {sel.k} circles")
    return HoledDiagram(sel.shape, holes)


def depth_tuple(hd: HoledDiagram) -> tuple:
    """Sorted depths: non-hole cells above each hole in its column."""
    out = []
    for a, b in hd.holes:
        height = hd.shape.column_height(b)
        out.append(sum(1 for r in range(a + 1, height) if Cell(r, b) not in hd.holes))
    return tuple(sorted(out))


def counting_identity(mu: Partition, c, k: int) -> bool:
    """``sum_F n!/mu_F! == #T``, both sides enumerated independently."""
    n = mu.size - k
    lhs = sum(count_row_increasing(mu_F(F), n) for F in enum_F(mu, c, k))
    return lhs == len(enum_T(mu, c, k))


def depth_tuples_distinct(mu: Partition, c, k: int) -> bool:
    tuples = [depth_tuple(mu_F_holes(F)) for F in enum_F(mu, c, k)]
    return len(set(tuples)) == len(tuples)
