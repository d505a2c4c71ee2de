"""Lattice diagrams, partitions, shadows and holes.

Cells are ``(p, q)`` pairs: ``p`` is the row (the x-exponent) and ``q`` the
column (the y-exponent).  Row 0 is the bottom row of a Ferrers diagram, so a
partition ``(4, 2, 1)`` has four cells in row 0.
"""

from __future__ import annotations

import re
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple


class InvalidCellError(ValueError):
    """A cell is not where an operation needs it to be."""


class Cell(NamedTuple):
    p: int
    q: int

    def __repr__(self):
        return f"({self.p},{self.q})"


def pseudo_lex_key(c):
    return (c[1], c[0])


def _as_cell(c) -> Cell:
    p, q = c
    if p < 0 or q < 0:
        raise InvalidCellError(f"negative coordinate in cell {tuple(c)}")
    return Cell(int(p), int(q))


class LatticeDiagram:
    """A finite set of distinct cells with its pseudo-lexicographic order."""

    __slots__ = ("cells", "__dict__")

    def __init__(self, cells: Iterable = ()):
        cells = [_as_cell(c) for c in cells]
        fs = frozenset(cells)
        if len(fs) != len(cells):
            raise InvalidCellError("repeated cell in lattice diagram")
        self.cells = fs

    @cached_property
    def order(self) -> tuple[Cell, ...]:
        """Cells sorted by column, then by row."""
        return tuple(sorted(self.cells, key=pseudo_lex_key))

    def __len__(self):
        return len(self.cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.order)

    def __contains__(self, c):
        return tuple(c) in self.cells

    def __eq__(self, other):
        if not isinstance(other, LatticeDiagram):
            return NotImplemented
        return self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        return "LatticeDiagram(%s)" % format_cells(self.order)

    @property
    def x_degree(self) -> int:
        return sum(c.p for c in self.cells)

    @property
    def y_degree(self) -> int:
        return sum(c.q for c in self.cells)

    def to_json(self):
        return {"cells": [list(c) for c in self.order]}


def pseudo_lex_order(d: LatticeDiagram) -> list[Cell]:
    return list(d.order)


class Partition:
    """A weakly decreasing tuple of positive parts; part ``r`` is the length of row ``r``."""

    __slots__ = ("parts", "__dict__")

    def __init__(self, parts: Iterable[int]):
        parts = tuple(int(x) for x in parts)
        if any(x <= 0 for x in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        self.parts = parts

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, r):
        return self.parts[r]

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "Partition(%s)" % ",".join(map(str, self.parts))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def row_length(self, r: int) -> int:
        return self.parts[r] if 0 <= r < len(self.parts) else 0

    def column_height(self, q: int) -> int:
        return sum(1 for x in self.parts if x > q)

    @cached_property
    def diagram(self) -> LatticeDiagram:
        return LatticeDiagram(Cell(r, q) for r, m in enumerate(self.parts) for q in range(m))

    def __contains__(self, c):
        p, q = c
        return 0 <= p < len(self.parts) and 0 <= q < self.parts[p]

    def factorial(self) -> int:
        """``mu! = mu_1! mu_2! ...``"""
        from math import factorial

        out = 1
        for x in self.parts:
            out *= factorial(x)
        return out

    def to_json(self):
        return {"parts": list(self.parts)}

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "Partition":
        """Sort arbitrary nonnegative row lengths into a partition, dropping zeros."""
        return cls(sorted((x for x in lengths if x > 0), reverse=True))


def partition_cells(mu: Partition) -> LatticeDiagram:
    return mu.diagram


def partitions_of(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    out = []

    def rec(rest, cap, acc):
        if rest == 0:
            out.append(Partition(acc))
            return
        for x in range(min(rest, cap), 0, -1):
            rec(rest - x, x, acc + [x])

    if n > 0:
        rec(n, n, [])
    return out


def _check_cell(mu: Partition, c) -> Cell:
    c = Cell(*c)
    if c not in mu:
        raise InvalidCellError(f"cell {c} is not in {mu}")
    return c


def shadow(mu: Partition, c) -> frozenset[Cell]:
    """Cells of ``mu`` weakly above and weakly right of ``c``."""
    i, j = _check_cell(mu, c)
    return frozenset(Cell(r, q) for r in range(i, len(mu)) for q in range(j, mu[r]))


def shadow_size(mu: Partition, c) -> int:
    i, j = _check_cell(mu, c)
    return sum(max(0, mu[r] - j) for r in range(i, len(mu)))


def right_edge_cells(mu: Partition, c) -> frozenset[Cell]:
    """Shadow cells that end their row."""
    return frozenset(x for x in shadow(mu, c) if (x.p, x.q + 1) not in mu)


class HoledDiagram:
    """A partition shape with some of its cells removed."""

    __slots__ = ("shape", "holes", "__dict__")

    def __init__(self, shape: Partition, holes: Iterable = ()):
        holes = frozenset(Cell(*h) for h in holes)
        bad = [h for h in holes if h not in shape]
        if bad:
            raise InvalidCellError(f"holes {sorted(bad)} are not cells of {shape}")
        self.shape = shape
        self.holes = holes

    @cached_property
    def diagram(self) -> LatticeDiagram:
        return LatticeDiagram(self.shape.diagram.cells - self.holes)

    def __eq__(self, other):
        if not isinstance(other, HoledDiagram):
            return NotImplemented
        return self.shape == other.shape and self.holes == other.holes

    def __hash__(self):
        return hash((self.shape, self.holes))

    def __repr__(self):
        return "HoledDiagram(%r, holes=%s)" % (self.shape, format_cells(sorted(self.holes, key=pseudo_lex_key)))

    def to_json(self):
        return {
            "parts": list(self.shape.parts),
            "holes": [list(h) for h in sorted(self.holes, key=pseudo_lex_key)],
        }


def remove_cells(mu: Partition, cells: Iterable) -> HoledDiagram:
    cells = [Cell(*c) for c in cells]
    if len(set(cells)) != len(cells):
        raise InvalidCellError("repeated hole")
    return HoledDiagram(mu, cells)


def hole_subsets(mu: Partition, c, k: int) -> list[frozenset[Cell]]:
    """All ``k``-subsets of the shadow of ``c``, in a fixed order."""
    sh = sorted(shadow(mu, c))
    if k > len(sh):
        raise ValueError(f"k={k} exceeds shadow size {len(sh)}")
    return [frozenset(s) for s in combinations(sh, k)]


# -- text syntax --------------------------------------------------------

_CELL_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_partition(text: str) -> Partition:
    text = text.strip().strip("()[]")
    return Partition(int(x) for x in text.split(",") if x.strip())


def parse_cell(text: str) -> Cell:
    text = text.strip()
    if not text.startswith("("):
        text = "(" + text + ")"
    m = _CELL_RE.fullmatch(text)
    if not m:
        raise ValueError(f"cannot parse cell {text!r}")
    return Cell(int(m.group(1)), int(m.group(2)))


def parse_cells(text: str) -> list[Cell]:
    parts = [t for t in text.split(";") if t.strip()]
    return [parse_cell(t) for t in parts]


def format_cells(cells) -> str:
    return ";".join("(%d,%d)" % tuple(c) for c in cells)
