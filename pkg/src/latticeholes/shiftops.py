"""Symmetric-function operators acting on lattice determinants by moving cells.

``p_k(d)`` pushes one cell down by ``k``, ``e_k(d)`` pushes ``k`` distinct
cells down by one, and ``h_k(d)`` pushes ``k`` distinct holes up by one.
Everything is parameterized by the alphabet: ``"x"`` moves along rows
(the ``p`` coordinate), ``"y"`` along columns (the ``q`` coordinate).

The complement of a diagram is never stored.  Only a hole lying under some
cell of its line can move, and those form a finite set.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .determinant import NotInSpanError, delta, extract_diagram_coefficients, sort_sign
from .diagrams import Cell, HoledDiagram, LatticeDiagram, Partition, pseudo_lex_key
from .polycore import (
    Polynomial,
    apply_operator,
    complete,
    elementary,
    falling,
    power_sum,
)

_AXIS = {"x": 0, "y": 1}


class IdentityViolation(AssertionError):
    """A claimed identity between determinants failed to hold exactly."""


@dataclass
class SignedDiagramSum:
    terms: list = field(default_factory=list)  # (coefficient, LatticeDiagram)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def as_dict(self) -> dict:
        return {D: c for c, D in self.terms}

    def expand(self, n: int) -> Polynomial:
        out = Polynomial.zero(n)
        for c, D in self.terms:
            out = out + delta(D).scale(c)
        return out

    def to_json(self):
        return [[str(c), [list(x) for x in D.order]] for c, D in self.terms]


def _finish(acc: dict) -> SignedDiagramSum:
    terms = [(c, D) for D, c in acc.items() if c]
    terms.sort(key=lambda t: tuple(pseudo_lex_key(x) for x in t[1].order))
    return SignedDiagramSum(terms)


def _move(c: Cell, axis: int, step: int) -> Cell:
    return Cell(c.p - step, c.q) if axis == 0 else Cell(c.p, c.q - step)


def pk_apply(k: int, L: LatticeDiagram, alphabet: str = "x") -> SignedDiagramSum:
    """``p_k(d) Delta_L`` as a signed sum of determinants."""
    if k < 1:
        raise ValueError("k must be positive")
    axis = _AXIS[alphabet]
    cells = list(L.order)
    acc = {}
    for idx, c in enumerate(cells):
        coord = c[axis]
        if coord < k:
            continue
        moved = list(cells)
        moved[idx] = _move(c, axis, k)
        sign = sort_sign(moved, key=pseudo_lex_key)
        if not sign:
            continue
        D = LatticeDiagram(moved)
        acc[D] = acc.get(D, 0) + sign * falling(coord, k)
    return _finish(acc)


def ek_apply(k: int, L: LatticeDiagram, alphabet: str = "x") -> SignedDiagramSum:
    """``e_k(d) Delta_L``: ``k`` distinct cells each move one step."""
    if k < 1:
        raise ValueError("k must be positive")
    axis = _AXIS[alphabet]
    cells = list(L.order)
    acc = {}
    for idxs in combinations(range(len(cells)), k):
        moved = list(cells)
        coef = 1
        for t in idxs:
            coef *= cells[t][axis]
            moved[t] = _move(cells[t], axis, 1)
        if not coef:
            continue
        sign = sort_sign(moved, key=pseudo_lex_key)
        if not sign:
            continue
        D = LatticeDiagram(moved)
        acc[D] = acc.get(D, 0) + sign * coef
    return _finish(acc)


def movable_holes(L: LatticeDiagram, alphabet: str = "x") -> list[Cell]:
    """Complement cells lying strictly under some cell of the same line."""
    axis = _AXIS[alphabet]
    other = 1 - axis
    top = {}
    for c in L.cells:
        top[c[other]] = max(top.get(c[other], -1), c[axis])
    out = []
    for line, t in top.items():
        for a in range(t):
            h = Cell(a, line) if axis == 0 else Cell(line, a)
            if h not in L.cells:
                out.append(h)
    return sorted(out, key=pseudo_lex_key)


def _line_coefficient(src: tuple, dst: frozenset, drop: int) -> int:
    """Sum over ways of lowering the coordinates ``src`` (ascending) by a total of
    ``drop`` onto exactly ``dst``, weighted by falling factorials and the sign of
    the resulting order within the line."""
    total = 0

    def rec(t, left, acc_coef, acc):
        nonlocal total
        if t == len(src):
            if left == 0 and frozenset(acc) == dst and len(set(acc)) == len(acc):
                total += acc_coef * sort_sign(acc)
            return
        a = src[t]
        for b in range(0, min(a, left) + 1):
            if a - b not in dst:
                continue
            rec(t + 1, left - b, acc_coef * falling(a, b), acc + [a - b])

    rec(0, drop, 1, [])
    return total


def hk_apply(k: int, L: LatticeDiagram, alphabet: str = "x") -> SignedDiagramSum:
    """``h_k(d) Delta_L``: ``k`` distinct holes each move one step up.

    A chosen hole may move into a cell of ``L`` or into the place left by
    another chosen hole.  The coefficient of each resulting diagram is
    collected line by line from the falling-factorial weights of the cell
    moves that realize it.
    """
    if k < 1:
        raise ValueError("k must be positive")
    axis = _AXIS[alphabet]
    other = 1 - axis
    cells = list(L.order)
    holes = movable_holes(L, alphabet)
    acc = {}
    lines = defaultdict(list)
    for c in cells:
        lines[c[other]].append(c[axis])
    for chosen in combinations(holes, k):
        chosen_set = set(chosen)
        up = [_move(h, axis, -1) for h in chosen]
        if any(u not in L.cells and u not in chosen_set for u in up):
            continue
        new_holes = {h for h in holes if h not in chosen_set} | set(up)
        region = set(L.cells) | set(holes)
        new_cells = region - new_holes
        D = LatticeDiagram(new_cells)
        if D in acc:
            continue
        acc[D] = _hole_move_coefficient(L, D, axis, lines)
    return _finish(acc)


def _hole_move_coefficient(L, D, axis, lines) -> int:
    other = 1 - axis
    dst_lines = defaultdict(set)
    for c in D.cells:
        dst_lines[c[other]].add(c[axis])
    coef = 1
    for line, src in lines.items():
        src_sorted = tuple(sorted(src))
        dst = frozenset(dst_lines.get(line, ()))
        drop = sum(src) - sum(dst)
        coef *= _line_coefficient(src_sorted, dst, drop)
        if not coef:
            return 0
    # Sorting inside each line is accounted for above; what remains is the
    # sign of interleaving the lines in pseudo-lex order.
    return coef * _interleave_sign(L, D, axis)


def _interleave_sign(L, D, axis) -> int:
    other = 1 - axis
    src = list(L.order)
    slots = defaultdict(list)
    for pos, c in enumerate(src):
        slots[c[other]].append(pos)
    placed = [None] * len(src)
    dst_lines = defaultdict(list)
    for c in D.cells:
        dst_lines[c[other]].append(c)
    for line, positions in slots.items():
        ordered = sorted(dst_lines[line], key=lambda c: c[axis])
        # within a line, cells sit in the slots in increasing moving coordinate
        for pos, c in zip(sorted(positions, key=lambda p: src[p][axis]), ordered):
            placed[pos] = c
    return sort_sign(placed, key=pseudo_lex_key)


# -- direct operators ---------------------------------------------------------


def symmetric_operator(kind: str, k: int, n: int, alphabet: str = "x") -> Polynomial:
    if k == 0:
        return Polynomial.constant(n, 1)
    return {"pk": power_sum, "ek": elementary, "hk": complete}[kind](k, n, alphabet)


_SHIFT = {"pk": pk_apply, "ek": ek_apply, "hk": hk_apply}


def shift(kind: str, k: int, L: LatticeDiagram, alphabet: str = "x") -> SignedDiagramSum:
    return _SHIFT[kind](k, L, alphabet)


def check_shift(kind: str, k: int, L: LatticeDiagram, alphabet: str = "x") -> bool:
    """Combinatorial expansion re-expanded through ``delta`` equals direct differentiation."""
    n = len(L)
    direct = apply_operator(symmetric_operator(kind, k, n, alphabet), delta(L))
    return shift(kind, k, L, alphabet).expand(n) == direct


def newton_recursion_check(k: int, L: LatticeDiagram, alphabet: str = "x") -> bool:
    """``h_k = sum_{m=1..k} (-1)^{m+1} h_{k-m} e_m`` acting on ``Delta_L``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    n = len(L)
    D = delta(L)
    lhs = apply_operator(symmetric_operator("hk", k, n, alphabet), D)
    rhs = Polynomial.zero(n)
    for m in range(1, k + 1):
        if m > n:
            break
        op = symmetric_operator("hk", k - m, n, alphabet) * symmetric_operator("ek", m, n, alphabet)
        term = apply_operator(op, D)
        rhs = rhs + (term if m % 2 else -term)
    return lhs == rhs


# -- two holes ----------------------------------------------------------------


@dataclass
class TwoHoleResult:
    source: HoledDiagram
    targets: list  # HoledDiagram or None when the target leaves the shape
    constants: list
    same_sign_expected: bool

    @property
    def signs_ok(self) -> bool:
        a, b = self.constants
        if not a or not b:
            return True
        return (a > 0) == (b > 0) if self.same_sign_expected else (a > 0) != (b > 0)


def two_hole_identity(mu: Partition, i: int, j: int, k: int, l: int, variant: str = "horizontal") -> TwoHoleResult:
    """Solve ``e_{k-1}(X) p_l(Y)`` (horizontal) or ``e_{l-1}(Y) p_k(X)`` (vertical)
    applied to a two-hole diagram as a combination of the two reachable two-hole
    diagrams.  ``signs_ok`` compares against the expected pattern (horizontal
    constants sharing a sign, vertical ones not); in practice it comes out mirrored.

    A target whose holes leave ``mu`` is recorded as ``None`` with constant 0.
    """
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    if variant == "horizontal":
        src_holes = [(i, j), (i + 1, j)]
    elif variant == "vertical":
        src_holes = [(i, j), (i, j + 1)]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    tgt_holes = [[(i, j), (i + k, j + l)], [(i + k, j), (i, j + l)]]
    if not all(h in mu for h in src_holes):
        raise ValueError(f"source holes {src_holes} are not cells of {mu}")
    targets = [HoledDiagram(mu, t) if all(h in mu for h in t) else None for t in tgt_holes]
    if not any(targets):
        raise ValueError(f"no target two-hole diagram of {mu} is reachable")
    src = HoledDiagram(mu, src_holes)
    n = mu.size - 2
    if variant == "horizontal":
        op = symmetric_operator("ek", k - 1, n, "x") * power_sum(l, n, "y")
    else:
        op = symmetric_operator("ek", l - 1, n, "y") * power_sum(k, n, "x")
    lhs = apply_operator(op, delta(src.diagram))
    live = [t.diagram for t in targets if t is not None]
    try:
        got = iter(extract_diagram_coefficients(lhs, live))
    except NotInSpanError as err:
        raise IdentityViolation(f"two-hole identity fails for {mu}, {(i, j, k, l)}, {variant}: {err}") from None
    constants = [next(got) if t is not None else 0 for t in targets]
    return TwoHoleResult(src, targets, constants, variant == "horizontal")
