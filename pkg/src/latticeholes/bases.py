"""Explicit bases for the Y-degree-0 part of the k-hole sums.

A monomial operator that lands a bihomogeneous determinant in Y-degree 0
must carry the full Y-degree, so it acts as ``x^a(d) c_beta`` where
``c_beta`` is the coefficient of ``y^beta`` in the determinant.  Index sets
are therefore pairs ``(beta, a)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .combinatorics import Selection, count_T, depth_tuple, enum_F, mu_F, mu_F_holes
from .determinant import NotInSpanError, delta, extract_diagram_coefficients
from .diagrams import Cell, LatticeDiagram, Partition
from .echelon import Echelon
from .polycore import Polynomial, _diff, apply_operator, complete, y_layers
from .shiftops import SignedDiagramSum, hk_apply
from .spaces import GradedSubspace, build_Mkij, x_closure


class TheoremViolation(AssertionError):
    pass


@dataclass(frozen=True, order=True)
class MonomialIndex:
    layer: tuple  # y-exponent vector beta
    xmon: tuple  # x-exponent vector of the derivative applied to the layer

    def to_json(self):
        return {"layer": list(self.layer), "xmon": list(self.xmon)}


def x_part_generators(D: LatticeDiagram) -> list[Polynomial]:
    """The Y-layer coefficients of ``Delta_D``, ordered by layer."""
    layers = y_layers(delta(D))
    return [layers[b] for b in sorted(layers, reverse=True)]


def x_space(D: LatticeDiagram) -> GradedSubspace:
    return x_closure(x_part_generators(D), len(D))


def apply_index(idx: MonomialIndex, layers: dict, n: int) -> Polynomial:
    base = layers.get(idx.layer)
    if base is None:
        return Polynomial.zero(n)
    terms = base.terms
    for v, e in enumerate(idx.xmon):
        if e:
            terms = _diff(terms, v, e)
    return Polynomial(n, terms, _trusted=True)


@lru_cache(maxsize=512)
def greedy_monomial_basis(D: LatticeDiagram) -> tuple:
    """Monomial indices whose values form a basis of :func:`x_space`.

    Degree by degree from the top: first the layers themselves, then every
    first X-derivative of an index kept one degree higher, each kept iff its
    value is independent of the values kept so far in that degree.
    """
    n = len(D)
    layers = y_layers(delta(D))
    zero = (0,) * n
    kept = []
    level = []
    ech = Echelon()
    for b in sorted(layers, reverse=True):
        if ech.insert(layers[b].terms):
            level.append(MonomialIndex(b, zero))
    while level:
        kept.extend(level)
        cands = sorted(
            {MonomialIndex(ix.layer, ix.xmon[:v] + (ix.xmon[v] + 1,) + ix.xmon[v + 1 :]) for ix in level for v in range(n)},
            reverse=True,
        )
        ech = Echelon()
        level = []
        for ix in cands:
            val = apply_index(ix, layers, n)
            if val and ech.insert(val.terms):
                level.append(ix)
    return tuple(kept)


@dataclass
class BasisEntry:
    selection: Selection
    index: MonomialIndex
    value: Polynomial


@dataclass
class BasisFamily:
    mu: Partition
    anchor: Cell
    k: int
    entries: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def selections(self) -> list:
        seen = []
        for e in self.entries:
            if e.selection not in seen:
                seen.append(e.selection)
        return seen

    def span(self) -> GradedSubspace:
        S = GradedSubspace(self.mu.size - self.k)
        for e in self.entries:
            S.add(e.value)
        return S


def build_B(mu: Partition, c, k: int, verify: bool = False) -> BasisFamily:
    """``{ M_S(d) Delta_{mu_F^k} : S in S(mu_F), F }`` with ``S(mu_F)`` taken as the
    greedy monomial basis of ``Delta_{mu_F}``."""
    c = Cell(*c)
    n = mu.size - k
    fam = BasisFamily(mu, c, k)
    for F in enum_F(mu, c, k):
        nu = mu_F(F)
        D_F = mu_F_holes(F).diagram
        layers = y_layers(delta(D_F))
        for ix in greedy_monomial_basis(nu.diagram):
            fam.entries.append(BasisEntry(F, ix, apply_index(ix, layers, n)))
    if verify:
        report = verify_B(fam)
        if not report["ok"]:
            raise TheoremViolation(f"basis check failed for {mu}, {c}, k={k}: {report}")
    return fam


def verify_B(fam: BasisFamily) -> dict:
    """Size, independence and containment of a family against the X-part of the k-hole sum."""
    mu, c, k = fam.mu, fam.anchor, fam.k
    target = build_Mkij(mu, c, k, x_only=True)
    span = fam.span()
    nT = count_T(mu, c, k)
    out = {
        "size": len(fam),
        "count_T": nT,
        "dimension": target.dimension,
        "independent": span.dimension == len(fam),
        "contained": all(target.contains(e.value) for e in fam.entries),
        "x_only": all(e.value.is_x_only() for e in fam.entries),
    }
    out["ok"] = (
        out["independent"] and out["contained"] and out["x_only"] and len(fam) == nT == target.dimension
    )
    return out


# -- the depth filtration ---------------------------------------------------------


def descending_stages(depths: tuple) -> list:
    """``h_k^{d_1} h_{k-1}^{d_2-d_1} ... h_1^{d_k-d_{k-1}}`` as ``[(subscript, power)]``."""
    k = len(depths)
    out, prev = [], 0
    for m, d in enumerate(depths):
        out.append((k - m, d - prev))
        prev = d
    return out


def uniform_stages(depths: tuple) -> list:
    """``h_k`` at every stage; kept for comparison with the descending reading."""
    k = len(depths)
    out, prev = [], 0
    for d in depths:
        out.append((k, d - prev))
        prev = d
    return out


KILL_STRATEGIES: dict[str, Callable] = {"descending": descending_stages, "uniform": uniform_stages}


def apply_stages(stages, D: LatticeDiagram, direct: bool = False):
    """Apply ``prod h_s(dX)^e`` to ``Delta_D``.

    By default through the hole-moving expansion on signed sums of diagrams;
    ``direct`` differentiates the polynomial instead.
    """
    if direct:
        n = len(D)
        P = delta(D)
        for s, e in stages:
            op = complete(s, n)
            for _ in range(e):
                P = apply_operator(op, P)
        return P
    acc = {D: 1}
    for s, e in stages:
        for _ in range(e):
            nxt = {}
            for L, c in acc.items():
                for c2, L2 in hk_apply(s, L):
                    v = nxt.get(L2, 0) + c * c2
                    if v:
                        nxt[L2] = v
                    else:
                        nxt.pop(L2, None)
            acc = nxt
    return SignedDiagramSum([(c, L) for L, c in acc.items()])


def depth_filtration_kill(fam: BasisFamily, target: Selection, strategy: str = "descending", direct: bool = False) -> dict:
    """Apply the h-operator product read off ``target``'s depth tuple to every
    ``Delta_{mu_F^k}`` in the family.

    Selections whose depth tuple is lexicographically smaller must be killed;
    the target must survive as a nonzero multiple of ``Delta_{mu_F}``.
    Selections with larger tuples are listed but not judged.
    """
    stages = KILL_STRATEGIES[strategy](depth_tuple(mu_F_holes(target)))
    d0 = depth_tuple(mu_F_holes(target))
    rows = []
    ok = True
    for F in fam.selections():
        D = mu_F_holes(F).diagram
        d = depth_tuple(mu_F_holes(F))
        res = apply_stages(stages, D, direct=direct)
        zero = not res if direct else len(res) == 0
        if F == target:
            if direct:
                try:
                    (coef,) = extract_diagram_coefficients(res, [mu_F(F).diagram])
                    verdict = coef != 0
                except NotInSpanError:
                    verdict = False
            else:
                verdict = len(res) == 1 and res.terms[0][1] == mu_F(F).diagram
            role = "target"
        elif d < d0:
            verdict = zero
            role = "smaller"
        else:
            verdict = None
            role = "larger"
        if verdict is False:
            ok = False
        rows.append({"selection": F, "depths": d, "role": role, "killed": zero, "ok": verdict})
    return {"target_depths": d0, "stages": stages, "rows": rows, "ok": ok}
