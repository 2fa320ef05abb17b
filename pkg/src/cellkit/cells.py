"""Right and left cells, Lusztig's a-function and the Duflo set.

The right preorder uses the convention ``x <=_R y`` when the KL element of y
occurs in ``KL_x * H`` for some H. It is generated by right multiplication by
the KL elements of simple reflections, which in the KL basis is

    KL_x KL_s = (v + v^-1) KL_x                                  if xs < x
    KL_x KL_s = KL_{xs} + sum_{z < x, zs < z} mu(z, x) KL_z      if xs > x
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Literal, Optional

import networkx as nx

from cellkit.coxeter import CoxeterContext, Element, rsk_shape
from cellkit.errors import InconsistencyError, UserError
from cellkit.hecke import KLTable, _mul_idx, _to_kl_idx, kl_table
from cellkit.laurent import LaurentPoly

log = logging.getLogger(__name__)

__all__ = [
    "CellPartition",
    "AFunctionTable",
    "generator_edges",
    "right_preorder",
    "left_cells",
    "preorder_from_edges",
    "kl_right_mul_gen",
    "a_function",
    "a_value_from_shape",
    "validate_fast_mode",
    "duflo_set",
]


@dataclass
class CellPartition:
    """Cells of one side, with the induced partial order on cells.

    ``order`` holds pairs ``(i, j)`` of cell ids with cell i <= cell j
    (reflexive, transitive).
    """

    side: Literal["left", "right"]
    ctx: CoxeterContext
    cell_id: dict[Element, int]
    order: frozenset[tuple[int, int]]
    _members: dict[int, list[Element]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        members: dict[int, list[Element]] = {}
        for x in self.ctx.elements:
            members.setdefault(self.cell_id[x], []).append(x)
        self._members = members

    @property
    def num_cells(self) -> int:
        return len(self._members)

    def cells(self) -> list[list[Element]]:
        return [self._members[i] for i in sorted(self._members)]

    def cell_of(self, x: Element) -> list[Element]:
        return self._members[self.cell_id[x]]

    def same_cell(self, x: Element, y: Element) -> bool:
        return self.cell_id[x] == self.cell_id[y]

    def leq(self, x: Element, y: Element) -> bool:
        return (self.cell_id[x], self.cell_id[y]) in self.order


@dataclass
class AFunctionTable:
    a: dict[Element, int]
    mode: Literal["exact", "fast"]

    def __getitem__(self, x: Element) -> int:
        return self.a[x]


def kl_right_mul_gen(table: KLTable, d: dict[int, LaurentPoly], s: int) -> dict[int, LaurentPoly]:
    """Right multiplication by KL_s of an element given in KL coordinates (by index)."""
    ctx = table.ctx
    rm, ln = ctx.rmul[s], ctx.lengths
    out: dict[int, LaurentPoly] = {}

    def add(i, p):
        q = out.get(i)
        out[i] = p if q is None else q + p

    for x, p in d.items():
        xs = rm[x]
        if ln[xs] < ln[x]:
            add(x, p.shift(1) + p.shift(-1))
        else:
            add(xs, p)
            for z, m in table.mu_below(x):
                if ln[rm[z]] < ln[z]:
                    add(z, p * m)
    return {i: p for i, p in out.items() if p}


def generator_edges(table: KLTable) -> list[set[int]]:
    """``edges[x]`` = indices y with k_{x,s,y} != 0 for some simple s."""
    ctx = table.ctx
    edges: list[set[int]] = []
    for x in range(len(ctx)):
        out = set()
        for s in ctx.gens:
            out.update(kl_right_mul_gen(table, {x: LaurentPoly.monomial(0)}, s))
        edges.append(out)
    return edges


def preorder_from_edges(ctx: CoxeterContext, edges: list[set[int]], side: str = "right") -> CellPartition:
    """Cells = strongly connected components of the edge graph; order = reachability."""
    g = nx.DiGraph()
    g.add_nodes_from(range(len(ctx)))
    for x, ys in enumerate(edges):
        g.add_edges_from((x, y) for y in ys)
    comps = list(nx.strongly_connected_components(g))
    comp_of = {}
    for k, comp in enumerate(comps):
        for x in comp:
            comp_of[x] = k
    # ids in order of first appearance along the (length, word)-sorted element list
    renum: dict[int, int] = {}
    for x in range(len(ctx)):
        renum.setdefault(comp_of[x], len(renum))
    dag = nx.condensation(g, scc=comps)
    order = set()
    for k in dag.nodes:
        order.add((renum[k], renum[k]))
        for j in nx.descendants(dag, k):
            order.add((renum[k], renum[j]))
    cell_id = {ctx.elements[x]: renum[comp_of[x]] for x in range(len(ctx))}
    return CellPartition(side, ctx, cell_id, frozenset(order))


def right_preorder(table: KLTable) -> CellPartition:
    return preorder_from_edges(table.ctx, generator_edges(table), "right")


def left_cells(table: KLTable, right: Optional[CellPartition] = None) -> CellPartition:
    """x ~_L y iff x^-1 ~_R y^-1, obtained by transporting the right cells."""
    ctx = table.ctx
    right = right or right_preorder(table)
    raw = {x: right.cell_id[x.inverse()] for x in ctx.elements}
    renum: dict[int, int] = {}
    for x in ctx.elements:
        renum.setdefault(raw[x], len(renum))
    order = frozenset((renum[i], renum[j]) for i, j in right.order)
    return CellPartition("left", ctx, {x: renum[raw[x]] for x in ctx.elements}, order)


# ---------------------------------------------------------------------------
# a-function


def a_value_from_shape(shape: tuple[int, ...]) -> int:
    """sum over columns of C(column length, 2)."""
    conj = [sum(1 for r in shape if r > j) for j in range(shape[0])] if shape else []
    return sum(comb(c, 2) for c in conj)


def _exact_a(table: KLTable) -> list[int]:
    # For each y, KL_y KL_z is built in KL coordinates by induction on z:
    #   KL_y KL_z = (KL_y KL_{zs}) KL_s - sum_{w < zs, ws < w} mu(w, zs) KL_y KL_w
    ctx = table.ctx
    N = len(ctx)
    ln, rmul = ctx.lengths, ctx.rmul
    best = [0] * N
    for y in range(N):
        prods: list[dict[int, LaurentPoly]] = [{y: LaurentPoly.monomial(0)}]
        for z in range(1, N):
            s = ctx.words[z][-1]
            zs = rmul[s][z]
            cur = kl_right_mul_gen(table, prods[zs], s)
            for w, m in table.mu_below(zs):
                if ln[rmul[s][w]] < ln[w]:
                    for u, p in prods[w].items():
                        q = cur.get(u)
                        cur[u] = p * -m if q is None else q - p * m
            cur = {u: p for u, p in cur.items() if p}
            prods.append(cur)
        for prod in prods:
            for x, p in prod.items():
                d = p.maxdeg
                if d > best[x]:
                    best[x] = d
    return best


def _brute_a(table: KLTable) -> list[int]:
    """The definition, via standard-basis products; slow, used as a test oracle."""
    ctx = table.ctx
    N = len(ctx)
    best = [0] * N
    for y in range(N):
        for z in range(N):
            prod = _mul_idx(ctx, table.column_idx(y), table.column_idx(z))
            for x, p in _to_kl_idx(table, prod).items():
                best[x] = max(best[x], p.maxdeg)
    return best


@lru_cache(maxsize=None)
def validate_fast_mode(max_rank: int = 4) -> bool:
    """Check the shape formula against the exact a-function for ranks 1..max_rank."""
    for n in range(1, max_rank + 1):
        ctx = CoxeterContext.of(n)
        exact = _exact_a(kl_table(ctx))
        for i, x in enumerate(ctx.elements):
            if a_value_from_shape(rsk_shape(x)) != exact[i]:
                raise InconsistencyError(f"fast a-function disagrees with exact at {x} (n={n})")
    log.debug("fast a-function validated against exact mode for n <= %d", max_rank)
    return True


def a_function(table: KLTable, mode: Literal["exact", "fast"] = "exact", allow_slow: bool = False) -> AFunctionTable:
    """Lusztig's a-function on all of W.

    ``exact`` maximises degrees of structure constants; it refuses rank >= 6
    unless ``allow_slow``. ``fast`` uses the RSK shape and first validates
    itself against exact mode on ranks <= 4.
    """
    ctx = table.ctx
    if mode == "exact":
        if ctx.n >= 6 and not allow_slow:
            raise UserError("exact a-function at rank >= 6 is slow; pass allow_slow=True")
        vals = _exact_a(table)
    elif mode == "fast":
        if ctx.n >= 5:
            validate_fast_mode(4)
        vals = [a_value_from_shape(rsk_shape(x)) for x in ctx.elements]
    else:
        raise UserError(f"unknown a-function mode {mode!r}")
    return AFunctionTable({x: vals[i] for i, x in enumerate(ctx.elements)}, mode)


def duflo_set(table: KLTable, afn: AFunctionTable, right: Optional[CellPartition] = None) -> list[Element]:
    """All d with a(d) = mindeg h_{e,d}; exactly one per right cell or InconsistencyError."""
    ctx = table.ctx
    missing = [x for x in ctx.elements if x not in afn.a]
    if missing:
        raise UserError(f"a-function table does not cover {missing[0]}")
    row_e = table.row_idx(0)
    duflo = [x for i, x in enumerate(ctx.elements) if afn.a[x] == row_e[i].mindeg]
    right = right or right_preorder(table)
    per_cell: dict[int, list[Element]] = {}
    for d in duflo:
        per_cell.setdefault(right.cell_id[d], []).append(d)
    for k, cell in enumerate(right.cells()):
        found = per_cell.get(k, [])
        if len(found) != 1:
            raise InconsistencyError(
                f"right cell {k} ({', '.join(map(str, cell))}) has {len(found)} Duflo elements"
            )
    return duflo
