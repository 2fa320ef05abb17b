"""Graded characters in the Grothendieck group of the principal block.

Classes are written in the dual KL basis, i.e. as combinations of simple
classes ``[L(z)]``. The exponent of v records the grading shift: ``M<i>``
corresponds to multiplication by ``v^-i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from cellkit.cells import AFunctionTable, CellPartition, a_function, duflo_set, right_preorder
from cellkit.coxeter import Element
from cellkit.errors import InconsistencyError
from cellkit.hecke import (
    KLTable,
    _dual_in_standard_idx,
    _mul_idx,
    to_dual_basis,
    _from_idx,
    STANDARD,
)
from cellkit.laurent import ZERO, LaurentPoly

__all__ = [
    "GradedCharacter",
    "QuasiSimpleReport",
    "verma_character",
    "theta_simple_character",
    "quasi_simple",
]


@dataclass
class GradedCharacter:
    """``sum_z mult[z] [L(z)]``."""

    mult: dict[Element, LaurentPoly]

    def __getitem__(self, z: Element) -> LaurentPoly:
        return self.mult.get(z, ZERO)

    def support(self) -> list[Element]:
        return sorted(self.mult, key=lambda x: (x.length, x.word))

    def items(self) -> Iterator[tuple[Element, LaurentPoly]]:
        for z in self.support():
            yield z, self.mult[z]

    def max_degree(self) -> int:
        return max(p.maxdeg for p in self.mult.values())

    def min_degree(self) -> int:
        return min(p.mindeg for p in self.mult.values())

    def is_symmetric(self) -> bool:
        return all(p.is_symmetric() for p in self.mult.values())

    def is_nonnegative(self) -> bool:
        return all(p.is_nonnegative() for p in self.mult.values())


def verma_character(table: KLTable, y: Element) -> GradedCharacter:
    """[Delta(y)] = sum_x h_{y,x} [L(x)]."""
    ctx = table.ctx
    row = table.row_idx(ctx.idx(y))
    return GradedCharacter({ctx.elements[x]: p for x, p in row.items()})


def theta_simple_character(table: KLTable, x: Element) -> GradedCharacter:
    """[theta_x L(x^-1)]: the dual KL element of x^-1 times KL_x, read in the dual KL basis."""
    ctx = table.ctx
    xi = ctx.idx(x)
    dual = _dual_in_standard_idx(table, ctx.inv[xi])
    prod = _mul_idx(ctx, dual, table.column_idx(xi))
    coords = to_dual_basis(table, _from_idx(ctx, STANDARD, prod))
    return GradedCharacter(dict(coords.coeffs))


@dataclass
class QuasiSimpleReport:
    x: Element
    duflo: Element
    a_value: int
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def lines(self) -> list[str]:
        return [f"{'PASS' if passed else 'FAIL'}\t{name}\t{detail}" for name, passed, detail in self.checks]


def quasi_simple(
    table: KLTable,
    x: Element,
    right: Optional[CellPartition] = None,
    afn: Optional[AFunctionTable] = None,
    character: Optional[GradedCharacter] = None,
) -> tuple[Element, QuasiSimpleReport]:
    """Duflo element of the right cell of x^-1, with the graded checks behind it.

    Raises InconsistencyError (carrying the report as ``.report``) if a check fails.
    """
    ctx = table.ctx
    right = right or right_preorder(table)
    if afn is None:
        afn = a_function(table, "fast" if ctx.n >= 5 else "exact")
    xinv = x.inverse()
    a = afn[xinv]
    duflos = [d for d in duflo_set(table, afn, right) if right.same_cell(d, xinv)]
    d = duflos[0]
    report = QuasiSimpleReport(x, d, a)
    ch = character or theta_simple_character(table, x)

    top = ch.max_degree()
    report.checks.append(("max_degree", top <= a, f"max degree {top} <= a(x^-1) = {a}"))
    report.checks.append(("self_dual", ch.is_symmetric(), "character fixed by v <-> v^-1"))

    verma = verma_character(table, ctx.e)
    ok, bad = True, []
    for y in right.cell_of(xinv):
        p = verma[y]
        m = p.mindeg
        if m < a or (m == a) != (y == d) or (y == d and p.coeff(a) != 1):
            ok = False
            bad.append(str(y))
    detail = f"mindeg h_(e,y) >= {a} on the cell, equality only at d = {d} with coefficient 1"
    if bad:
        detail += f"; violated at {', '.join(bad)}"
    report.checks.append(("duflo_degree", ok, detail))

    if not report.ok:
        err = InconsistencyError(f"quasi-simple checks failed for x = {x}")
        err.report = report
        raise err
    return d, report
