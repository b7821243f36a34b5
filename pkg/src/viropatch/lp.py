"""A small exact linear programming solver.

Dense two-phase primal simplex over ``Fraction`` with Bland's rule, which
guarantees termination. Problem sizes in this package are a few dozen rows
and columns at most, so no attempt is made at sparsity or numerics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = tab[r][c]
    row = [x / piv for x in tab[r]]
    tab[r] = row
    for i, other in enumerate(tab):
        if i != r and other[c] != 0:
            f = other[c]
            tab[i] = [x - f * y for x, y in zip(other, row)]
    basis[r] = c


def _simplex(tab: list[list[Fraction]], basis: list[int], allowed: int) -> str:
    """Minimize the objective stored in the last row (reduced costs, value in
    the last column). Only columns ``< allowed`` may enter the basis."""
    m = len(tab) - 1
    while True:
        obj = tab[-1]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        leave = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return UNBOUNDED
        _pivot(tab, basis, leave, enter)


def linprog(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: Sequence[bool] | None = None,
    maximize: bool = False,
) -> LPResult:
    """Solve ``min/max c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    Variables are nonnegative unless flagged in ``free``.
    """
    nvar = len(c)
    free = list(free) if free is not None else [False] * nvar
    # column map: each free variable becomes x+ - x-
    cols: list[tuple[int, int]] = []
    for j in range(nvar):
        cols.append((j, 1))
        if free[j]:
            cols.append((j, -1))
    ncol = len(cols)

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    nslack = len(A_ub)
    for i, (row, b) in enumerate(zip(A_ub, b_ub)):
        expanded = [Fraction(row[j]) * s for j, s in cols]
        slack = [_ZERO] * nslack
        slack[i] = Fraction(1)
        rows.append(expanded + slack)
        rhs.append(Fraction(b))
    for row, b in zip(A_eq, b_eq):
        rows.append([Fraction(row[j]) * s for j, s in cols] + [_ZERO] * nslack)
        rhs.append(Fraction(b))
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]

    m = len(rows)
    nstruct = ncol + nslack
    # phase one: one artificial per row
    tab = [rows[i] + [Fraction(int(i == t)) for t in range(m)] + [rhs[i]] for i in range(m)]
    basis = [nstruct + i for i in range(m)]
    phase1 = [_ZERO] * (nstruct + m) + [_ZERO]
    for i in range(m):
        phase1 = [p - x for p, x in zip(phase1, tab[i])]
    for i in range(m):
        phase1[nstruct + i] = _ZERO
    tab.append(phase1)
    _simplex(tab, basis, nstruct)
    if tab[-1][-1] != 0:
        return LPResult(INFEASIBLE)
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= nstruct:
            j = next((j for j in range(nstruct) if tab[i][j] != 0), None)
            if j is not None:
                _pivot(tab, basis, i, j)
    keep = [i for i in range(m) if basis[i] < nstruct]
    tab = [tab[i][:nstruct] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    sense = -1 if maximize else 1
    cost = [Fraction(c[j]) * s * sense for j, s in cols] + [_ZERO] * nslack
    obj = cost + [_ZERO]
    for i, bcol in enumerate(basis):
        if obj[bcol] != 0:
            f = obj[bcol]
            obj = [x - f * y for x, y in zip(obj, tab[i])]
    tab.append(obj)
    status = _simplex(tab, basis, nstruct)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)

    values = [_ZERO] * nstruct
    for i, bcol in enumerate(basis):
        values[bcol] = tab[i][-1]
    x = [_ZERO] * nvar
    for (j, s), val in zip(cols, values[:ncol]):
        x[j] += s * val
    value = sum((Fraction(c[j]) * x[j] for j in range(nvar)), _ZERO)
    return LPResult(OPTIMAL, tuple(x), value)


def feasible_point(
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nvar: int | None = None,
    free: Sequence[bool] | None = None,
) -> tuple[Fraction, ...] | None:
    if nvar is None:
        nvar = len(A_ub[0]) if A_ub else len(A_eq[0])
    res = linprog([0] * nvar, A_ub, b_ub, A_eq, b_eq, free=free)
    return res.x if res.status == OPTIMAL else None
