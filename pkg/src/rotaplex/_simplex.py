"""Exact two-phase simplex over the rationals.

Small dense tableau implementation with Bland's anti-cycling rule.  This is
not a performance-oriented LP code; problem sizes here are tens of variables
and a few hundred constraints, where exact pivoting is entirely adequate.
Variables are free by default (internally split into positive and negative
parts); pass nonneg=True when the model already constrains x >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Sequence

from .errors import DimensionMismatch
from .linalg import Vec

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Q | None = None
    point: Vec | None = None

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _pivot(t: list[list[Q]], basis: list[int], row: int, col: int) -> None:
    piv = t[row][col]
    t[row] = [x / piv for x in t[row]]
    for i in range(len(t)):
        if i != row and t[i][col] != 0:
            f = t[i][col]
            t[i] = [x - f * y for x, y in zip(t[i], t[row])]
    basis[row] = col


def _optimize(t: list[list[Q]], basis: list[int], obj: list[Q]) -> tuple[str, list[Q]]:
    """Maximize obj over the current feasible tableau.  Bland's rule."""
    # reduced-cost row: z_j - c_j, kept explicitly and updated by pivoting
    ncols = len(t[0])
    zrow = list(obj)
    for r, b in enumerate(basis):
        if zrow[b] != 0:
            f = zrow[b]
            zrow = [x - f * y for x, y in zip(zrow, t[r])]
    while True:
        enter = next((j for j in range(ncols - 1) if zrow[j] > 0), None)
        if enter is None:
            return OPTIMAL, zrow
        leave = None
        best = None
        for i in range(len(t)):
            if t[i][enter] > 0:
                ratio = t[i][-1] / t[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return UNBOUNDED, zrow
        _pivot(t, basis, leave, enter)
        f = zrow[enter]
        zrow = [x - f * y for x, y in zip(zrow, t[leave])]


def solve_lp(
    objective: Sequence[Q],
    le: Sequence[tuple[Sequence[Q], Q]] = (),
    eq: Sequence[tuple[Sequence[Q], Q]] = (),
    *,
    maximize: bool = True,
    nonneg: bool = False,
) -> LPResult:
    """Optimize objective . x subject to row . x <= rhs and row . x == rhs.

    Variables range over all rationals unless nonneg=True.  Returns status
    'optimal' (with value and an optimal point), 'infeasible', or 'unbounded'.
    """
    n = len(objective)
    for row, _ in list(le) + list(eq):
        if len(row) != n:
            raise DimensionMismatch(f"constraint length {len(row)} vs {n} variables")
    # column layout: n (or 2n) structural, one slack per le row, artificials last
    width = n if nonneg else 2 * n

    def structural(row: Sequence[Q]) -> list[Q]:
        if nonneg:
            return [Q(x) for x in row]
        return [Q(x) for x in row] + [-Q(x) for x in row]

    nle = len(le)
    rows: list[list[Q]] = []
    rhs: list[Q] = []
    for i, (row, b) in enumerate(le):
        slacks = [Q(0)] * nle
        slacks[i] = Q(1)
        rows.append(structural(row) + slacks)
        rhs.append(Q(b))
    for row, b in eq:
        rows.append(structural(row) + [Q(0)] * nle)
        rhs.append(Q(b))
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]

    base_width = width + nle
    basis: list[int] = []
    art_cols: list[int] = []
    tableau: list[list[Q]] = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        slack_col = width + i if i < nle else None
        if slack_col is not None and row[slack_col] == 1:
            basis.append(slack_col)
            tableau.append(row + [b])
        else:
            col = base_width + len(art_cols)
            art_cols.append(col)
            basis.append(col)
            tableau.append(row + [b])
    total = base_width + len(art_cols)
    for i in range(len(tableau)):
        body, b = tableau[i][:-1], tableau[i][-1]
        body = body + [Q(0)] * len(art_cols)
        for j, c in enumerate(art_cols):
            if basis[i] == c:
                body[c] = Q(1)
        tableau[i] = body + [b]

    if art_cols:
        phase1 = [Q(0)] * (total + 1)
        for c in art_cols:
            phase1[c] = Q(-1)
        status, _ = _optimize(tableau, basis, phase1)
        assert status == OPTIMAL  # phase 1 is bounded below by 0
        if any(tableau[i][-1] != 0 for i in range(len(tableau)) if basis[i] in set(art_cols)):
            return LPResult(INFEASIBLE)
        # pivot remaining (degenerate) artificials out, dropping redundant rows
        art_set = set(art_cols)
        keep: list[int] = []
        for i in range(len(tableau)):
            if basis[i] not in art_set:
                keep.append(i)
                continue
            piv = next((j for j in range(base_width) if tableau[i][j] != 0), None)
            if piv is not None:
                _pivot(tableau, basis, i, piv)
                keep.append(i)
        tableau = [tableau[i] for i in keep]
        basis = [basis[i] for i in keep]
        # freeze artificials at zero by deleting their columns
        for i in range(len(tableau)):
            tableau[i] = tableau[i][:base_width] + [tableau[i][-1]]

    obj = [Q(c) if maximize else -Q(c) for c in objective]
    if nonneg:
        phase2 = obj + [Q(0)] * (nle + 1)
    else:
        phase2 = obj + [-c for c in obj] + [Q(0)] * (nle + 1)
    status, zrow = _optimize(tableau, basis, phase2)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Q(0)] * width
    for i, b in enumerate(basis):
        if b < width:
            x[b] = tableau[i][-1]
    point = Vec(x[:n]) if nonneg else Vec(x[i] - x[n + i] for i in range(n))
    value = Vec(objective).dot(point)
    return LPResult(OPTIMAL, value, point)


def lp_feasible(
    le: Sequence[tuple[Sequence[Q], Q]] = (),
    eq: Sequence[tuple[Sequence[Q], Q]] = (),
    *,
    dim: int | None = None,
    nonneg: bool = False,
) -> Vec | None:
    """A point satisfying the system, or None if there is none."""
    if dim is None:
        pool = list(le) + list(eq)
        if not pool:
            raise DimensionMismatch("cannot infer dimension from an empty system")
        dim = len(pool[0][0])
    res = solve_lp([Q(0)] * dim, le, eq, nonneg=nonneg)
    return res.point if res.ok else None
