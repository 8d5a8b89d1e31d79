"""Exact rational two-phase simplex.

Solves ``A x = b, x >= lower`` (optionally minimising ``c . x``) over
``Fraction`` with Bland's rule, so every run is deterministic and cannot
cycle.  Infeasibility comes with a Farkas vector ``y`` such that
``y A <= 0`` and ``y (b - A lower) > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Number = int | Fraction


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None
    farkas: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


class _Tableau:
    def __init__(self, rows, rhs, n_struct):
        self.a = rows  # m x (n_struct + m) including artificial block
        self.b = rhs
        self.m = len(rows)
        self.n = n_struct
        self.basis = [n_struct + i for i in range(self.m)]
        self.active = [True] * self.m

    def pivot(self, r, c):
        a, b = self.a, self.b
        p = a[r][c]
        if p != 1:
            a[r] = [v / p for v in a[r]]
            b[r] /= p
        row_r = a[r]
        for i in range(self.m):
            if i == r:
                continue
            f = a[i][c]
            if f != 0:
                a[i] = [x - f * y for x, y in zip(a[i], row_r)]
                b[i] -= f * b[r]
        self.basis[r] = c

    def reduced_costs(self, cost):
        # d_j = c_j - c_B B^-1 A_j, computed directly from the tableau
        width = len(self.a[0])
        d = list(cost) + [Fraction(0)] * (width - len(cost))
        for i in range(self.m):
            if not self.active[i]:
                continue
            cb = cost_of(cost, self.basis[i])
            if cb:
                row = self.a[i]
                for j in range(width):
                    if row[j]:
                        d[j] -= cb * row[j]
        return d

    def run(self, cost, allowed):
        """Minimise ``cost`` with Bland's rule over columns in ``allowed``."""
        while True:
            d = self.reduced_costs(cost)
            enter = next((j for j in allowed if d[j] < 0 and j not in self.basis), None)
            if enter is None:
                return "optimal"
            best = None
            leave = None
            for i in range(self.m):
                if not self.active[i]:
                    continue
                aij = self.a[i][enter]
                if aij > 0:
                    ratio = self.b[i] / aij
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[i] < self.basis[leave])):
                        best = ratio
                        leave = i
            if leave is None:
                return "unbounded"
            self.pivot(leave, enter)


def cost_of(cost, j):
    return cost[j] if j < len(cost) else Fraction(0)


def lp_solve(
    matrix: Sequence[Sequence[Number]],
    rhs: Sequence[Number],
    lower: Sequence[Number] | None = None,
    objective: Sequence[Number] | None = None,
) -> LPResult:
    """Find ``x`` with ``matrix @ x == rhs`` and ``x >= lower``.

    ``lower`` defaults to zero.  With ``objective`` the returned point
    minimises ``objective . x``; otherwise any feasible vertex is returned.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else len(lower or objective or [])
    lo = [Fraction(v) for v in (lower if lower is not None else [0] * n)]
    if len(lo) != n:
        raise ValueError("lower bounds do not match column count")
    if m == 0:
        x = tuple(lo)
        obj = sum((Fraction(c) * v for c, v in zip(objective, x)), Fraction(0)) if objective else None
        return LPResult("optimal", x, obj)

    # shift to y = x - lower >= 0 and make the right-hand side nonnegative
    shifted = []
    signs = []
    for row, b in zip(matrix, rhs):
        bb = Fraction(b) - sum(Fraction(v) * l for v, l in zip(row, lo))
        s = -1 if bb < 0 else 1
        signs.append(s)
        shifted.append(([Fraction(v) * s for v in row], bb * s))
    rows = []
    for i, (row, _) in enumerate(shifted):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows.append(row + art)
    tab = _Tableau(rows, [bb for _, bb in shifted], n)

    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    tab.run(phase1, range(n + m))
    infeas = sum(tab.b[i] for i in range(m) if tab.basis[i] >= n)
    if infeas > 0:
        d = tab.reduced_costs(phase1)
        # artificial column j starts as a unit vector, so y_j = 1 - d_{n+j}
        y = [(1 - d[n + i]) * signs[i] for i in range(m)]
        return LPResult("infeasible", farkas=tuple(y))

    # drive zero-level artificials out of the basis; drop redundant rows
    for i in range(m):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.a[i][j] != 0), None)
            if col is None:
                tab.active[i] = False
            else:
                tab.pivot(i, col)

    status = "optimal"
    if objective is not None:
        cost = [Fraction(v) for v in objective]
        status = tab.run(cost, range(n))
        if status == "unbounded":
            return LPResult("unbounded")

    y = [Fraction(0)] * n
    for i in range(m):
        if tab.active[i] and tab.basis[i] < n:
            y[tab.basis[i]] = tab.b[i]
    x = tuple(v + l for v, l in zip(y, lo))
    obj = None
    if objective is not None:
        obj = sum((Fraction(c) * v for c, v in zip(objective, x)), Fraction(0))
    return LPResult(status, x, obj)
