"""Exact linear algebra over the rationals.

Everything here works on plain nested lists of ``int`` / ``Fraction``.
Rank uses fraction-free (Bareiss) elimination on an integer copy of the
matrix; solving uses Gauss-Jordan over ``Fraction``.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = Sequence[Sequence[int | Fraction]]


def _integer_rows(rows: Matrix) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for v in row:
            den = lcm(den, Fraction(v).denominator)
        out.append([int(Fraction(v) * den) for v in row])
    return out


def rank(rows: Matrix) -> int:
    """Rank of a rational matrix by fraction-free elimination."""
    a = _integer_rows(rows)
    if not a:
        return 0
    m, n = len(a), len(a[0])
    r = 0
    prev = 1
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, m):
            for j in range(col + 1, n):
                # Bareiss step: exact division by the previous pivot
                a[i][j] = (a[r][col] * a[i][j] - a[i][col] * a[r][j]) // prev
            a[i][col] = 0
        prev = a[r][col]
        r += 1
        if r == m:
            break
    return r


def determinant(rows: Matrix) -> Fraction:
    """Determinant of a square rational matrix (Bareiss)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    a = []
    for row in rows:
        den = 1
        for v in row:
            den = lcm(den, Fraction(v).denominator)
        scale /= den
        a.append([int(Fraction(v) * den) for v in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] * scale


def is_negative_definite(gram: Matrix) -> bool:
    """Sylvester's criterion: leading minors alternate in sign, starting negative."""
    n = len(gram)
    for k in range(1, n + 1):
        minor = determinant([list(row[:k]) for row in gram[:k]])
        if minor == 0 or (minor > 0) != (k % 2 == 0):
            return False
    return True


def solve(rows: Matrix, rhs: Sequence[int | Fraction]) -> list[Fraction] | None:
    """One solution of ``A x = b`` (free variables set to zero), or ``None``."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [v / p for v in a[r]]
        for i in range(m):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(a[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = a[i][n]
    return x


def nullspace(rows: Matrix) -> list[list[Fraction]]:
    """Basis of the right kernel of a rational matrix."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [v / p for v in a[r]]
        for i in range(m):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            v[pcol] = -a[i][fcol]
        basis.append(v)
    return basis
