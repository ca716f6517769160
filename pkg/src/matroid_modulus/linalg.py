"""Exact rational linear algebra on lists of Fractions."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Row-reduce in place; return (rows, pivot columns)."""
    if not rows:
        return rows, []
    ncol = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def matrix_rank(rows: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in row] for row in rows]
    return len(_rref(rows)[1])


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Unique solution of the square system Ax = b, or None if singular."""
    n = len(A)
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    rows, pivots = _rref(aug)
    if pivots != list(range(n)):
        return None
    return [rows[i][n] for i in range(n)]


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))
