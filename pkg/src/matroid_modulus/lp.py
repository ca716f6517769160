"""Exact-rational primal simplex (Bland's rule) with dual certificates.

Only the form every LP in this package reduces to is supported::

    maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0

so the slack basis is feasible from the start and no phase one is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ConsistencyError, MatroidError


@dataclass(frozen=True)
class LpSolution:
    value: Fraction
    x: tuple[Fraction, ...]   # primal optimum
    y: tuple[Fraction, ...]   # dual optimum: min b.y, A^T y >= c, y >= 0


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence, max_pivots: int = 100_000) -> LpSolution:
    m, n = len(A), len(c)
    c = [Fraction(v) for v in c]
    b = [Fraction(v) for v in b]
    if any(v < 0 for v in b):
        raise MatroidError("right-hand side must be nonnegative")
    # tableau rows: [A | I | b]; variables 0..n-1 original, n..n+m-1 slack
    T = [[Fraction(v) for v in A[i]] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    # reduced costs z_j - c_j stored as obj row; we maximize so entering needs obj < 0
    obj = [-v for v in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = list(range(n, n + m))

    for _ in range(max_pivots):
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise MatroidError("LP is unbounded")
        r = best[1]
        piv = T[r][enter]
        T[r] = [v / piv for v in T[r]]
        for i in range(m):
            if i != r and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * bb for a, bb in zip(T[i], T[r])]
        f = obj[enter]
        obj = [a - f * bb for a, bb in zip(obj, T[r])]
        basis[r] = enter
    else:
        raise ConsistencyError("simplex pivot limit reached")

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = T[i][-1]
    y = tuple(obj[n + i] for i in range(m))
    sol = LpSolution(value=obj[-1], x=tuple(x), y=y)
    _check_certificate(c, A, b, sol)
    return sol


def _check_certificate(c, A, b, sol: LpSolution) -> None:
    m, n = len(A), len(c)
    for i in range(m):
        if sum(Fraction(A[i][j]) * sol.x[j] for j in range(n)) > b[i]:
            raise ConsistencyError("primal certificate infeasible")
    for j in range(n):
        if sum(Fraction(A[i][j]) * sol.y[i] for i in range(m)) < c[j]:
            raise ConsistencyError("dual certificate infeasible")
    if any(v < 0 for v in sol.x) or any(v < 0 for v in sol.y):
        raise ConsistencyError("negative certificate entry")
    primal = sum(cj * xj for cj, xj in zip(c, sol.x))
    dual = sum(bi * yi for bi, yi in zip(b, sol.y))
    if not primal == dual == sol.value:
        raise ConsistencyError("strong duality gap in LP certificate")
