from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from matroid_modulus.errors import MatroidError
from matroid_modulus.linalg import matrix_rank, solve
from matroid_modulus.lp import maximize


def test_solve_and_rank():
    assert solve([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    assert solve([[1, 2], [2, 4]], [1, 2]) is None
    assert matrix_rank([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) == 2


def test_small_lp():
    # max x + y  s.t.  x + 2y <= 4, 3x + y <= 6
    sol = maximize([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert sol.value == Fraction(14, 5)
    assert sol.x == (Fraction(8, 5), Fraction(6, 5))
    assert sol.y == (Fraction(2, 5), Fraction(1, 5))


def test_unbounded():
    with pytest.raises(MatroidError):
        maximize([1], [[-1]], [1])


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_matches_scipy(m, n, data):
    A = [[data.draw(st.integers(0, 4)) for _ in range(n)] for _ in range(m)]
    b = [data.draw(st.integers(0, 6)) for _ in range(m)]
    c = [data.draw(st.integers(-2, 4)) for _ in range(n)]
    # keep it bounded: each variable with positive cost must appear in some row
    for j in range(n):
        if c[j] > 0 and not any(A[i][j] for i in range(m)):
            A[0][j] = 1
    ref = linprog(-np.array(c, float), A_ub=np.array(A, float), b_ub=np.array(b, float), method="highs")
    sol = maximize(c, A, b)
    assert float(sol.value) == pytest.approx(-ref.fun, abs=1e-9)
