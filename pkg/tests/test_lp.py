from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog as scipy_linprog

from viropatch import lp

coef = st.integers(min_value=-6, max_value=6)


def test_textbook_optimum():
    # max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
    res = lp.linprog([3, 2], [[1, 1], [1, 3], [1, 0]], [4, 6, 3], maximize=True)
    assert res.status == lp.OPTIMAL
    assert res.value == 11
    assert res.x == (Fraction(3), Fraction(1))


def test_infeasible_and_unbounded():
    assert lp.linprog([1], [[1], [-1]], [1, -2]).status == lp.INFEASIBLE
    assert lp.linprog([1], [[-1]], [0], maximize=True).status == lp.UNBOUNDED


def test_free_variables_and_equalities():
    res = lp.linprog([1, 1], A_eq=[[1, -1]], b_eq=[-5], A_ub=[[-1, 0]], b_ub=[10],
                     free=[True, True])
    assert res.status == lp.OPTIMAL
    assert res.x == (Fraction(-10), Fraction(-5))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(coef, min_size=3, max_size=3), min_size=1, max_size=5),
       st.lists(st.integers(min_value=0, max_value=9), min_size=5, max_size=5),
       st.lists(coef, min_size=3, max_size=3))
def test_optimum_matches_scipy(A, b, c):
    """Bounded problems (box 0 <= x <= 10) against an independent floating point solver."""
    A = A + [[int(i == j) for j in range(3)] for i in range(3)]
    b = b[: len(A) - 3] + [10, 10, 10]
    ours = lp.linprog(c, A, b)
    ref = scipy_linprog(c, A_ub=np.array(A, dtype=float), b_ub=np.array(b, dtype=float),
                        bounds=[(0, None)] * 3, method="highs")
    assert (ours.status == lp.OPTIMAL) == (ref.status == 0)
    if ref.status == 0:
        assert abs(float(ours.value) - ref.fun) < 1e-7
        x = ours.x
        assert all(xi >= 0 for xi in x)
        assert all(sum(a * xi for a, xi in zip(row, x)) <= bi for row, bi in zip(A, b))
