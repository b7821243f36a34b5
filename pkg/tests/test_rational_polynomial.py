from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from viropatch import polynomial as P
from viropatch.errors import InputError
from viropatch.rational import det, inverse, matmul, nullspace, rank, to_fraction

small = st.fractions(min_value=-20, max_value=20, max_denominator=9)


def test_decimal_strings_parse_exactly():
    assert to_fraction("12.5") == Fraction(25, 2)
    assert to_fraction("-3/7") == Fraction(-3, 7)
    assert to_fraction(0.1) == Fraction(1, 10)


@pytest.mark.parametrize("bad", ["pi", "sqrt(2)", "nan", "inf", "1/0.5", True])
def test_non_rational_input_rejected(bad):
    with pytest.raises(InputError):
        to_fraction(bad)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=2, max_size=4))
def test_nullspace_is_kernel(rows):
    basis = nullspace(rows)
    assert len(basis) == 4 - rank(rows)
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_times_matrix_is_identity(m):
    if det(m) == 0:
        return
    prod = matmul(inverse(m), m)
    assert prod == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]


def test_sturm_counts_simple_roots():
    p = P.mul(P.mul([-1, 1], [-2, 1]), [3, 1])  # (t-1)(t-2)(t+3)
    assert P.roots_in_interval(p, 0, None) == 2
    assert P.roots_in_interval(p, 1, 2) == 0  # open interval
    assert P.roots_in_interval(p, None, None) == 3


def test_irrational_roots_are_isolated():
    roots = P.real_roots([-2, 0, 1])
    assert len(roots) == 2
    assert not roots[0].exact
    assert abs(float(roots[1]) - 2 ** 0.5) < 1e-12
    assert roots[1].lo ** 2 < 2 < roots[1].hi ** 2


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=6),
                min_size=1, max_size=5, unique=True),
       st.integers(min_value=1, max_value=5))
def test_rational_roots_recognised_exactly(roots, lead):
    p = [Fraction(lead)]
    for r in roots:
        p = P.mul(p, [-r, 1])
    found = P.real_roots(p)
    assert all(r.exact for r in found)
    assert [r.value for r in found] == sorted(roots)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(min_value=-30, max_value=30), min_size=2, max_size=7))
def test_real_root_count_matches_numpy(coeffs):
    p = P.trim(coeffs)
    if len(p) < 2:
        return
    sq = P.squarefree(p)
    ours = P.real_roots(p)
    ref = np.roots([float(c) for c in reversed(sq)])
    ref = np.sort(ref[np.abs(ref.imag) < 1e-7].real)
    # numpy's eigenvalue roots are only trusted when well separated from each other
    if len(ref) > 1 and np.min(np.diff(ref)) < 1e-4:
        return
    assert len(ours) == len(ref)
    for r, x in zip(ours, ref):
        assert abs(float(r) - x) < 1e-6 * max(1.0, abs(x))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4),
                min_size=1, max_size=4, unique=True))
def test_cell_samples_separate_roots(roots):
    p = [Fraction(1)]
    for r in roots:
        p = P.mul(p, [-r, 1])
    samples = P.cell_samples(p)
    assert len(samples) == len(roots) + 1
    assert samples == sorted(samples)
    srt = sorted(roots)
    assert samples[0] < srt[0] and samples[-1] > srt[-1]
    for a, r, b in zip(samples, srt, samples[1:]):
        assert a < r < b
