import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import feasible_lambda, inner_support, random_support, separated_support
from viropatch.discriminant import (Quality, critical_points, critical_polynomial,
                                    domain_intervals, horn_kapranov, jacobian, sample_curve,
                                    xi, xi_bar)
from viropatch.errors import EmptyDomain, OutOfDomain, SignMismatch, WrongCodimension
from viropatch.pentanomial import cusp_family
from viropatch.polynomial import real_roots
from viropatch.support import gale_dual_of
from viropatch.zeroset import degeneracy, hessian_signature_at_constructed_singularity

F = Fraction


@pytest.fixture(scope="module")
def inner():
    s = inner_support()
    return s, gale_dual_of(s)


def test_domain_is_positive_half_line(inner):
    s, g = inner
    d = domain_intervals(g, s.signs)
    assert len(d.intervals) == 1
    assert d.intervals[0].lo == 0 and d.intervals[0].hi is None and not d.flipped
    # the negated sign vector describes the same domain after reorientation
    d2 = domain_intervals(g, tuple(-e for e in s.signs))
    assert d2.flipped and d2.intervals == d.intervals


def test_critical_polynomial_and_points(inner):
    s, g = inner
    cp = critical_polynomial(g)
    assert cp.q == (16, -112, 16)
    pts = critical_points(g, s.signs)
    assert len(pts) == 2
    # roots of mu^2 - 7 mu + 1
    assert float(pts[0]) == pytest.approx((7 - 45 ** 0.5) / 2, abs=1e-10)
    assert float(pts[1]) == pytest.approx((7 + 45 ** 0.5) / 2, abs=1e-10)
    assert not pts[0].exact


def test_separated_pair_has_no_curve():
    s = separated_support()
    g = gale_dual_of(s)
    assert domain_intervals(g, s.signs).empty
    assert critical_points(g, s.signs) == []
    with pytest.raises(EmptyDomain):
        sample_curve(g, s.signs)


def test_q_tilde_has_root_zero_and_cusp_roots():
    fam = cusp_family([5, 6, 7, 8])
    cp = critical_polynomial(fam.gale)
    assert cp.q_tilde[0] == 0
    roots = [r.value for r in real_roots(cp.q_tilde) if r.value != 0]
    assert sorted(roots) == [5, 6, 7, 8]
    assert sorted(p.mu for p in critical_points(fam.gale, fam.eps)) == [5, 6, 7, 8]


def test_out_of_domain_and_mismatch(inner):
    s, g = inner
    with pytest.raises(OutOfDomain):
        xi_bar(g, s.signs, -1)
    with pytest.raises(SignMismatch):
        xi(g, s.signs, [-1.0, 1.0])
    k1 = gale_dual_of(s.__class__.from_lists([(0, 0), (1, 0), (0, 1), (1, 1)], (1, -1, -1, 1)))
    with pytest.raises(WrongCodimension):
        critical_polynomial(k1)


def _xi_bar_complex_step(g, eps, mu, h=1e-30):
    B = g.float_B()
    vals = B[:, 0] * (mu + 1j * h) + B[:, 1]
    return (B.T @ np.log(np.asarray(eps) * vals)).imag / h


def test_normal_identity_complex_step(inner):
    s, g = inner
    for mu in (0.01, 0.1459, 0.5, 1.0, 3.0, 6.854, 40.0):
        tangent = _xi_bar_complex_step(g, s.signs, mu)
        normal = np.array([mu, 1.0])
        assert abs(normal @ tangent) < 1e-9 * max(1.0, np.linalg.norm(tangent))
        assert np.allclose(jacobian(g, [mu])[:, 0], tangent, rtol=1e-10, atol=1e-12)


def test_jacobian_finite_difference(inner):
    s, g = inner
    h = 1e-6
    for mu in (0.2, 1.7, 9.0):
        fd = (xi_bar(g, s.signs, mu + h) - xi_bar(g, s.signs, mu - h)) / (2 * h)
        assert np.allclose(jacobian(g, [mu])[:, 0], fd, rtol=1e-6, atol=1e-8)
    # the tangent vanishes exactly at the critical points
    for p in critical_points(g, s.signs):
        assert np.linalg.norm(jacobian(g, [float(p)])) < 1e-9


def test_diagram_commutes(inner):
    s, g = inner
    c = horn_kapranov(g, s.signs, [1.0, 1.0], [0.0, 0.0])
    assert np.allclose(c, [-8, 5, 5, -1, -1])
    B = g.float_B()
    for x in ([0.3, -1.2], [2.0, 0.5]):
        c = horn_kapranov(g, s.signs, [1.0, 1.0], x)
        assert np.array_equal(np.sign(c), np.asarray(s.signs))
        assert np.allclose(B.T @ np.log(np.abs(c)), xi(g, s.signs, [1.0, 1.0]), atol=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), st.sampled_from([(2, 2), (3, 2), (2, 3), (3, 3)]),
       st.floats(min_value=0.1, max_value=50))
def test_homogeneity_and_commutation(seed, nk, t):
    rng = random.Random(seed)
    s, g = random_support(rng, *nk, span=4)
    lam = feasible_lambda(g, s.signs, rng)
    if lam is None:
        return
    assert np.allclose(xi(g, s.signs, t * lam), xi(g, s.signs, lam), atol=1e-9)
    x = np.array([rng.uniform(-1, 1) for _ in range(s.n)])
    c = horn_kapranov(g, s.signs, lam, x)
    assert np.allclose(g.float_B().T @ np.log(np.abs(c)), xi(g, s.signs, lam), atol=1e-8)


def _float_count(g, eps, q):
    """Float oracle: numpy roots of q inside the domain, or None when ambiguous."""
    d = domain_intervals(g, eps)
    roots = np.roots([float(c) for c in reversed(q)]) if len(q) > 1 else []
    count = 0
    for r in roots:
        if abs(r.imag) > 1e-6:
            if abs(r.imag) < 1e-3:
                return None
            continue
        x = r.real
        if any(abs(x - float(b)) < 1e-6 for b in d.breakpoints):
            return None
        count += any((iv.lo is None or x > iv.lo) and (iv.hi is None or x < iv.hi)
                     for iv in d.intervals)
    return count


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), st.sampled_from([2, 3, 4]))
def test_critical_count_at_most_n(seed, n):
    s, g = random_support(random.Random(seed), n, 2, span=5)
    pts = critical_points(g, s.signs)
    assert len(pts) <= n
    cp = critical_polynomial(g)
    if cp.zero or domain_intervals(g, s.signs).empty:
        assert pts == []
        return
    # distinct roots only: repeated roots would confuse the float oracle
    if len(set(round(float(p), 6) for p in pts)) != len(pts):
        return
    oracle = _float_count(g, s.signs, cp.q)
    if oracle is not None and len({round(r, 5) for r in np.roots([float(c) for c in reversed(cp.q)]).real}) == cp.degree:
        assert len(pts) == oracle


def test_degenerate_hessian_at_cusps(inner):
    s, g = inner
    for p in critical_points(g, s.signs):
        rep = hessian_signature_at_constructed_singularity(g, s.signs, [float(p), 1.0], [0.1, -0.2])
        assert abs(rep.value) < 1e-12 and rep.gradient_norm < 1e-12
        assert degeneracy(rep.hessian) < 1e-8
    rep = hessian_signature_at_constructed_singularity(g, s.signs, [1.0, 1.0], [0.0, 0.0])
    assert degeneracy(rep.hessian) > 1e-3


def test_sample_curve_is_deterministic(inner):
    s, g = inner
    a = sample_curve(g, s.signs, Quality())
    b = sample_curve(g, s.signs, Quality())
    assert len(a.polylines) == len(b.polylines)
    assert all(np.array_equal(p, q) for p, q in zip(a.polylines, b.polylines))
    assert len(a.critical_images) == 2
