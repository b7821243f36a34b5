import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (SIMPLEX, SIMPLEX_SUPPORT, SLAB, TRIANGLE_PAIR, feasible_lambda,
                     inner_support, random_support)
from viropatch.discriminant import Window
from viropatch.errors import InputError, NormalizationImpossible, SignMismatch
from viropatch.separation import (has_nontrivial_separating_hyperplane, simplex_separation,
                                  strict_enclosing_hyperplanes)
from viropatch.support import SignedSupport, gale_dual_of
from viropatch.zeroset import (EvalContext, hessian_signature_at_constructed_singularity,
                               signature, zero_set_2d)


def _ctx(c, points=TRIANGLE_PAIR):
    return EvalContext.from_coefficients(points, c)


def test_derivatives_match_finite_differences():
    ctx = _ctx([-1, 1, 1, -1, -1])
    h = 1e-5
    for x in ([0.1, 0.2], [-1.0, 0.7], [0.5, -0.5]):
        x = np.array(x)
        f, g, H = ctx.evaluate(x)
        for d in range(2):
            e = np.eye(2)[d] * h
            fp, gp, _ = ctx.evaluate(x + e)
            fm, gm, _ = ctx.evaluate(x - e)
            assert (fp - fm) / (2 * h) == pytest.approx(g[d], rel=1e-6, abs=1e-8)
            assert np.allclose((gp - gm) / (2 * h), H[d], rtol=1e-6, atol=1e-7)


def test_large_arguments_do_not_overflow():
    ctx = _ctx([-1, 1, 1, -1, -1])
    f, g, H = ctx.evaluate([100.0, 100.0])
    assert np.isfinite(f) and f < 0


def test_input_checks():
    with pytest.raises(SignMismatch):
        EvalContext(inner_support(), np.array([1.0, 1, 1, -1, -1]))
    with pytest.raises(InputError):
        EvalContext(inner_support(), np.array([-1.0, 1, 1]))
    with pytest.raises(InputError):
        _ctx([-1, 1, 1, -1, -1]).evaluate([np.nan, 0])


def test_constructed_singular_zero():
    s = inner_support()
    g = gale_dual_of(s)
    rep = hessian_signature_at_constructed_singularity(g, s.signs, [1.0, 1.0], [0.4, -0.3])
    assert rep.residual < 1e-12
    # independent Hessian from the explicit coefficients
    A = np.array(TRIANGLE_PAIR, dtype=float)
    w = np.array(rep.c) * np.exp(A @ np.array(rep.x))
    H = sum(wi * np.outer(a, a) for wi, a in zip(w, A))
    assert np.allclose(rep.hessian, H, atol=1e-12)
    assert rep.signature[2] == 0


def test_signature_threshold():
    assert signature(np.array([1.0, -2.0, 1e-12])) == (1, 1, 1)
    assert signature(np.array([0.0, 0.0])) == (0, 0, 2)


@pytest.mark.parametrize("c,expected", [
    ([-1, 1, 1, -1, -1], (3, 1)),
    ([-1, 6, 3, -1, -1], (2, 0)),
    ([-1, 0.5, 1, -1, -1], (2, 0)),
    ([1, 1, 1, 1, 1], (0, 0)),
])
def test_zero_set_examples(c, expected):
    z = zero_set_2d(_ctx(c))
    assert z.signature == expected
    assert all(closed for closed, b in zip(z.closed, z.bounded) if b)


def test_affine_change_keeps_signature():
    L = np.array([[1, 1], [0, 1]])
    moved = [tuple(int(v) for v in L @ p + np.array([2, -1])) for p in np.array(TRIANGLE_PAIR)]
    z = zero_set_2d(_ctx([-1, 1, 1, -1, -1], moved))
    assert z.signature == (3, 1)


def test_fixed_window_is_respected():
    w = Window(-2.0, 2.0, -2.0, 2.0)
    z = zero_set_2d(_ctx([-1, 1, 1, -1, -1]), window=w, check=False)
    assert z.window == w
    for line in z.polylines:
        assert np.all(np.abs(line) <= 2.0 + 1e-9)


def _random_singular(rng, s):
    try:
        g = gale_dual_of(s)
    except NormalizationImpossible:
        return None
    lam = feasible_lambda(g, s.signs, rng)
    if lam is None:
        return None
    x = [rng.uniform(-1, 1) for _ in range(s.n)]
    return hessian_signature_at_constructed_singularity(g, s.signs, lam, x)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), st.sampled_from([(2, 1), (2, 2), (3, 2), (2, 3)]))
def test_one_negative_gives_positive_definite(seed, nk):
    rng = random.Random(seed)
    signs = [1] * (sum(nk) + 1)
    signs[rng.randrange(len(signs))] = -1
    s, _ = random_support(rng, *nk, span=4, signs=signs)
    rep = _random_singular(rng, s)
    if rep is not None:
        assert rep.residual < 1e-9
        assert rep.signature == (s.n, 0, 0)


def _simplex_support(rng):
    """Positive points in the simplex, negative points in its negative vertex cones."""
    while True:
        pts, signs = [(0, 0), (3, 0), (0, 3)], [1, 1, 1]
        for _ in range(rng.randint(0, 2)):
            a, b = rng.randint(0, 3), rng.randint(0, 3)
            if a + b <= 3:
                pts.append((a, b))
                signs.append(1)
        for _ in range(rng.randint(2, 3)):
            v = rng.randrange(3)
            u, w = rng.randint(1, 4), rng.randint(1, 4)
            base = [(0, 0), (3, 0), (0, 3)][v]
            others = [(0, 0), (3, 0), (0, 3)]
            others.pop(v)
            p = tuple(base[d] - u * (others[0][d] - base[d]) // 3 - w * (others[1][d] - base[d]) // 3
                      for d in range(2))
            pts.append(p)
            signs.append(-1)
        if len(set(pts)) != len(pts):
            continue
        s = SignedSupport.from_lists(pts, signs)
        # a separable support has no singular zeros at all
        if simplex_separation(s, SIMPLEX).verdict \
                and has_nontrivial_separating_hyperplane(s) is None:
            return s


def test_simplex_configuration_is_negative_definite():
    rng = random.Random(1)
    hits = 0
    for _ in range(20):
        rep = _random_singular(rng, SIMPLEX_SUPPORT)
        if rep is not None:
            assert rep.signature == (0, 2, 0)
            hits += 1
    assert hits > 0


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_simplex_separation_gives_negative_definite(seed):
    rng = random.Random(seed)
    s = _simplex_support(rng)
    rep = _random_singular(rng, s)
    if rep is not None:
        assert rep.residual < 1e-9
        assert rep.signature == (0, 2, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_enclosing_hyperplanes_give_saddles(seed):
    rng = random.Random(seed)
    if seed % 5 == 0:
        s = SLAB
    else:
        s, _ = random_support(rng, 2, rng.choice((2, 3)), span=4)
    # both sign classes need a strict enclosing pair
    if strict_enclosing_hyperplanes(s, "positive") is None \
            or strict_enclosing_hyperplanes(s, "negative") is None:
        return
    rep = _random_singular(rng, s)
    if rep is not None:
        assert rep.signature == (1, 1, 0)
