"""Shared fixtures data and random generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from viropatch import lp
from viropatch.errors import NormalizationImpossible
from viropatch.support import SignedSupport, gale_dual_of

TRIANGLE_PAIR = [(0, 0), (1, 0), (0, 1), (4, 1), (1, 4)]
INNER_SIGNS = (-1, 1, 1, -1, -1)     # complement has a bounded chamber
SEPARATED_SIGNS = (1, 1, 1, -1, -1)  # very strict separation, empty curve

SLAB = SignedSupport.from_lists([(0, 0), (3, 0), (0, 3), (-1, 2), (4, -2)], (1, 1, 1, -1, -1))
SIMPLEX_SUPPORT = SignedSupport.from_lists(
    [(0, 0), (0, 3), (1, 1), (-1, 5), (5, -1), (-1, -1), (-2, 0)], (1, 1, 1, -1, -1, -1, -1))
SIMPLEX = [(0, 0), (3, 0), (0, 3)]
FACE_3D = SignedSupport.from_lists(
    [(1, 0, 0), (2, 2, 0), (0, 2, 0), (1, 1, 1), (0, 0, 0), (2, 0, 0), (1, 1, -1)],
    (1, 1, 1, 1, -1, -1, -1))


def inner_support() -> SignedSupport:
    return SignedSupport.from_lists(TRIANGLE_PAIR, INNER_SIGNS)


def separated_support() -> SignedSupport:
    return SignedSupport.from_lists(TRIANGLE_PAIR, SEPARATED_SIGNS)


def random_points(rng: random.Random, count: int, n: int, span: int = 6, den: int = 1):
    pts = set()
    while len(pts) < count:
        pts.add(tuple(Fraction(rng.randint(-span * den, span * den), den) for _ in range(n)))
    return sorted(pts)


def random_support(rng: random.Random, n: int, k: int, span: int = 6, den: int = 1,
                   signs=None) -> tuple[SignedSupport, object]:
    """Full-dimensional support with ``n + k + 1`` points and its Gale dual."""
    while True:
        pts = random_points(rng, n + k + 1, n, span, den)
        rng.shuffle(pts)
        eps = tuple(signs) if signs is not None else tuple(rng.choice((1, -1)) for _ in pts)
        s = SignedSupport(tuple(pts), eps)
        if not s.full_dimensional:
            continue
        try:
            return s, gale_dual_of(s)
        except NormalizationImpossible:
            continue


def feasible_lambda(gale, eps, rng: random.Random) -> np.ndarray | None:
    """A random ``lam`` with ``sign(B lam) = eps``, or ``None`` if none exists."""
    k = gale.k
    A_ub = [[-e * b for b in row] for row, e in zip(gale.B, eps)]
    b_ub = [-1] * len(A_ub)
    # a bounded random objective gives a random vertex of a box-clipped region
    box = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    box += [[-x for x in row] for row in box]
    c = [Fraction(rng.randint(-50, 50), 7) for _ in range(k)]
    res = lp.linprog(c, A_ub + box, b_ub + [50] * (2 * k), free=[True] * k, maximize=True)
    if res.status != lp.OPTIMAL:
        return None
    lam0 = np.array([float(x) for x in res.x])
    B = gale.float_B()
    target = np.array(eps, dtype=float)
    for _ in range(50):
        lam = lam0 + rng.uniform(-0.5, 0.5) * np.array([rng.gauss(0, 1) for _ in range(k)])
        if np.array_equal(np.sign(B @ lam), target):
            return lam
    return lam0


def sturm_verdict(s: SignedSupport) -> str:
    """Critical point count from the Sturm route, or ``empty-discriminant``.

    The count does not depend on the order of the points, so a support whose
    last point cannot carry the normalization is rotated until one can.
    """
    from viropatch.discriminant import critical_points, domain_intervals
    for shift in range(s.count):
        idx = list(range(shift, s.count)) + list(range(shift))
        t = SignedSupport(tuple(s.points[i] for i in idx), tuple(s.signs[i] for i in idx))
        try:
            g = gale_dual_of(t)
        except NormalizationImpossible:
            continue
        if domain_intervals(g, t.signs).empty:
            return "empty-discriminant"
        return str(len(critical_points(g, t.signs)))
    raise AssertionError("no point admits the normalization")
