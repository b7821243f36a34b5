import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import inner_support, random_points, separated_support, sturm_verdict
from viropatch.discriminant import critical_points, critical_polynomial
from viropatch.errors import BoundaryCase, InputError, NotClassifiable
from viropatch.pentanomial import (EMPTY, StandardizedPentanomial, chamber_label, classify,
                                   classify_standard, count_roots_in_domain, cusp_family,
                                   feasible_y2, qb_coefficients, region_scan, standardize,
                                   two_point_conditions)
from viropatch.rational import matmul
from viropatch.support import SignedSupport, build_ahat

F = Fraction


_oracle = sturm_verdict


def test_chamber_labels():
    assert chamber_label((F(1, 4), F(1, 4))) == "int"
    assert chamber_label((F(-1, 4), F(1, 2))) == "+1"
    assert chamber_label((F(-1), F(-1))) == "-0"
    assert chamber_label((F(2), F(-1, 2))) == "-1"
    assert chamber_label((F(1, 2), F(-1, 4))) == "+2"
    assert chamber_label((F(0), F(1, 2))) == "boundary"


def test_inner_pair_has_two():
    c = classify(inner_support())
    assert c.verdict == "2" and c.case == "IV" and c.critical_points == 2
    assert c.standardized.flipped
    assert c.certificate["rotation"]["alpha4"] == ["-1/15", "4/15"]
    assert all(q["holds"] for q in c.certificate["inequalities"])


def test_separated_pair_is_empty():
    c = classify(separated_support())
    assert c.verdict == EMPTY and c.case == "separated"


@pytest.mark.parametrize("p1,p2,count,case", [
    ((F(3, 10), F(3, 10)), (F(-1, 2), F(-1, 2)), 1, "III"),
    ((F(1, 4), F(1, 4)), (F(1, 5), F(1, 3)), 0, "interior"),
])
def test_standard_examples(p1, p2, count, case):
    std = StandardizedPentanomial.from_coordinates(*p1, *p2)
    c = classify_standard(std)
    assert (c.critical_points, c.case) == (count, case)
    assert _oracle(std.support) == str(count)


def test_other_sign_patterns():
    pts = [(0, 0), (2, 0), (0, 2), (1, 1), (3, 3)]
    assert classify(SignedSupport.from_lists(pts, (1,) * 5)).case == "one-sign"
    c = classify(SignedSupport.from_lists(pts, (1, 1, 1, 1, -1)))
    assert c.case == "single-point-class" and c.verdict == EMPTY
    c = classify(SignedSupport.from_lists(pts, (1, 1, 1, -1, 1)))
    assert c.case == "single-point-class" and c.verdict == "0"
    c = classify(SignedSupport.from_lists(pts, (1, -1, -1, 1, 1)))
    assert c.case == "segments" and c.verdict == _oracle(SignedSupport.from_lists(pts, (1, -1, -1, 1, 1)))
    with pytest.raises(NotClassifiable):
        standardize(SignedSupport.from_lists(pts, (1, -1, -1, 1, 1)))
    with pytest.raises(InputError):
        classify(SignedSupport.from_lists([(0, 0), (1, 0), (0, 1), (1, 1)], (1, 1, -1, -1)))


def test_wall_is_flagged_and_strict_raises():
    std = StandardizedPentanomial.from_coordinates(F(-1, 10), 1, 1, F(-1, 10))
    assert std.labels == ("+1", "+2")
    c = classify_standard(std)
    assert c.boundary and c.case == "IV"
    assert c.verdict == _oracle(std.support)
    with pytest.raises(BoundaryCase):
        classify_standard(std, strict=True)


def test_qb_matches_general_critical_polynomial():
    rng = random.Random(5)
    for _ in range(100):
        x1, y1, x2, y2 = (F(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(4))
        try:
            std = StandardizedPentanomial.from_coordinates(x1, y1, x2, y2)
        except InputError:
            continue
        if not std.support.full_dimensional:
            continue
        q = critical_polynomial(std.gale).q
        mine = qb_coefficients(std).poly
        # equal up to a nonzero constant
        assert len(q) == len(mine)
        if q:
            ratio = q[-1] / mine[-1]
            assert ratio != 0 and all(u == ratio * v for u, v in zip(q, mine))


def _random_pentanomial(rng):
    while True:
        pts = random_points(rng, 5, 2, span=6, den=rng.choice((1, 2, 3)))
        signs = [1, 1, 1, -1, -1]
        rng.shuffle(signs)
        if rng.random() < 0.5:
            signs = [-e for e in signs]
        s = SignedSupport(tuple(pts), tuple(signs))
        if s.full_dimensional:
            return s


def _transform(s, rng):
    while True:
        M = [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)]
        if M[0][0] * M[1][1] - M[0][1] * M[1][0] != 0:
            break
    v = [F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(2)]
    order = list(range(5))
    rng.shuffle(order)
    flip = rng.choice((1, -1))
    pts = [tuple(r[0] + t for r, t in zip(matmul(M, [[x], [y]]), v)) for x, y in s.points]
    return SignedSupport(tuple(pts[i] for i in order), tuple(flip * s.signs[i] for i in order))


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_classifier_matches_sturm_and_is_invariant(seed):
    rng = random.Random(seed)
    s = _random_pentanomial(rng)
    c = classify(s)
    assert c.verdict == _oracle(s)
    t = _transform(s, rng)
    assert classify(t).verdict == c.verdict


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_two_point_system_implies_two(seed):
    rng = random.Random(seed)
    x1 = F(-rng.randint(1, 400), 1000)
    y1 = F(rng.randint(1, 999), 1000)
    x2 = F(rng.randint(1, 999), 1000)
    y2 = F(-rng.randint(1, 400), 1000)
    std = StandardizedPentanomial.from_coordinates(x1, y1, x2, y2)
    c = classify_standard(std)
    if two_point_conditions(x1, y1, x2, y2):
        assert c.critical_points == 2 and c.case == "IV"
    else:
        assert c.critical_points <= 1 or c.verdict == EMPTY
    assert count_roots_in_domain(std) == (0 if c.verdict == EMPTY else c.critical_points)


def test_region_scan_below_axis_only():
    x1, y1 = F(-1, 10), F(3, 10)
    above = region_scan(x1, y1, grid=60, y_range=(0, F(1, 2)))
    assert above.feasible == 0
    below = region_scan(x1, y1, grid=80)
    assert below.feasible > 0
    assert below.columns_with_feasible().all()
    rng = random.Random(0)
    hits = list(zip(*np.nonzero(below.mask)))
    for j, i in rng.sample(hits, 10):
        i, j = int(i), int(j)
        x2 = F(2 * i + 1, 160)
        y2 = F(-1, 4) + F(1, 4) * F(2 * j + 1, 160)
        c = classify_standard(StandardizedPentanomial.from_coordinates(x1, y1, x2, y2))
        assert c.critical_points == 2
    with pytest.raises(InputError):
        region_scan(F(1, 10), y1)


def test_feasible_y2_exact():
    x1, y1 = F(-1, 10), F(3, 10)
    for x2 in (F(1, 20), F(1, 2), F(19, 20)):
        y2 = feasible_y2(x1, y1, x2)
        assert y2 is not None and y2 < 0
        assert two_point_conditions(x1, y1, x2, y2)
    assert feasible_y2(x1, y1, F(3, 2)) is None


def test_cusp_family_example():
    fam = cusp_family([5, 6, 7, 8])
    assert fam.residues == (F(-715), F(12012, 5), F(-2730), F(1040), F(18, 5))
    assert fam.eps == (-1, 1, -1, 1, 1, -1, -1)
    assert [p.mu for p in critical_points(fam.gale, fam.eps)] == [5, 6, 7, 8]
    assert all(p.exact for p in critical_points(fam.gale, fam.eps))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(min_value=F(1, 10), max_value=20, max_denominator=12),
                min_size=1, max_size=4, unique=True))
def test_cusp_family_properties(mus):
    if F(1) in mus:
        with pytest.raises(InputError):
            cusp_family(mus)
        return
    fam = cusp_family(mus)
    B = fam.gale.B
    n = len(mus)
    assert len(B) == n + 3
    assert all(sum(r[j] for r in B) == 0 for j in range(2))
    A = build_ahat(fam.gale.support).entries
    assert all(sum(a * r[j] for a, r in zip(row, B)) == 0 for row in A for j in range(2))
    pts = critical_points(fam.gale, fam.eps)
    assert sorted(p.mu for p in pts) == sorted(mus)


@pytest.mark.parametrize("bad", [[], [2, 2], [-1], [0], [1]])
def test_cusp_family_rejects(bad):
    with pytest.raises(InputError):
        cusp_family(bad)
