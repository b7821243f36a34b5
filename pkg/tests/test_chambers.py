import pytest

from helpers import inner_support
from viropatch.chambers import chamber_count
from viropatch.discriminant import DiscriminantCurve, Window, critical_points, sample_curve
from viropatch.support import SignedSupport, gale_dual_of


def _curve(s):
    return sample_curve(gale_dual_of(s), s.signs)


@pytest.fixture(scope="module")
def inner_report():
    return chamber_count(_curve(inner_support()))


def test_inner_pair_chambers(inner_report):
    assert (inner_report.total, inner_report.bounded, inner_report.unbounded) == (3, 1, 2)
    assert sum(c.bounded for c in inner_report.chambers) == 1


def test_representatives_lie_inside_window(inner_report):
    w = inner_report.window
    for c in inner_report.chambers:
        assert w.xmin < c.point[0] < w.xmax and w.ymin < c.point[1] < w.ymax
        assert c.clearance > 0


def test_curve_without_cusps():
    s = SignedSupport.from_lists([(0, 0), (3, 0), (0, 3), (1, 1), (2, 0)], (1, 1, 1, -1, 1))
    g = gale_dual_of(s)
    assert critical_points(g, s.signs) == []
    rep = chamber_count(_curve(s))
    assert (rep.total, rep.bounded) == (2, 0)


def test_empty_curve_single_chamber():
    curve = DiscriminantCurve((), (), (), (), Window(-1, 1, -1, 1), None, {})
    rep = chamber_count(curve)
    assert (rep.total, rep.bounded) == (1, 0)
