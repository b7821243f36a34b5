"""Bivariate signed supports with five points.

A support with three positive points spanning a triangle and two negative
points is moved by an orientation preserving affine map so that the positive
points become ``0, e1, e2``. The negative points then carry coordinates
``(x1, y1)`` and ``(x2, y2)`` and the critical polynomial of the reduced
discriminant parametrization is the quadratic ``a t^2 + b t + c``. Chambers
of the plane are described through barycentric coordinates
``lam = (1 - x - y, x, y)`` with respect to the standard triangle:

* ``int``: every ``lam_i > 0``;
* ``+i``: ``lam_i < 0`` and the other two positive;
* ``-i``: the two coordinates other than ``lam_i`` negative;
* ``boundary``: some ``lam_i = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import polynomial as P
from .errors import BoundaryCase, InputError, NotClassifiable
from .rational import affine_rank, det, fmt, inverse, matmul, sign, to_fraction
from .separation import has_nontrivial_separating_hyperplane
from .support import GaleDual, SignedSupport, build_ahat, support_from_gale

EMPTY = "empty-discriminant"

# cyclic rotations of the triangle's vertex roles: (origin, e1, e2)
_CYCLIC = {(0, 1, 2), (1, 2, 0), (2, 0, 1)}


def barycentric(p: Sequence[Fraction]) -> tuple[Fraction, Fraction, Fraction]:
    x, y = p
    return (1 - x - y, x, y)


def chamber_label(p: Sequence[Fraction]) -> str:
    lam = barycentric(p)
    if any(v == 0 for v in lam):
        return "boundary"
    neg = [i for i, v in enumerate(lam) if v < 0]
    if not neg:
        return "int"
    if len(neg) == 1:
        return f"+{neg[0]}"
    (free,) = [i for i in range(3) if i not in neg]
    return f"-{free}"


@dataclass(frozen=True)
class StandardizedPentanomial:
    """Negative points after mapping the positive triangle onto ``0, e1, e2``."""

    p1: tuple[Fraction, Fraction]
    p2: tuple[Fraction, Fraction]
    M: tuple[tuple[Fraction, ...], ...]
    v: tuple[Fraction, Fraction]
    order: tuple[int, ...]
    flipped: bool
    labels: tuple[str, str] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", (chamber_label(self.p1), chamber_label(self.p2)))

    @classmethod
    def from_coordinates(cls, x1, y1, x2, y2) -> "StandardizedPentanomial":
        one, zero = Fraction(1), Fraction(0)
        p1 = (to_fraction(x1), to_fraction(y1))
        p2 = (to_fraction(x2), to_fraction(y2))
        if len({(zero, zero), (one, zero), (zero, one), p1, p2}) != 5:
            raise InputError("points must be pairwise distinct")
        return cls(p1, p2, ((one, zero), (zero, one)), (zero, zero), (0, 1, 2, 3, 4), False)

    @property
    def support(self) -> SignedSupport:
        pts = ((0, 0), (1, 0), (0, 1), self.p1, self.p2)
        return SignedSupport(pts, (1, 1, 1, -1, -1))

    @property
    def gale(self) -> GaleDual:
        """The Gale dual whose forms are ``lam(p1) t + lam(p2)``, ``-t`` and ``-1``."""
        (x1, y1), (x2, y2) = self.p1, self.p2
        B = ((1 - x1 - y1, 1 - x2 - y2), (x1, x2), (y1, y2),
             (Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1)))
        return GaleDual(B, build_ahat(self.support))

    def to_json(self) -> dict:
        return {
            "alpha4": [fmt(x) for x in self.p1],
            "alpha5": [fmt(x) for x in self.p2],
            "M": [[fmt(x) for x in row] for row in self.M],
            "v": [fmt(x) for x in self.v],
            "order": list(self.order),
            "flipped": self.flipped,
            "labels": list(self.labels),
        }


def _sign_classes(support: SignedSupport) -> tuple[list[int], list[int], bool] | None:
    """Indices of the triangle class and the pair class, or ``None``."""
    pos, neg = support.positive, support.negative
    if len(pos) == 3 and len(neg) == 2:
        return pos, neg, False
    if len(pos) == 2 and len(neg) == 3:
        return neg, pos, True
    return None


def standardize(support: SignedSupport) -> StandardizedPentanomial:
    if support.n != 2 or support.count != 5:
        raise InputError("expected five points in the plane")
    if not support.full_dimensional:
        raise InputError("support is not full-dimensional")
    classes = _sign_classes(support)
    if classes is None:
        raise NotClassifiable(f"sign classes of sizes {len(support.positive)} and {len(support.negative)}")
    tri, pair, flipped = classes
    pts = support.points
    if affine_rank([pts[i] for i in tri]) < 2:
        raise NotClassifiable("the three points of one sign are collinear")
    a1, a2, a3 = (pts[i] for i in tri)
    orient = det([[1, 1, 1], [a1[0], a2[0], a3[0]], [a1[1], a2[1], a3[1]]])
    if orient < 0:
        tri = [tri[0], tri[2], tri[1]]
        a2, a3 = a3, a2
    cols = [[a2[0] - a1[0], a3[0] - a1[0]], [a2[1] - a1[1], a3[1] - a1[1]]]
    M = inverse(cols)
    v = [-x for x in (row[0] for row in matmul(M, [[a1[0]], [a1[1]]]))]

    def apply(p):
        q = matmul(M, [[p[0]], [p[1]]])
        return (q[0][0] + v[0], q[1][0] + v[1])

    return StandardizedPentanomial(apply(pts[pair[0]]), apply(pts[pair[1]]),
                                   tuple(tuple(r) for r in M), tuple(v),
                                   tuple(tri + pair), flipped)


@dataclass(frozen=True)
class QbCoefficients:
    a: Fraction
    b: Fraction
    c: Fraction

    @property
    def poly(self) -> P.Poly:
        return P.trim([self.c, self.b, self.a])

    @property
    def discriminant(self) -> Fraction:
        return self.b * self.b - 4 * self.a * self.c

    def to_json(self) -> dict:
        return {"a": fmt(self.a), "b": fmt(self.b), "c": fmt(self.c)}


def _abc(x1, y1, x2, y2):
    a = -x1 * y1 * (1 - x1 - y1)
    b = (-x1 * x1 * y2 * y2 + 2 * x1 * x2 * y1 * y2 - x2 * x2 * y1 * y1
         + x1 * x1 * y2 + y2 * y2 * x1 + x2 * x2 * y1 + y1 * y1 * x2
         - x1 * y2 - x2 * y1)
    c = -x2 * y2 * (1 - x2 - y2)
    return a, b, c


def qb_coefficients(std: StandardizedPentanomial) -> QbCoefficients:
    (x1, y1), (x2, y2) = std.p1, std.p2
    return QbCoefficients(*_abc(x1, y1, x2, y2))


# ---------------------------------------------------------------- exact root location


def domain_interval(std: StandardizedPentanomial) -> tuple[Fraction | None, Fraction | None] | None:
    """Open interval of ``t`` where ``lam(p1) t + lam(p2) > 0`` coordinatewise and ``t > 0``.

    ``None`` ends are infinite; ``None`` as a whole means the set is empty.
    """
    lo, hi = Fraction(0), None
    for p, r in zip(barycentric(std.p1), barycentric(std.p2)):
        if p == 0:
            if r <= 0:
                return None
            continue
        bound = -r / p
        if p > 0:
            lo = max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if hi is not None and hi <= lo:
        return None
    return lo, hi


def _roots_below(qb: QbCoefficients, e: Fraction, strict: bool) -> int:
    """Number of distinct real roots ``< e`` (or ``<= e``) without square roots."""
    a, b, c = qb.a, qb.b, qb.c
    val = (a * e + b) * e + c
    if a == 0:
        if b == 0:
            return 0
        r = -c / b
        return int(r < e or (not strict and r == e))
    disc = qb.discriminant
    vertex = -b / (2 * a)
    if disc < 0:
        return 0
    if disc == 0:
        return int(vertex < e or (not strict and vertex == e))
    s = sign(a) * sign(val)
    if s < 0:
        n = 1
    elif s > 0:
        n = 0 if e < vertex else 2
    else:
        n = 0 if e < vertex else 1
    if val == 0 and not strict:
        n += 1
    return n


def _distinct_real_roots(qb: QbCoefficients) -> int:
    if qb.a == 0:
        return int(qb.b != 0)
    d = qb.discriminant
    return 0 if d < 0 else (1 if d == 0 else 2)


def count_roots_in_domain(std: StandardizedPentanomial, qb: QbCoefficients | None = None) -> int:
    """Distinct roots of ``a t^2 + b t + c`` inside the parameter interval."""
    qb = qb or qb_coefficients(std)
    iv = domain_interval(std)
    if iv is None:
        return 0
    if qb.a == qb.b == qb.c == 0:
        raise AssertionError("critical polynomial vanishes on a nonempty domain")
    lo, hi = iv
    below_hi = _distinct_real_roots(qb) if hi is None else _roots_below(qb, hi, True)
    return below_hi - _roots_below(qb, lo, False)


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class Inequality:
    name: str
    value: Fraction
    holds: bool

    def to_json(self) -> dict:
        return {"name": self.name, "value": fmt(self.value), "holds": self.holds}


def _two_point_system(x1, y1, x2, y2) -> list[Inequality]:
    """Chamber conditions and the square root free inequalities for two critical points."""
    a, b, c = _abc(x1, y1, x2, y2)
    w = 1 - x1 - y1
    disc = b * b - 4 * a * c
    e1 = 2 * x2 * y1 * w + b
    e2 = 2 * x1 * y2 * w + b
    rows = [
        ("x1 < 0", -x1), ("y1 > 0", y1), ("y1 < 1", 1 - y1), ("1 - x1 - y1 > 0", w),
        ("x2 > 0", x2), ("x2 < 1", 1 - x2), ("y2 < 0", -y2), ("1 - x2 - y2 > 0", 1 - x2 - y2),
        ("b^2 - 4ac > 0", disc),
        ("E1 > 0", e1), ("E1^2 - (b^2 - 4ac) > 0", e1 * e1 - disc),
        ("E2 < 0", -e2), ("E2^2 - (b^2 - 4ac) > 0", e2 * e2 - disc),
    ]
    return [Inequality(name, value, value > 0) for name, value in rows]


def two_point_conditions(x1, y1, x2, y2) -> bool:
    """Whether the rotated configuration satisfies every condition for two critical points."""
    return all(q.holds for q in _two_point_system(*map(to_fraction, (x1, y1, x2, y2))))


@dataclass(frozen=True)
class Classification:
    verdict: str
    critical_points: int
    case: str
    standardized: StandardizedPentanomial | None
    certificate: dict
    boundary: bool = False

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "critical_points": self.critical_points,
            "case": self.case,
            "boundary_case": self.boundary,
            "standardized": self.standardized.to_json() if self.standardized else None,
            "certificate": self.certificate,
        }


def _result(count: int | None, case: str, std, cert: dict, boundary: bool = False) -> Classification:
    verdict = EMPTY if count is None else str(count)
    return Classification(verdict, count or 0, case, std, cert, boundary)


def _rotate(std: StandardizedPentanomial, i: int, j: int) -> tuple[StandardizedPentanomial, bool]:
    """Relabel so the first negative point sits in ``+1`` and the second in ``+2``.

    The new coordinates of a point are ``(lam_i, lam_j)``. When the induced
    vertex permutation is odd the two negative points swap names instead,
    so the map stays orientation preserving.
    """
    swapped = False
    k = 3 - i - j
    if (k, i, j) not in _CYCLIC:
        i, j, swapped = j, i, True
    first, second = (std.p2, std.p1) if swapped else (std.p1, std.p2)
    lam1, lam2 = barycentric(first), barycentric(second)
    rot = StandardizedPentanomial((lam1[i], lam1[j]), (lam2[i], lam2[j]), std.M, std.v,
                                  std.order, std.flipped)
    return rot, swapped


def classify_standard(std: StandardizedPentanomial, strict: bool = False) -> Classification:
    qb = qb_coefficients(std)
    cert = {"qb": qb.to_json(), "labels": list(std.labels)}
    if has_nontrivial_separating_hyperplane(std.support) is not None:
        return _result(None, "separated", std, cert)
    exact = count_roots_in_domain(std, qb)
    cert["roots_in_domain"] = exact

    def resolved(case: str, limit: int, boundary: bool = False) -> Classification:
        if exact > limit:
            raise AssertionError(f"case {case} allows at most {limit} critical points, found {exact}")
        return _result(exact, case, std, cert, boundary)

    labels = sorted(std.labels)
    if "boundary" in labels:
        cert["note"] = "a negative point lies on a facet line, so a = 0 or c = 0"
        return resolved("facet-line", 1)
    if labels == ["int", "int"]:
        return resolved("interior", 0)
    kinds = sorted(lab[0] for lab in labels)
    idx = {lab[0]: int(lab[1]) for lab in labels if lab != "int"}
    if kinds == ["+", "i"]:
        return resolved("I", 1)
    if kinds == ["+", "-"] and idx["+"] == idx["-"]:
        return resolved("II", 1)
    if kinds == ["-", "i"]:
        if exact != 1:
            raise AssertionError(f"case III requires exactly one critical point, found {exact}")
        return _result(1, "III", std, cert)
    if kinds == ["+", "+"] and std.labels[0] != std.labels[1]:
        i, j = int(std.labels[0][1]), int(std.labels[1][1])
        rot, swapped = _rotate(std, i, j)
        (x1, y1), (x2, y2) = rot.p1, rot.p2
        system = _two_point_system(x1, y1, x2, y2)
        cert["rotation"] = {"alpha4": [fmt(x) for x in rot.p1], "alpha5": [fmt(x) for x in rot.p2],
                            "roles": [3 - i - j, i, j], "swapped": swapped}
        cert["inequalities"] = [q.to_json() for q in system]
        # the walls y1 = 1 and x2 = 1 bound the sub-chambers; the statement is for open regions
        walls = [q for q in system[:8] if q.value == 0]
        boundary = bool(walls)
        if boundary:
            cert["boundary"] = [q.name for q in walls]
            if strict:
                raise BoundaryCase(f"point on the wall {walls[0].name}")
        if all(q.holds for q in system):
            if exact != 2:
                raise AssertionError(f"case IV inequalities hold but {exact} roots found")
            return _result(2, "IV", std, cert)
        return resolved("IV", 1, boundary)
    raise AssertionError(f"unexpected non-separated chamber labels {std.labels}")


def classify(support: SignedSupport, strict: bool = False) -> Classification:
    """Number of critical points of the reduced parametrization, or an empty discriminant.

    ``strict`` raises :class:`BoundaryCase` for points on a sub-chamber wall
    instead of resolving the count by exact root location.
    """
    if support.n != 2 or support.count != 5:
        raise InputError("expected five points in the plane")
    if not support.full_dimensional:
        raise InputError("support is not full-dimensional")
    pos, neg = support.positive, support.negative
    cert = {"positive": len(pos), "negative": len(neg)}
    separated = has_nontrivial_separating_hyperplane(support) is not None
    if not pos or not neg:
        return _result(None, "one-sign", None, cert)
    if min(len(pos), len(neg)) == 1:
        return _result(None if separated else 0, "single-point-class", None, cert)
    classes = _sign_classes(support)
    tri = classes[0]
    if affine_rank([support.points[i] for i in tri]) < 2:
        return _result(None if separated else 0, "segments", None, cert)
    return classify_standard(standardize(support), strict)


# ---------------------------------------------------------------- region scan


@dataclass(frozen=True)
class RegionScan:
    x1: Fraction
    y1: Fraction
    x2: np.ndarray
    y2: np.ndarray
    mask: np.ndarray
    exact_checks: int

    @property
    def feasible(self) -> int:
        return int(self.mask.sum())

    def columns_with_feasible(self) -> np.ndarray:
        return self.mask.any(axis=0)


def _float_system(x1, y1, x2, y2):
    a = -x1 * y1 * (1 - x1 - y1)
    b = (-x1 * x1 * y2 * y2 + 2 * x1 * x2 * y1 * y2 - x2 * x2 * y1 * y1
         + x1 * x1 * y2 + y2 * y2 * x1 + x2 * x2 * y1 + y1 * y1 * x2
         - x1 * y2 - x2 * y1)
    c = -x2 * y2 * (1 - x2 - y2)
    w = 1 - x1 - y1
    disc = b * b - 4 * a * c
    e1 = 2 * x2 * y1 * w + b
    e2 = 2 * x1 * y2 * w + b
    return [x2, 1 - x2, -y2, 1 - x2 - y2, disc, e1, e1 * e1 - disc, -e2, e2 * e2 - disc]


def region_scan(x1, y1, grid: int = 400, y_range: tuple = (Fraction(-1, 4), 0)) -> RegionScan:
    """Cells ``(x2, y2)`` of a rational grid satisfying the two critical point system.

    Cell centres are ``x2 = (i + 1/2) / grid`` over ``(0, 1)`` and likewise
    over ``y_range``. Signs are computed in floating point over the whole grid
    at once; any value too close to zero to trust is recomputed exactly.
    ``mask[j, i]`` refers to ``y2[j]`` and ``x2[i]``.
    """
    x1, y1 = to_fraction(x1), to_fraction(y1)
    first = _two_point_system(x1, y1, Fraction(1, 2), Fraction(-1, 2))[:4]
    if not all(q.holds for q in first):
        raise InputError("(x1, y1) must lie in the open chamber x < 0, 0 < y < 1, x + y < 1")
    ylo, yhi = (to_fraction(v) for v in y_range)
    xs = [(Fraction(2 * i + 1, 2 * grid)) for i in range(grid)]
    ys = [ylo + (yhi - ylo) * Fraction(2 * j + 1, 2 * grid) for j in range(grid)]
    X, Y = np.meshgrid(np.array([float(v) for v in xs]), np.array([float(v) for v in ys]))
    vals = _float_system(float(x1), float(y1), X, Y)
    mask = np.ones(X.shape, dtype=bool)
    unsure = np.zeros(X.shape, dtype=bool)
    for v in vals:
        tol = 1e-9 * (1.0 + float(np.max(np.abs(v))))
        unsure |= np.abs(v) <= tol
        mask &= v > 0
    for j, i in zip(*np.nonzero(unsure)):
        mask[j, i] = two_point_conditions(x1, y1, xs[i], ys[j])
    return RegionScan(x1, y1, np.array([float(v) for v in xs]), np.array([float(v) for v in ys]),
                      mask, int(unsure.sum()))


def _system_in_y(x1: Fraction, y1: Fraction, x2: Fraction) -> list[P.Poly]:
    """Every quantity of the two point system as a polynomial in ``y2``."""
    a = -x1 * y1 * (1 - x1 - y1)
    b = [-x2 * x2 * y1 * y1 + x2 * x2 * y1 + y1 * y1 * x2 - x2 * y1,
         2 * x1 * x2 * y1 + x1 * x1 - x1,
         x1 - x1 * x1]
    c = [Fraction(0), -x2 * (1 - x2), x2]
    w = 1 - x1 - y1
    disc = P.add(P.mul(b, b), P.scale(c, -4 * a))
    e1 = P.add(b, [2 * x2 * y1 * w])
    e2 = P.add(b, [Fraction(0), 2 * x1 * w])
    return [[Fraction(0), Fraction(-1)], [1 - x2, Fraction(-1)], disc, e1,
            P.add(P.mul(e1, e1), P.scale(disc, -1)), P.scale(e2, -1),
            P.add(P.mul(e2, e2), P.scale(disc, -1))]


def feasible_y2(x1, y1, x2) -> Fraction | None:
    """Some ``y2 < 0`` satisfying the two point system for fixed ``x1, y1, x2``, if any.

    Exact: the system consists of strict polynomial inequalities in ``y2``, so
    its solution set is a union of open cells between real roots of the
    factors. One rational point per cell is tested.
    """
    x1, y1, x2 = (to_fraction(v) for v in (x1, y1, x2))
    if not (0 < x2 < 1):
        return None
    polys = [p for p in _system_in_y(x1, y1, x2) if P.trim(p)]
    product = [Fraction(1)]
    for p in polys:
        if len(P.trim(p)) > 1:
            product = P.mul(product, p)
    for y in P.cell_samples(product):
        if y < 0 and all(P.evaluate(p, y) > 0 for p in polys) \
                and two_point_conditions(x1, y1, x2, y):
            return y
    return None


# ---------------------------------------------------------------- cusp family


@dataclass(frozen=True)
class CuspFamily:
    mu: tuple[Fraction, ...]
    residues: tuple[Fraction, ...]
    gale: GaleDual
    eps: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "mu": [fmt(m) for m in self.mu],
            "residues": [fmt(a) for a in self.residues],
            "B": [[fmt(x) for x in row] for row in self.gale.B],
            "eps": list(self.eps),
            "support": self.gale.support.to_json(),
        }


def cusp_family(mus: Sequence) -> CuspFamily:
    """Gale dual whose parametrization has critical points exactly at ``mus``.

    The residues ``a_i`` come from the partial fraction expansion of
    ``prod(mu - mu_i) / (prod(mu + mu_i) (mu + 1))``.
    """
    mu = tuple(to_fraction(m) for m in mus)
    if not mu:
        raise InputError("at least one value is required")
    if len(set(mu)) != len(mu) or any(m <= 0 or m == 1 for m in mu):
        raise InputError("values must be distinct, positive and different from 1")
    n = len(mu)
    poles = list(mu) + [Fraction(1)]

    def f(x):
        out = Fraction(1)
        for m in mu:
            out *= x - m
        return out

    residues = []
    for i, p in enumerate(poles):
        den = Fraction(1)
        for j, r in enumerate(poles):
            if j != i:
                den *= r - p
        residues.append(f(-p) / den)
    if any(r == 0 for r in residues):
        raise AssertionError("vanishing residue")
    if sum(r / m for r, m in zip(residues, mu)) + residues[-1] != (-1) ** n:
        raise AssertionError("residues violate the first normalization")
    if sum(residues) != 1:
        raise AssertionError("residues do not sum to 1")
    rows = [(r / m, r) for r, m in zip(residues, mu)]
    rows.append((residues[-1], residues[-1]))
    rows.append((Fraction((-1) ** (n + 1)), Fraction(0)))
    rows.append((Fraction(0), Fraction(-1)))
    if any(sum(row[j] for row in rows) != 0 for j in range(2)):
        raise AssertionError("columns of B do not sum to zero")
    eps = tuple(sign(r) for r in residues) + ((-1) ** (n + 1), -1)
    support = support_from_gale(rows, eps)
    ahat = build_ahat(support)
    for row in ahat.entries:
        for j in range(2):
            if sum(x * b[j] for x, b in zip(row, rows)) != 0:
                raise AssertionError("support does not realize B")
    return CuspFamily(mu, tuple(residues), GaleDual(tuple(rows), ahat), eps)
