"""Separating hyperplanes, enclosing hyperplanes and simplex separation.

Every decision here is an exact rational feasibility problem solved with the
simplex method in :mod:`viropatch.lp`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from . import lp
from .errors import DegenerateSimplex, DimensionTooLarge, TooManyPoints
from .rational import affine_rank, det, fmt, nullspace, solve
from .support import SignedSupport, affine_chart, build_ahat

SEPARATING = "separating"
NONTRIVIAL = "non-trivial"
VERY_STRICT = "very-strict"
ENCLOSING = "enclosing"

MAX_ENUMERATION_POINTS = 20
MAX_ENCLOSING_OTHER = 12


@dataclass(frozen=True)
class Hyperplane:
    """``H = {x : v.x = a}``; the positive side is ``v.x >= a``.

    ``trivial`` marks the degenerate case where one sign class is empty and
    any hyperplane with all points on one side serves as a witness.
    """

    v: tuple[Fraction, ...]
    a: Fraction
    kind: str = SEPARATING
    trivial: bool = False

    def value(self, p: Sequence[Fraction]) -> Fraction:
        return sum((x * y for x, y in zip(self.v, p)), Fraction(0)) - self.a

    def side(self, p: Sequence[Fraction]) -> int:
        d = self.value(p)
        return (d > 0) - (d < 0)

    def to_json(self) -> dict:
        return {"v": [fmt(x) for x in self.v], "a": fmt(self.a), "kind": self.kind,
                "trivially_separable": self.trivial}


@dataclass(frozen=True)
class KernelWitness:
    """A strictly positive ``u`` with ``A_eps u = 0``."""

    u: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {"u": [fmt(x) for x in self.u]}


def _w_to_hyperplane(w: Sequence[Fraction], kind: str) -> Hyperplane:
    return Hyperplane(tuple(w[1:]), -w[0], kind)


def _trivial_hyperplane(support: SignedSupport, kind: str) -> Hyperplane:
    n = support.n
    if n == 0:
        return Hyperplane((), Fraction(0), kind, trivial=True)
    v = tuple(Fraction(int(i == 0)) for i in range(n))
    xs = [p[0] for p in support.points]
    # every point strictly on the side of its (common) sign
    if support.signs[0] > 0:
        return Hyperplane(v, min(xs) - 1, kind, trivial=True)
    return Hyperplane(v, max(xs) + 1, kind, trivial=True)


def _one_sided(support: SignedSupport) -> bool:
    return len(set(support.signs)) == 1


def _signed_rows(support: SignedSupport) -> list[list[Fraction]]:
    """Rows of ``A_eps^T``: ``eps_i * (1, alpha_i)``."""
    return [[s * Fraction(1)] + [s * x for x in p] for p, s in zip(support.points, support.signs)]


def is_separating(h: Hyperplane, support: SignedSupport) -> bool:
    return all(h.side(p) * s >= 0 for p, s in zip(support.points, support.signs))


def has_nontrivial_separating_hyperplane(support: SignedSupport) -> Hyperplane | None:
    """A non-trivial separating hyperplane, or ``None`` when none exists.

    Solves ``max sum(A_eps^T w)`` over ``0 <= A_eps^T w <= 1``; a positive
    optimum means some point lies strictly off the hyperplane.
    """
    if _one_sided(support):
        return _trivial_hyperplane(support, NONTRIVIAL)
    rows = _signed_rows(support)
    m = len(rows[0])
    A_ub = [[-x for x in r] for r in rows] + [list(r) for r in rows]
    b_ub = [0] * len(rows) + [1] * len(rows)
    c = [sum(r[j] for r in rows) for j in range(m)]
    res = lp.linprog(c, A_ub, b_ub, free=[True] * m, maximize=True)
    if res.status != lp.OPTIMAL or res.value <= 0:
        return None
    return _w_to_hyperplane(res.x, NONTRIVIAL)


def positive_kernel_witness(support: SignedSupport) -> KernelWitness | None:
    """``u >= 1`` with ``A_eps u = 0`` if the kernel meets the open orthant."""
    A = build_ahat(support).signed()
    # the kernel is a cone, so u > 0 exists iff u >= 1 does
    A_ub = [[Fraction(-int(i == j)) for j in range(support.count)] for i in range(support.count)]
    b_ub = [-1] * support.count
    x = lp.feasible_point(A_ub, b_ub, A, [0] * len(A), nvar=support.count)
    return KernelWitness(tuple(x)) if x is not None else None


def stiemke_alternative(support: SignedSupport) -> Hyperplane | KernelWitness:
    """Exactly one of a non-trivial separating hyperplane and a positive kernel vector."""
    h = has_nontrivial_separating_hyperplane(support)
    if h is not None:
        return h
    u = positive_kernel_witness(support)
    assert u is not None, "Stiemke alternative violated"
    return u


def has_very_strict_separating_hyperplane(support: SignedSupport) -> Hyperplane | None:
    """Maximize the margin ``t`` in ``A_eps^T w >= t``, capped at ``t <= 1``."""
    if _one_sided(support):
        return _trivial_hyperplane(support, VERY_STRICT)
    rows = _signed_rows(support)
    m = len(rows[0])
    # variables (w, t); constraint t - row.w <= 0 and t <= 1
    A_ub = [[-x for x in r] + [Fraction(1)] for r in rows]
    A_ub.append([Fraction(0)] * m + [Fraction(1)])
    b_ub = [0] * len(rows) + [1]
    c = [0] * m + [1]
    res = lp.linprog(c, A_ub, b_ub, free=[True] * m + [True], maximize=True)
    if res.status != lp.OPTIMAL or res.value <= 0:
        return None
    return _w_to_hyperplane(res.x[:m], VERY_STRICT)


def _supporting(points, idx: Sequence[int]):
    """Normal and offset of the hyperplane through ``points[idx]``, or None."""
    n = len(points[0])
    base = points[idx[0]]
    dirs = [[a - b for a, b in zip(points[i], base)] for i in idx[1:]]
    ker = nullspace(dirs) if dirs else [[Fraction(int(j == 0)) for j in range(n)]]
    if len(ker) != 1:
        return None
    v = ker[0]
    return v, sum((x * y for x, y in zip(v, base)), Fraction(0))


def _faces_full(points: Sequence[Sequence[Fraction]]) -> list[frozenset[int]]:
    n = len(points[0])
    count = len(points)
    facets: set[frozenset[int]] = set()
    if n == 0:
        return [frozenset(range(count))]
    for idx in itertools.combinations(range(count), n):
        sup = _supporting(points, idx)
        if sup is None:
            continue
        v, a = sup
        vals = [sum((x * y for x, y in zip(v, p)), Fraction(0)) - a for p in points]
        if all(d >= 0 for d in vals) or all(d <= 0 for d in vals):
            facets.add(frozenset(i for i, d in enumerate(vals) if d == 0))
    faces = set(facets)
    frontier = set(facets)
    while frontier:
        new = set()
        for f in frontier:
            for g in facets:
                h = f & g
                if h and h not in faces:
                    new.add(h)
        faces |= new
        frontier = new
    faces.add(frozenset(range(count)))
    return sorted(faces, key=lambda f: (len(f), sorted(f)))


def enumerate_faces(support: SignedSupport) -> list[tuple[int, ...]]:
    """Point-index sets ``A cap F`` of every nonempty face ``F`` of ``Conv(A)``.

    Facets come from supporting hyperplanes through ``n``-subsets; lower faces
    are intersections of facets. The full polytope is included.
    """
    if support.n > 3:
        raise DimensionTooLarge(f"face enumeration supports n <= 3, got n = {support.n}")
    pts = support.points
    if affine_rank(pts) < support.n:
        pts = affine_chart(pts)
        if not pts[0]:
            return [tuple(range(support.count))]
    return [tuple(sorted(f)) for f in _faces_full(pts)]


@dataclass(frozen=True)
class FaceVerdict:
    face: tuple[int, ...]
    hyperplane: Hyperplane | None

    @property
    def separable(self) -> bool:
        return self.hyperplane is not None


@dataclass(frozen=True)
class FaceSeparabilityReport:
    faces: tuple[FaceVerdict, ...]

    @property
    def all_separable(self) -> bool:
        return all(f.separable for f in self.faces)

    @property
    def failing(self) -> list[tuple[int, ...]]:
        return [f.face for f in self.faces if not f.separable]

    def to_json(self) -> list[dict]:
        return [{"face": list(f.face), "separable": f.separable,
                 "hyperplane": f.hyperplane.to_json() if f.hyperplane else None}
                for f in self.faces]


def all_faces_separable(support: SignedSupport) -> FaceSeparabilityReport:
    """Separation test on ``(A_F, eps_F)`` for every face ``F``.

    The test runs on the face's points in the ambient coordinates; a separating
    hyperplane in the face's affine hull extends to one in the ambient space and
    conversely, so the verdict equals the one in a chart of the face.
    """
    out = []
    for face in enumerate_faces(support):
        sub = SignedSupport(tuple(support.points[i] for i in face),
                            tuple(support.signs[i] for i in face))
        out.append(FaceVerdict(face, has_nontrivial_separating_hyperplane(sub)))
    return FaceSeparabilityReport(tuple(out))


def zonotope_bound(n: int, k: int) -> int:
    return 2 * sum(comb(n + k, i) for i in range(k))


@dataclass(frozen=True)
class SeparabilityReport:
    verdicts: dict = field(repr=False)
    count: int
    bound: int

    @property
    def within_bound(self) -> bool:
        return self.count <= self.bound

    def to_json(self) -> dict:
        return {"count": self.count, "bound": self.bound}


def count_nonseparable_sign_vectors(support: SignedSupport) -> SeparabilityReport:
    """Count sign vectors without a non-trivial separating hyperplane."""
    m = support.count
    if m > MAX_ENUMERATION_POINTS:
        raise TooManyPoints(f"{m} points exceed the enumeration cap of {MAX_ENUMERATION_POINTS}")
    r = affine_rank(support.points)
    n, k = r, m - r - 1
    verdicts = {}
    # a hyperplane separates eps exactly when it separates -eps, so solve half
    for rest in itertools.product((1, -1), repeat=m - 1):
        eps = (1,) + rest
        ok = has_nontrivial_separating_hyperplane(support.with_signs(eps)) is not None
        verdicts[eps] = verdicts[tuple(-e for e in eps)] = ok
    count = sum(1 for ok in verdicts.values() if not ok)
    return SeparabilityReport(verdicts, count, zonotope_bound(n, k))


def strict_enclosing_hyperplanes(support: SignedSupport, side: str = "positive"
                                 ) -> tuple[Hyperplane, Hyperplane] | None:
    """Parallel hyperplanes ``v.x = a`` and ``v.x = b`` (``a >= b``) enclosing one sign class.

    The chosen class lies in the slab ``b <= v.x <= a``; every point of the
    other class lies outside its open interior, with at least one strictly
    above and one strictly below. Each split of the other class into an upper
    and a lower group is one LP; the first feasible split wins.
    """
    if support.n != 2:
        raise DimensionTooLarge("strict enclosing hyperplanes are implemented for n = 2")
    if side not in ("positive", "negative"):
        raise ValueError("side must be 'positive' or 'negative'")
    inside = support.positive if side == "positive" else support.negative
    other = support.negative if side == "positive" else support.positive
    if len(other) < 2:
        return None
    if len(other) > MAX_ENCLOSING_OTHER:
        raise TooManyPoints(f"{len(other)} outside points exceed the cap of {MAX_ENCLOSING_OTHER}")
    pts = support.points
    one, zero = Fraction(1), Fraction(0)
    # variables: v1, v2, a, b, t
    for mask in range(1, 2 ** len(other) - 1):
        above = [other[i] for i in range(len(other)) if mask >> i & 1]
        below = [other[i] for i in range(len(other)) if not mask >> i & 1]
        A_ub, b_ub = [], []
        for i in inside:
            x, y = pts[i]
            A_ub.append([x, y, -one, zero, zero])
            A_ub.append([-x, -y, zero, one, zero])
        for i in above:
            x, y = pts[i]
            A_ub.append([-x, -y, one, zero, zero])
        for i in below:
            x, y = pts[i]
            A_ub.append([x, y, zero, -one, zero])
        sx = sum(pts[i][0] for i in above)
        sy = sum(pts[i][1] for i in above)
        A_ub.append([-sx, -sy, Fraction(len(above)), zero, one])
        sx = sum(pts[i][0] for i in below)
        sy = sum(pts[i][1] for i in below)
        A_ub.append([sx, sy, zero, -Fraction(len(below)), one])
        A_ub.append([zero, zero, -one, one, zero])
        A_ub.append([zero, zero, zero, zero, one])
        b_ub = [0] * (len(A_ub) - 1) + [1]
        res = lp.linprog([0, 0, 0, 0, 1], A_ub, b_ub, free=[True] * 5, maximize=True)
        if res.status == lp.OPTIMAL and res.value > 0:
            v1, v2, a, b, _ = res.x
            v = (v1, v2)
            return Hyperplane(v, a, ENCLOSING), Hyperplane(v, b, ENCLOSING)
    return None


def is_strict_enclosing(upper: Hyperplane, lower: Hyperplane, support: SignedSupport,
                        side: str = "positive") -> bool:
    """Pointwise exact check of the enclosing conditions."""
    inside = support.positive if side == "positive" else support.negative
    other = support.negative if side == "positive" else support.positive
    if upper.v != lower.v or upper.a < lower.a:
        return False
    pts = support.points
    if any(upper.side(pts[i]) > 0 or lower.side(pts[i]) < 0 for i in inside):
        return False
    if any(upper.side(pts[i]) < 0 and lower.side(pts[i]) > 0 for i in other):
        return False
    return any(upper.side(pts[i]) > 0 for i in other) and any(lower.side(pts[i]) < 0 for i in other)


def barycentric(simplex: Sequence[Sequence[Fraction]], p: Sequence[Fraction]) -> list[Fraction]:
    """Coordinates ``lam`` with ``sum(lam) = 1`` and ``sum(lam_i mu_i) = p``."""
    n = len(p)
    M = [[Fraction(1)] * (n + 1)] + [[simplex[j][d] for j in range(n + 1)] for d in range(n)]
    return solve(M, [Fraction(1)] + list(p))


def region_label(lam: Sequence[Fraction]) -> str:
    """``P``, ``P-,i`` for the negative vertex cone at vertex i, or ``none``."""
    if all(x >= 0 for x in lam):
        return "P"
    for i in range(len(lam)):
        if all(lam[j] <= 0 for j in range(len(lam)) if j != i):
            return f"P-,{i}"
    return "none"


def in_negative_cone(lam: Sequence[Fraction]) -> bool:
    return any(all(lam[j] <= 0 for j in range(len(lam)) if j != i) for i in range(len(lam)))


def _interior(lam: Sequence[Fraction]) -> bool:
    n = len(lam) - 1
    if n == 1:
        return True
    if all(x > 0 for x in lam):
        return True
    return any(all(lam[j] < 0 for j in range(len(lam)) if j != i) for i in range(len(lam)))


@dataclass(frozen=True)
class SimplexSeparation:
    vertices: tuple[tuple[Fraction, ...], ...]
    membership: tuple[str, ...]
    interior_witness: bool
    verdict: bool

    def to_json(self) -> dict:
        return {"vertices": [[fmt(x) for x in v] for v in self.vertices],
                "membership": list(self.membership),
                "interior_witness": self.interior_witness, "verdict": self.verdict}


def simplex_separation(support: SignedSupport, simplex: Sequence[Sequence]) -> SimplexSeparation:
    """Classify each point against a simplex ``P`` and its negative vertex cones."""
    verts = tuple(tuple(Fraction(x) for x in v) for v in simplex)
    n = support.n
    if len(verts) != n + 1 or any(len(v) != n for v in verts):
        raise DegenerateSimplex(f"need {n + 1} vertices in dimension {n}")
    edges = [[verts[j][d] - verts[0][d] for d in range(n)] for j in range(1, n + 1)]
    if n == 0 or det(edges) == 0:
        raise DegenerateSimplex("simplex vertices are affinely dependent")
    lams = [barycentric(verts, p) for p in support.points]
    labels = tuple(region_label(lam) for lam in lams)
    witness = any(lab != "none" and _interior(lam) for lab, lam in zip(labels, lams))
    ok_pos = all(labels[i] == "P" for i in support.positive)
    ok_neg = all(in_negative_cone(lams[i]) for i in support.negative)
    return SimplexSeparation(verts, labels, witness, ok_pos and ok_neg and witness)
