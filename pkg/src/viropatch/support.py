"""Signed supports, the homogenized exponent matrix and its Gale dual."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Sequence

from . import lp
from .errors import (
    InputError,
    InvalidFace,
    NormalizationImpossible,
    NotFullCodimension,
    NotFullDimensional,
)
from .rational import (
    affine_rank,
    det,
    fmt,
    inverse,
    matmul,
    nullspace,
    parse_vector,
    rank,
    rref,
    to_fraction,
)

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class SignedSupport:
    """Exponent vectors ``points`` with one coefficient sign each."""

    points: tuple[Point, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(tuple(to_fraction(x) for x in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if not pts:
            raise InputError("support is empty")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise InputError("points have differing numbers of coordinates")
        if len(self.signs) != len(pts):
            raise InputError("signs and points differ in length")
        if any(s not in (1, -1) for s in self.signs):
            raise InputError("signs must be +1 or -1")
        if len(set(pts)) != len(pts):
            raise InputError("points must be pairwise distinct")

    @classmethod
    def from_lists(cls, points: Sequence[Sequence], signs: Sequence[int]) -> "SignedSupport":
        return cls(tuple(parse_vector(p) for p in points), tuple(signs))

    @property
    def n(self) -> int:
        return len(self.points[0])

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def positive(self) -> list[int]:
        return [i for i, s in enumerate(self.signs) if s > 0]

    @property
    def negative(self) -> list[int]:
        return [i for i, s in enumerate(self.signs) if s < 0]

    @cached_property
    def full_dimensional(self) -> bool:
        return affine_rank(self.points) == self.n

    def with_signs(self, signs: Sequence[int]) -> "SignedSupport":
        return SignedSupport(self.points, tuple(signs))

    def negated(self) -> "SignedSupport":
        return self.with_signs(tuple(-s for s in self.signs))

    def float_points(self):
        import numpy as np

        return np.array([[float(x) for x in p] for p in self.points], dtype=float)

    def to_json(self) -> dict:
        return {"points": [[fmt(x) for x in p] for p in self.points], "signs": list(self.signs)}


def load_support(source) -> SignedSupport:
    """Read the support JSON schema from a path, a JSON string or a dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = Path(source).read_text(encoding="utf-8") if not str(source).lstrip().startswith("{") \
            else str(source)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict) or "points" not in data or "signs" not in data:
        raise InputError('support JSON needs "points" and "signs"')
    return SignedSupport.from_lists(data["points"], data["signs"])


@dataclass(frozen=True)
class AhatMatrix:
    """The (n+1) x (n+k+1) matrix with a row of ones above the exponents."""

    entries: tuple[tuple[Fraction, ...], ...]
    support: SignedSupport = field(repr=False)

    @cached_property
    def rank(self) -> int:
        return rank(self.entries)

    @property
    def codimension(self) -> int:
        return len(self.entries[0]) - self.rank

    @property
    def full_dimensional(self) -> bool:
        return self.rank == len(self.entries)

    def signed(self, signs: Sequence[int] | None = None) -> list[list[Fraction]]:
        signs = self.support.signs if signs is None else signs
        return [[x * s for x, s in zip(row, signs)] for row in self.entries]


def build_ahat(support: SignedSupport) -> AhatMatrix:
    rows = [tuple(Fraction(1) for _ in support.points)]
    rows += [tuple(p[d] for p in support.points) for d in range(support.n)]
    return AhatMatrix(tuple(rows), support)


@dataclass(frozen=True)
class GaleDual:
    """Kernel basis ``B`` of the exponent matrix, last row ``(0,...,0,-1)``."""

    B: tuple[tuple[Fraction, ...], ...]
    ahat: AhatMatrix = field(repr=False)

    @property
    def k(self) -> int:
        return len(self.B[0]) if self.B else 0

    @property
    def rows(self) -> int:
        return len(self.B)

    @property
    def n(self) -> int:
        return self.rows - self.k - 1

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.B)

    @property
    def support(self) -> SignedSupport:
        return self.ahat.support

    def float_B(self):
        import numpy as np

        return np.array([[float(x) for x in row] for row in self.B], dtype=float)


def gale_dual(ahat: AhatMatrix) -> GaleDual:
    """Deterministic Gale dual.

    Kernel vectors come from the reduced row echelon form, one per free
    column, with the free entry set to -1. When the last point is a free
    column this already yields the last row ``(0, ..., 0, -1)``.
    """
    if not ahat.full_dimensional:
        raise NotFullDimensional(f"rank {ahat.rank} < n+1 = {len(ahat.entries)}")
    basis = nullspace(ahat.entries)
    if not basis:
        raise NotFullCodimension("kernel is {0}: codimension k = 0, no discriminant")
    cols = len(ahat.entries[0])
    last = cols - 1
    if all(v[last] == 0 for v in basis):
        raise NormalizationImpossible("last point is affinely forced; every kernel vector vanishes there")
    # column operations: bring a vector with nonzero last entry to the end,
    # scale it to -1 and clear the last entry of the others
    idx = max(i for i, v in enumerate(basis) if v[last] != 0)
    basis.append(basis.pop(idx))
    piv = basis[-1]
    piv = [x * (Fraction(-1) / piv[last]) for x in piv]
    basis[-1] = piv
    for i in range(len(basis) - 1):
        f = basis[i][last]
        if f != 0:
            basis[i] = [x + f * y for x, y in zip(basis[i], piv)]
    B = tuple(tuple(basis[j][i] for j in range(len(basis))) for i in range(cols))
    return GaleDual(B, ahat)


def gale_dual_of(support: SignedSupport) -> GaleDual:
    return gale_dual(build_ahat(support))


def oriented_signs(signs: Sequence[int]) -> tuple[tuple[int, ...], bool]:
    """Fix the last sign to -1 by a global flip; returns (signs, flipped)."""
    signs = tuple(signs)
    if signs[-1] == 1:
        return tuple(-s for s in signs), True
    return signs, False


def support_from_gale(B: Sequence[Sequence[Fraction]], signs: Sequence[int]) -> SignedSupport:
    """Exponent vectors whose exponent matrix has kernel spanned by the columns of B.

    Uses the left kernel of ``B``; the all-ones vector is taken as the first row.
    """
    Bt = [[Fraction(B[i][j]) for i in range(len(B))] for j in range(len(B[0]))]
    left = nullspace(Bt, free_value=Fraction(1))
    ones = [Fraction(1)] * len(B)
    rows = [ones]
    for v in left:
        if rank(rows + [v]) > len(rows):
            rows.append(v)
    n = len(rows) - 1
    pts = tuple(tuple(rows[d + 1][i] for d in range(n)) for i in range(len(B)))
    return SignedSupport(pts, tuple(signs))


@dataclass(frozen=True)
class Coefficients:
    values: tuple[float, ...]

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 if c > 0 else -1 for c in self.values)

    def __post_init__(self):
        if any(c == 0 for c in self.values):
            raise InputError("coefficients must be nonzero")

    def check(self, support: SignedSupport) -> None:
        if self.signs != support.signs:
            raise InputError("coefficient signs differ from the support's sign vector")


@dataclass(frozen=True)
class AffineTransform:
    M: tuple[tuple[Fraction, ...], ...]
    v: tuple[Fraction, ...]

    def apply(self, p: Sequence[Fraction]) -> Point:
        return tuple(sum((row[j] * p[j] for j in range(len(p))), Fraction(0)) + self.v[i]
                     for i, row in enumerate(self.M))

    @property
    def det(self) -> Fraction:
        return det(self.M)

    def to_json(self) -> dict:
        return {"M": [[fmt(x) for x in row] for row in self.M], "v": [fmt(x) for x in self.v]}


def _affine_basis(points: Sequence[Point], order: Sequence[int]) -> list[int]:
    chosen: list[int] = []
    for i in order:
        trial = [points[j] for j in chosen + [i]]
        if affine_rank(trial) == len(chosen):
            chosen.append(i)
    return chosen


def normalize_affine(support: SignedSupport) -> tuple[SignedSupport, AffineTransform]:
    """Map the support affinely (det > 0) so it contains 0, e_1, ..., e_n."""
    if not support.full_dimensional:
        raise NotFullDimensional("support is not full-dimensional")
    n = support.n
    identity = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    std = [tuple(Fraction(0) for _ in range(n))] + [identity[i] for i in range(n)]
    if all(p in support.points for p in std):
        return support, AffineTransform(identity, tuple(Fraction(0) for _ in range(n)))
    order = support.positive + support.negative
    basis = _affine_basis(support.points, order)[: n + 1]
    base, rest = basis[0], basis[1:]
    cols = [[support.points[i][d] - support.points[base][d] for d in range(n)] for i in rest]
    D = [[cols[j][d] for j in range(n)] for d in range(n)]
    if det(D) < 0:
        if n >= 2:
            rest[0], rest[1] = rest[1], rest[0]
        else:
            base, rest = rest[0], [base]
        cols = [[support.points[i][d] - support.points[base][d] for d in range(n)] for i in rest]
        D = [[cols[j][d] for j in range(n)] for d in range(n)]
    M = inverse(D)
    v = [-row[0] for row in matmul(M, [[c] for c in support.points[base]])]
    T = AffineTransform(tuple(tuple(r) for r in M), tuple(v))
    return SignedSupport(tuple(T.apply(p) for p in support.points), support.signs), T


def is_face(points: Sequence[Point], face: Sequence[int]) -> bool:
    """Exact LP test that ``face`` is exactly the point set of a face of Conv(points)."""
    face_set = set(face)
    if not face_set:
        return False
    if len(face_set) == len(points):
        return True
    n = len(points[0])
    # variables v (free, n entries) and offset a (free)
    A_eq = [list(points[i]) + [Fraction(-1)] for i in face_set]
    b_eq = [0] * len(A_eq)
    A_ub = [list(points[j]) + [Fraction(-1)] for j in range(len(points)) if j not in face_set]
    b_ub = [-1] * len(A_ub)
    return lp.feasible_point(A_ub, b_ub, A_eq, b_eq, nvar=n + 1, free=[True] * (n + 1)) is not None


def affine_chart(points: Sequence[Point]) -> list[Point]:
    """Coordinates of ``points`` in an affine basis of their affine hull."""
    basis = _affine_basis(points, range(len(points)))
    base, rest = basis[0], basis[1:]
    dirs = [[a - b for a, b in zip(points[i], points[base])] for i in rest]
    m = len(dirs)
    out = []
    for p in points:
        target = [a - b for a, b in zip(p, points[base])]
        aug = [[dirs[j][d] for j in range(m)] + [target[d]] for d in range(len(target))]
        r, piv = rref(aug)
        coords = [Fraction(0)] * m
        for i, c in enumerate(piv):
            if c < m:
                coords[c] = r[i][-1]
        out.append(tuple(coords))
    return out


def restrict_to_face(support: SignedSupport, face: Sequence[int]) -> SignedSupport:
    """Sub-support on a face, expressed in an affine chart of that face."""
    face = sorted(set(face))
    if any(i < 0 or i >= support.count for i in face) or not is_face(support.points, face):
        raise InvalidFace(f"{face} is not the point set of a face")
    sub = [support.points[i] for i in face]
    return SignedSupport(tuple(affine_chart(sub)), tuple(support.signs[i] for i in face))
