"""Exact rational parsing and dense linear algebra over ``Fraction``."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError

Matrix = list[list[Fraction]]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_DECIMAL_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def to_fraction(value) -> Fraction:
    """Parse ``value`` exactly.

    Strings may be ``"p/q"`` or decimal (``"12.5"`` gives ``25/2``). Floats are
    converted through their shortest repr so ``0.1`` means one tenth, not the
    nearest binary double. Anything else (``"nan"``, ``"inf"``, ``"pi"``) is
    rejected.
    """
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise InputError(f"not a rational number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        s = value.strip()
        if _RATIONAL_RE.match(s):
            f = Fraction(s)
            return f
        if _DECIMAL_RE.match(s):
            return Fraction(s)
        raise InputError(f"not a rational number: {value!r}")
    raise InputError(f"not a rational number: {value!r}")


def parse_vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


def fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    cols = len(b[0]) if b else 0
    return [[sum((row[t] * b[t][j] for t in range(len(b))), Fraction(0)) for j in range(cols)]
            for row in a]


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def rref(a: Sequence[Sequence[Fraction]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with the pivot taken as the first nonzero
    entry scanning columns left to right, rows top to bottom."""
    m = [list(map(Fraction, row)) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence[Fraction]], free_value: Fraction = Fraction(-1)) -> Matrix:
    """Kernel basis as a list of column vectors.

    One vector per free column ``j`` (ascending): entry ``j`` is ``free_value``,
    the other free entries are zero, pivot entries are forced.
    """
    cols = len(a[0])
    r, pivots = rref(a)
    free = [j for j in range(cols) if j not in pivots]
    basis = []
    for j in free:
        v = [Fraction(0)] * cols
        v[j] = free_value
        for i, p in enumerate(pivots):
            v[p] = -r[i][j] * free_value
        basis.append(v)
    return basis


def det(a: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, row)) for row in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def inverse(a: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    inv = inverse(a)
    return [sum((inv[i][j] * b[j] for j in range(len(b))), Fraction(0)) for i in range(len(inv))]


def sign(q) -> int:
    return (q > 0) - (q < 0)


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull (``-1`` for no points)."""
    if not points:
        return -1
    base = points[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    return rank(diffs) if diffs and diffs[0] else 0
