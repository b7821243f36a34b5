"""Dense univariate polynomials over Q and real root isolation.

Polynomials are coefficient lists, lowest degree first. Real roots are
isolated with Sturm sequences and refined by exact rational bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Poly = list[Fraction]


def trim(p: Sequence) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def scale(p: Sequence, c) -> Poly:
    return trim([Fraction(c) * x for x in p])


def mul(p: Sequence, q: Sequence) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def evaluate(p: Sequence, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence) -> Poly:
    return trim([i * p[i] for i in range(1, len(p))])


def divmod_poly(p: Sequence, q: Sequence) -> tuple[Poly, Poly]:
    p, q = trim(p), trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    rem = list(p)
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        f = rem[-1] / q[-1]
        quot[shift] = f
        for i, c in enumerate(q):
            rem[i + shift] -= f * c
        rem = trim(rem)
    return trim(quot), rem


def monic(p: Sequence) -> Poly:
    p = trim(p)
    return [c / p[-1] for c in p] if p else []


def gcd(p: Sequence, q: Sequence) -> Poly:
    a, b = trim(p), trim(q)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def squarefree(p: Sequence) -> Poly:
    p = trim(p)
    if len(p) <= 1:
        return p
    g = gcd(p, derivative(p))
    return monic(divmod_poly(p, g)[0])


def sturm_sequence(p: Sequence) -> list[Poly]:
    seq = [trim(p), derivative(p)]
    while seq[-1]:
        seq.append(scale(divmod_poly(seq[-2], seq[-1])[1], -1))
    return seq[:-1]


def sign_variations(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq: Sequence[Poly], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct roots in the half-open interval (lo, hi]."""
    return (sign_variations(evaluate(s, lo) for s in seq)
            - sign_variations(evaluate(s, hi) for s in seq))


def cauchy_bound(p: Sequence) -> Fraction:
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def clear_denominators(p: Sequence) -> list[int]:
    p = trim(p)
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints] if g else ints


@dataclass(frozen=True)
class RealRoot:
    """A real root inside ``(lo, hi]``; ``exact`` roots have ``lo == hi``."""

    lo: Fraction
    hi: Fraction
    exact: bool

    @property
    def value(self) -> Fraction:
        return self.lo if self.exact else (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.value)


def _refine(seq: list[Poly], p: Poly, lo: Fraction, hi: Fraction, width: Fraction):
    while hi - lo >= width:
        mid = (lo + hi) / 2
        if evaluate(p, mid) == 0:
            return mid, mid
        if count_roots(seq, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def real_roots(p: Sequence, width: Fraction = Fraction(1, 10**12),
               recognize: bool = True) -> list[RealRoot]:
    """All distinct real roots of ``p``, sorted.

    Isolating intervals are refined below ``width``. With ``recognize`` they
    are also refined below the separation bound for rationals with denominator
    dividing the leading coefficient, so rational roots are recognised exactly.
    """
    p = squarefree(p)
    if len(p) <= 1:
        return []
    ints = clear_denominators(p)
    lead = abs(ints[-1])
    width = Fraction(width)
    if recognize:
        width = min(width, Fraction(1, 2 * lead * lead))
    seq = sturm_sequence(p)
    bound = cauchy_bound(p)
    stack = [(-bound, bound)]
    isolated = []
    while stack:
        lo, hi = stack.pop()
        c = count_roots(seq, lo, hi)
        if c == 0:
            continue
        if c == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    roots = []
    for lo, hi in sorted(isolated):
        if evaluate(p, hi) == 0:
            roots.append(RealRoot(hi, hi, True))
            continue
        lo, hi = _refine(seq, p, lo, hi, width)
        if lo == hi:
            roots.append(RealRoot(lo, lo, True))
            continue
        guess = ((lo + hi) / 2).limit_denominator(lead)
        if recognize and lo < guess <= hi and evaluate(p, guess) == 0:
            roots.append(RealRoot(guess, guess, True))
        else:
            roots.append(RealRoot(lo, hi, False))
    return roots


def refine_root(p: Sequence, root: RealRoot, width: Fraction) -> RealRoot:
    if root.exact:
        return root
    p = squarefree(p)
    lo, hi = _refine(sturm_sequence(p), p, root.lo, root.hi, width)
    return RealRoot(lo, hi, lo == hi)


def roots_in_interval(p: Sequence, lo, hi) -> int:
    """Distinct real roots in the open interval (lo, hi); ``None`` endpoints are infinite."""
    p = squarefree(p)
    if len(p) <= 1:
        return 0
    b = cauchy_bound(p) + 1
    lo = -b if lo is None else Fraction(lo)
    hi = b if hi is None else Fraction(hi)
    if lo >= hi:
        return 0
    seq = sturm_sequence(p)
    n = count_roots(seq, lo, hi)
    if evaluate(p, hi) == 0:
        n -= 1
    return n


def cell_samples(p: Sequence) -> list[Fraction]:
    """One rational point in every open interval cut out by the real roots of ``p``.

    Includes a point below the smallest and above the largest root; for a
    polynomial without real roots a single point is returned.
    """
    q = squarefree(p)
    roots = real_roots(q, Fraction(1, 2**10), recognize=False) if len(q) > 1 else []
    if not roots:
        return [Fraction(0)]
    out = [roots[0].lo - 1]
    for k in range(len(roots) - 1):
        left, right = roots[k], roots[k + 1]
        while True:
            a, b = left.hi, right.lo
            if a < b:
                out.append((a + b) / 2)
                break
            if not left.exact:
                left = refine_root(q, left, (left.hi - left.lo) / 2)
            if not right.exact:
                right = refine_root(q, right, (right.hi - right.lo) / 2)
    out.append(roots[-1].hi + 1)
    return out
