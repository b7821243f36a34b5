"""The signed reduced A-discriminant for codimension two.

The curve is the image of the affine parametrization
``mu -> B^T Log|B (mu, 1)|`` over the parameter domain where the sign of
``B (mu, 1)`` equals the sign vector. Domain decomposition and critical
points are exact; sampling is floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import polynomial as P
from .errors import EmptyDomain, OutOfDomain, SignMismatch, WrongCodimension
from .rational import fmt, sign
from .support import GaleDual, oriented_signs


def _require_k2(gale: GaleDual) -> None:
    if gale.k != 2:
        raise WrongCodimension(f"codimension k = {gale.k}; this operation needs k = 2")


@dataclass(frozen=True)
class Interval:
    """Open interval; ``None`` stands for an infinite endpoint."""

    lo: Fraction | None
    hi: Fraction | None

    def contains(self, mu: Fraction) -> bool:
        return (self.lo is None or mu > self.lo) and (self.hi is None or mu < self.hi)

    def sample(self) -> Fraction:
        if self.lo is None and self.hi is None:
            return Fraction(0)
        if self.lo is None:
            return self.hi - 1
        if self.hi is None:
            return self.lo + 1
        return (self.lo + self.hi) / 2

    def to_json(self) -> list:
        return [None if self.lo is None else fmt(self.lo), None if self.hi is None else fmt(self.hi)]


@dataclass(frozen=True)
class ParamDomain:
    intervals: tuple[Interval, ...]
    breakpoints: tuple[Fraction, ...]
    signs: tuple[int, ...]
    flipped: bool = False

    @property
    def empty(self) -> bool:
        return not self.intervals

    def index_of(self, mu: Fraction) -> int | None:
        for i, iv in enumerate(self.intervals):
            if iv.contains(mu):
                return i
        return None

    def contains(self, mu) -> bool:
        return self.index_of(Fraction(mu)) is not None

    def to_json(self) -> dict:
        return {"intervals": [iv.to_json() for iv in self.intervals], "sign_flipped": self.flipped}


def linear_forms(gale: GaleDual) -> list[tuple[Fraction, Fraction]]:
    """Rows ``(B_i1, B_i2)``: the forms ``l_i(mu) = B_i1 mu + B_i2``."""
    return [(row[0], row[1]) for row in gale.B]


def form_signs(gale: GaleDual, mu: Fraction) -> tuple[int, ...]:
    return tuple(sign(b1 * mu + b2) for b1, b2 in linear_forms(gale))


def domain_intervals(gale: GaleDual, eps: Sequence[int]) -> ParamDomain:
    """Open intervals of ``mu`` with ``sign(B (mu, 1)) = eps``.

    A sign vector ending in +1 is negated first; the flip is recorded.
    """
    _require_k2(gale)
    eps, flipped = oriented_signs(eps)
    forms = linear_forms(gale)
    roots = sorted({-b2 / b1 for b1, b2 in forms if b1 != 0})
    edges = [None] + roots + [None]
    out = []
    for lo, hi in zip(edges, edges[1:]):
        iv = Interval(lo, hi)
        if form_signs(gale, iv.sample()) == eps:
            out.append(iv)
    return ParamDomain(tuple(out), tuple(roots), eps, flipped)


def _forms_at(gale: GaleDual, mu) -> np.ndarray:
    B = gale.float_B()
    return B[:, 0] * mu + B[:, 1]


def _check_domain(gale: GaleDual, eps, mu) -> np.ndarray:
    eps, _ = oriented_signs(eps)
    mu_q = Fraction(mu) if not isinstance(mu, Fraction) else mu
    if form_signs(gale, mu_q) != eps:
        raise OutOfDomain(f"mu = {float(mu)} is outside the parameter domain")
    return np.array(eps, dtype=float)


def xi_bar(gale: GaleDual, eps: Sequence[int], mu) -> np.ndarray:
    """``B^T Log|B (mu, 1)|`` for a scalar ``mu`` in the domain."""
    _require_k2(gale)
    _check_domain(gale, eps, mu)
    vals = _forms_at(gale, float(mu))
    return gale.float_B().T @ np.log(np.abs(vals))


def xi(gale: GaleDual, eps: Sequence[int], lam: Sequence[float]) -> np.ndarray:
    """``B^T Log|B lam|`` for ``lam`` with ``sign(B lam) = eps`` (any k)."""
    B = gale.float_B()
    v = B @ np.asarray(lam, dtype=float)
    if tuple(int(s) for s in np.sign(v)) != tuple(eps):
        raise SignMismatch("sign(B lambda) differs from the sign vector")
    return B.T @ np.log(np.abs(v))


def horn_kapranov(gale: GaleDual, eps: Sequence[int], lam: Sequence[float],
                  x: Sequence[float]) -> np.ndarray:
    """Coefficients ``c = B lam * exp(-alpha_i . x)`` with a singular zero at ``x``."""
    B = gale.float_B()
    v = B @ np.asarray(lam, dtype=float)
    if tuple(int(s) for s in np.sign(v)) != tuple(eps):
        raise SignMismatch("sign(B lambda) differs from the sign vector")
    A = gale.support.float_points()
    return v * np.exp(-(A @ np.asarray(x, dtype=float)))


def jacobian(gale: GaleDual, mu: Sequence[float]) -> np.ndarray:
    """``B^T diag(1 / B mu_hat) B~`` where ``B~`` drops the last column of B."""
    B = gale.float_B()
    mu_hat = np.append(np.atleast_1d(np.asarray(mu, dtype=float)), 1.0)
    return B.T @ np.diag(1.0 / (B @ mu_hat)) @ B[:, :-1]


@dataclass(frozen=True)
class CriticalPolynomial:
    q: tuple[Fraction, ...]
    q_tilde: tuple[Fraction, ...]

    @property
    def zero(self) -> bool:
        return not self.q

    @property
    def degree(self) -> int:
        return len(self.q) - 1

    def to_json(self) -> dict:
        return {"q_B": [fmt(c) for c in self.q], "q_tilde_B": [fmt(c) for c in self.q_tilde]}


def critical_polynomial(gale: GaleDual) -> CriticalPolynomial:
    """Exact expansion of ``q_B`` and ``q~_B``.

    ``q_B = sum_i B_i1^2 prod_{j != i} l_j`` and
    ``q~_B = sum_i B_i2 B_i1 prod_{j != i} l_j``.
    """
    _require_k2(gale)
    forms = [[b2, b1] for b1, b2 in linear_forms(gale)]
    q: P.Poly = []
    qt: P.Poly = []
    for i, (b1, b2) in enumerate(linear_forms(gale)):
        if b1 == 0:
            continue
        prod = [Fraction(1)]
        for j, f in enumerate(forms):
            if j != i:
                prod = P.mul(prod, f)
        q = P.add(q, P.scale(prod, b1 * b1))
        qt = P.add(qt, P.scale(prod, b1 * b2))
    n = gale.n
    if P.degree(q) > n:
        raise AssertionError(f"q_B has degree {P.degree(q)} > n = {n}")
    return CriticalPolynomial(tuple(q), tuple(qt))


@dataclass(frozen=True)
class CriticalPoint:
    root: P.RealRoot
    interval: int

    @property
    def mu(self) -> Fraction:
        return self.root.value

    @property
    def exact(self) -> bool:
        return self.root.exact

    def __float__(self) -> float:
        return float(self.root.value)

    def to_json(self) -> dict:
        d = {"mu": float(self), "exact": self.exact, "interval": self.interval}
        if self.exact:
            d["mu_exact"] = fmt(self.mu)
        else:
            d["isolating_interval"] = [fmt(self.root.lo), fmt(self.root.hi)]
        return d


def _locate_root(root: P.RealRoot, q: P.Poly, domain: ParamDomain) -> int | None:
    """Domain interval containing the root, deciding exactly."""
    if root.exact:
        return domain.index_of(root.lo)
    # an irrational root never equals a rational breakpoint, so refinement
    # eventually isolates it from every breakpoint
    while any(root.lo <= b <= root.hi for b in domain.breakpoints):
        root = P.refine_root(q, root, (root.hi - root.lo) / 4)
    return domain.index_of(root.hi)


def critical_points(gale: GaleDual, eps: Sequence[int],
                    width: Fraction = Fraction(1, 10**12)) -> list[CriticalPoint]:
    """Real roots of ``q_B`` lying in the parameter domain, in increasing order."""
    _require_k2(gale)
    domain = domain_intervals(gale, eps)
    if domain.empty:
        return []
    cp = critical_polynomial(gale)
    if cp.zero:
        return []
    out = []
    for root in P.real_roots(cp.q, width):
        idx = _locate_root(root, list(cp.q), domain)
        if idx is not None:
            out.append(CriticalPoint(root, idx))
    return out


# ---------------------------------------------------------------- sampling


@dataclass(frozen=True)
class Quality:
    """Sampling knobs; ``step`` is relative to the window diagonal."""

    step: float = 1e-3
    cusp_radius: float = 1e-3
    cusp_factor: int = 64
    max_depth: int = 40


class _Chart:
    """Reparametrization of one domain interval by ``u`` in R.

    Each form is evaluated as ``B_i1 * ((anchor - root_i) + delta)`` with an
    exact anchor, which keeps relative accuracy close to interval endpoints.
    """

    def __init__(self, gale: GaleDual, iv: Interval):
        self.iv = iv
        self.B = gale.float_B()
        forms = linear_forms(gale)
        self.slope = np.array([float(b1) for b1, _ in forms])
        self.const = np.array([float(b2) for _, b2 in forms])
        self.has_root = np.array([b1 != 0 for b1, _ in forms])

        def offsets(anchor):
            return np.array([float(anchor + b2 / b1) if b1 != 0 else 0.0 for b1, b2 in forms])

        self.lo_off = offsets(iv.lo) if iv.lo is not None else None
        self.hi_off = offsets(iv.hi) if iv.hi is not None else None
        self.width = float(iv.hi - iv.lo) if iv.lo is not None and iv.hi is not None else None

    def mu(self, u: np.ndarray) -> np.ndarray:
        iv = self.iv
        if iv.lo is not None and iv.hi is not None:
            return float(iv.lo) + self.width * _sigmoid(u)
        if iv.lo is not None:
            return float(iv.lo) + np.exp(u)
        if iv.hi is not None:
            return float(iv.hi) - np.exp(u)
        return u

    def u_of(self, mu: float) -> float:
        iv = self.iv
        if iv.lo is not None and iv.hi is not None:
            s = (mu - float(iv.lo)) / self.width
            return math.log(s / (1 - s))
        if iv.lo is not None:
            return math.log(mu - float(iv.lo))
        if iv.hi is not None:
            return math.log(float(iv.hi) - mu)
        return mu

    def log_forms(self, u: np.ndarray) -> np.ndarray:
        """``log|l_i(mu(u))|`` with shape (len(u), rows)."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        iv = self.iv
        rel = np.empty((u.size, self.slope.size))
        if iv.lo is not None and iv.hi is not None:
            left = u < 0
            d_lo = self.width * _sigmoid(u)
            d_hi = self.width * _sigmoid(-u)
            rel[:] = np.where(left[:, None], self.lo_off[None, :] + d_lo[:, None],
                              self.hi_off[None, :] - d_hi[:, None])
        elif iv.lo is not None:
            rel[:] = self.lo_off[None, :] + np.exp(u)[:, None]
        elif iv.hi is not None:
            rel[:] = self.hi_off[None, :] - np.exp(u)[:, None]
        else:
            rel[:] = u[:, None] + np.where(self.has_root, self.const / np.where(
                self.has_root, self.slope, 1.0), 0.0)[None, :]
        vals = np.where(self.has_root[None, :], np.abs(self.slope)[None, :] * np.abs(rel),
                        np.abs(self.const)[None, :])
        return np.log(vals)

    def image(self, u) -> np.ndarray:
        return self.log_forms(u) @ self.B


def _sigmoid(u):
    u = np.asarray(u, dtype=float)
    return np.where(u >= 0, 1.0 / (1.0 + np.exp(-np.abs(u))),
                    np.exp(-np.abs(u)) / (1.0 + np.exp(-np.abs(u))))


@dataclass(frozen=True)
class Window:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @property
    def diagonal(self) -> float:
        return math.hypot(self.xmax - self.xmin, self.ymax - self.ymin)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        return ((pts[:, 0] >= self.xmin) & (pts[:, 0] <= self.xmax)
                & (pts[:, 1] >= self.ymin) & (pts[:, 1] <= self.ymax))

    def padded(self, factor: float) -> "Window":
        cx, cy = (self.xmin + self.xmax) / 2, (self.ymin + self.ymax) / 2
        hx, hy = (self.xmax - self.xmin) / 2 * factor, (self.ymax - self.ymin) / 2 * factor
        return Window(cx - hx, cx + hx, cy - hy, cy + hy)

    @classmethod
    def around(cls, pts: np.ndarray, min_size: float = 1.0) -> "Window":
        pts = np.atleast_2d(pts)
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        c = (lo + hi) / 2
        h = np.maximum((hi - lo) / 2, min_size / 2)
        return cls(c[0] - h[0], c[0] + h[0], c[1] - h[1], c[1] + h[1])

    def to_json(self) -> list[float]:
        return [self.xmin, self.xmax, self.ymin, self.ymax]


@dataclass
class DiscriminantCurve:
    polylines: list[np.ndarray]
    params: list[np.ndarray]
    critical: list[CriticalPoint]
    critical_images: np.ndarray
    window: Window
    domain: ParamDomain
    metadata: dict = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.polylines

    def samples(self) -> np.ndarray:
        return np.vstack(self.polylines) if self.polylines else np.zeros((0, 2))


def asymptotes(gale: GaleDual, domain: ParamDomain) -> list[tuple[np.ndarray, np.ndarray]]:
    """Asymptotic lines ``base + t * direction`` (``t >= 0``) at each interval end.

    Approaching a breakpoint the forms vanishing there contribute
    ``log(delta) * sum B_i``; going to infinity every nonconstant form grows
    like ``log|mu|``.
    """
    B = gale.float_B()
    forms = linear_forms(gale)
    out = []
    for iv in domain.intervals:
        for end in (iv.lo, iv.hi):
            if end is None:
                continue
            vanish = [i for i, (b1, b2) in enumerate(forms) if b1 != 0 and -b2 / b1 == end]
            d = -B[vanish].sum(axis=0)
            logs = np.array([math.log(abs(float(b1 * end + b2))) if i not in vanish
                             else math.log(abs(float(b1))) for i, (b1, b2) in enumerate(forms)])
            out.append((logs @ B, d))
        if iv.lo is None or iv.hi is None:
            grow = [i for i, (b1, _) in enumerate(forms) if b1 != 0]
            d = B[grow].sum(axis=0)
            logs = np.array([math.log(abs(float(b1))) if b1 != 0 else math.log(abs(float(b2)))
                             for b1, b2 in forms])
            out.append((logs @ B, d))
    return out


def _ray_crossings(rays) -> list[np.ndarray]:
    pts = []
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            (p, d), (q, e) = rays[i], rays[j]
            m = np.array([d, -e]).T
            if abs(np.linalg.det(m)) < 1e-12 * (np.linalg.norm(d) * np.linalg.norm(e) + 1e-300):
                continue
            s, t = np.linalg.solve(m, q - p)
            if s >= 0 and t >= 0:
                pts.append(p + s * d)
    return pts


def segment_intersections(polylines: Sequence[np.ndarray], block: int = 512) -> np.ndarray:
    """Proper crossings between non-adjacent segments of the given polylines."""
    segs, owner, index = [], [], []
    for k, pl in enumerate(polylines):
        if len(pl) < 2:
            continue
        segs.append(np.hstack([pl[:-1], pl[1:]]))
        owner.append(np.full(len(pl) - 1, k))
        index.append(np.arange(len(pl) - 1))
    if not segs:
        return np.zeros((0, 2))
    S = np.vstack(segs)
    own = np.concatenate(owner)
    idx = np.concatenate(index)
    p, r = S[:, :2], S[:, 2:] - S[:, :2]
    bx0, bx1 = np.minimum(S[:, 0], S[:, 2]), np.maximum(S[:, 0], S[:, 2])
    by0, by1 = np.minimum(S[:, 1], S[:, 3]), np.maximum(S[:, 1], S[:, 3])
    hits = []
    for start in range(0, len(S), block):
        sl = slice(start, start + block)
        ov = ((bx0[sl, None] <= bx1[None, :]) & (bx1[sl, None] >= bx0[None, :])
              & (by0[sl, None] <= by1[None, :]) & (by1[sl, None] >= by0[None, :]))
        ii = np.arange(start, min(start + block, len(S)))
        ov &= ii[:, None] < np.arange(len(S))[None, :]
        adjacent = (own[ii, None] == own[None, :]) & (np.abs(idx[ii, None] - idx[None, :]) <= 1)
        ov &= ~adjacent
        a, b = np.nonzero(ov)
        if a.size == 0:
            continue
        a = ii[a]
        cross = r[a, 0] * r[b, 1] - r[a, 1] * r[b, 0]
        qp = p[b] - p[a]
        ok = np.abs(cross) > 1e-300
        t = np.where(ok, (qp[:, 0] * r[b, 1] - qp[:, 1] * r[b, 0]) / np.where(ok, cross, 1), -1)
        s = np.where(ok, (qp[:, 0] * r[a, 1] - qp[:, 1] * r[a, 0]) / np.where(ok, cross, 1), -1)
        good = ok & (t >= 0) & (t <= 1) & (s >= 0) & (s <= 1)
        hits.append(p[a[good]] + t[good, None] * r[a[good]])
    return np.vstack(hits) if hits else np.zeros((0, 2))


def _extent(chart: _Chart, box: Window, direction: int) -> float:
    """A parameter beyond which the branch stays outside ``box``."""
    u = float(direction)
    while abs(u) < 700:
        pts = chart.image(np.array([u, 2 * u]))
        if not box.contains(pts).any():
            return 2 * u
        u *= 2
    return u


def _refine(chart: _Chart, u0: float, u1: float, step: float, cusp_u: Sequence[tuple[float, float]],
            clip: Window, quality: Quality) -> tuple[np.ndarray, np.ndarray]:
    """Adaptive bisection of ``[u0, u1]`` until image steps are below ``step``."""
    us = list(np.linspace(u0, u1, 257))
    pts = list(chart.image(np.array(us)))
    out_u, out_p = [us[0]], [pts[0]]
    stack = [(us[i], pts[i], us[i + 1], pts[i + 1], 0) for i in range(len(us) - 2, -1, -1)]
    big = clip.padded(2.0)
    while stack:
        ua, pa, ub, pb, depth = stack.pop()
        tol = step
        if any(lo <= ub and ua <= hi for lo, hi in cusp_u):
            tol = step / quality.cusp_factor
        far = (max(pa[0], pb[0]) < big.xmin or min(pa[0], pb[0]) > big.xmax
               or max(pa[1], pb[1]) < big.ymin or min(pa[1], pb[1]) > big.ymax)
        if depth < quality.max_depth and not far and np.hypot(*(pb - pa)) > tol:
            um = 0.5 * (ua + ub)
            pm = chart.image(np.array([um]))[0]
            stack.append((um, pm, ub, pb, depth + 1))
            stack.append((ua, pa, um, pm, depth + 1))
            continue
        out_u.append(ub)
        out_p.append(pb)
    return np.array(out_u), np.array(out_p)


def _truncate(us: np.ndarray, pts: np.ndarray, clip: Window):
    inside = np.nonzero(clip.contains(pts))[0]
    if inside.size == 0:
        return us[:0], pts[:0]
    a = max(inside[0] - 1, 0)
    b = min(inside[-1] + 2, len(pts))
    return us[a:b], pts[a:b]


def sample_curve(gale: GaleDual, eps: Sequence[int], quality: Quality | None = None,
                 window: Window | None = None) -> DiscriminantCurve:
    """Adaptively sampled polylines of the curve, one per domain interval.

    Without an explicit window, the clipping window is the bounding box of
    the core of each branch, the critical-point images, the crossings of the
    asymptotes and the self-intersections, enlarged until it stops growing.
    """
    _require_k2(gale)
    quality = quality or Quality()
    domain = domain_intervals(gale, eps)
    if domain.empty:
        raise EmptyDomain("the parameter domain is empty; the curve is empty")
    crit = critical_points(gale, eps)
    charts = [_Chart(gale, iv) for iv in domain.intervals]
    crit_img = np.array([charts[c.interval].image(np.array([charts[c.interval].u_of(float(c))]))[0]
                         for c in crit]).reshape(-1, 2)
    cusp_u = [[] for _ in charts]
    for c in crit:
        ch = charts[c.interval]
        lo = max(float(c) - quality.cusp_radius, float(ch.iv.lo) if ch.iv.lo is not None else -np.inf)
        hi = min(float(c) + quality.cusp_radius, float(ch.iv.hi) if ch.iv.hi is not None else np.inf)
        eps_mu = 1e-15 * max(1.0, abs(float(c)))
        ua, ub = ch.u_of(lo + eps_mu), ch.u_of(hi - eps_mu)
        cusp_u[c.interval].append((min(ua, ub), max(ua, ub)))

    if window is None:
        core = [ch.image(np.linspace(-3, 3, 61)) for ch in charts]
        feats = np.vstack(core + [crit_img])
        rays = asymptotes(gale, domain)
        cross = _ray_crossings(rays)
        if cross:
            feats = np.vstack([feats, np.array(cross)])
        clip = Window.around(feats).padded(1.25)
        for _ in range(6):
            coarse = []
            for ch in charts:
                lo, hi = _extent(ch, clip, -1), _extent(ch, clip, 1)
                u, p = _refine(ch, lo, hi, clip.diagonal * 0.01, [], clip, quality)
                coarse.append(_truncate(u, p, clip.padded(1.5))[1])
            hits = segment_intersections(coarse)
            if hits.size == 0:
                break
            grown = Window.around(np.vstack([feats, hits])).padded(1.25)
            if (grown.xmin >= clip.xmin and grown.xmax <= clip.xmax
                    and grown.ymin >= clip.ymin and grown.ymax <= clip.ymax):
                break
            feats = np.vstack([feats, hits])
            clip = Window.around(feats).padded(1.25)
    else:
        clip = window

    polylines, params = [], []
    step = quality.step * clip.diagonal
    for ch, cu in zip(charts, cusp_u):
        lo, hi = _extent(ch, clip, -1), _extent(ch, clip, 1)
        u, p = _refine(ch, lo, hi, step, cu, clip, quality)
        u, p = _truncate(u, p, clip)
        if len(p):
            polylines.append(p)
            params.append(ch.mu(u))
    meta = {"sign_flipped": domain.flipped, "step": step, "quality_step": quality.step}
    return DiscriminantCurve(polylines, params, crit, crit_img, clip, domain, meta)
