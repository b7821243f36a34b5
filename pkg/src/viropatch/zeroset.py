"""Floating point evaluation of exponential sums and planar zero sets.

``f_c(x) = sum_i c_i exp(alpha_i . x)``. Evaluation subtracts the largest
exponent before exponentiating, so large ``|x|`` does not overflow; the grid
routines work with the rescaled function ``f_c(x) exp(-max_i alpha_i . x)``,
which has the same zero set and signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .discriminant import Window, horn_kapranov
from .errors import InputError, ResolutionTooCoarse, SignMismatch
from .support import GaleDual, SignedSupport

ZERO_EIGENVALUE = 1e-8


@dataclass(frozen=True)
class EvalContext:
    support: SignedSupport
    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.support.count,):
            raise InputError(f"expected {self.support.count} coefficients, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise InputError("coefficients must be finite")
        if tuple(int(s) for s in np.sign(c)) != self.support.signs:
            raise SignMismatch("coefficient signs differ from the support's signs")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "_A", self.support.float_points())

    @classmethod
    def from_coefficients(cls, points: Sequence[Sequence], c: Sequence[float]) -> "EvalContext":
        signs = tuple(int(np.sign(v)) for v in c)
        return cls(SignedSupport.from_lists(points, signs), np.asarray(c, dtype=float))

    @property
    def A(self) -> np.ndarray:
        return self._A

    def evaluate(self, x: Sequence[float]) -> tuple[float, np.ndarray, np.ndarray]:
        """Value, gradient and Hessian of ``f_c`` at ``x``."""
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise InputError("evaluation point must be finite")
        e = self.A @ x
        shift = e.max()
        w = self.c * np.exp(e - shift)
        scale = np.exp(shift)
        value = w.sum() * scale
        grad = (w @ self.A) * scale
        hess = (self.A.T * w) @ self.A * scale
        return float(value), grad, hess

    def magnitude(self, x: Sequence[float]) -> float:
        """``sum |c_i| exp(alpha_i . x)``, the natural scale for relative residuals."""
        return float(np.abs(self.c) @ np.exp(self.A @ np.asarray(x, dtype=float)))

    def scaled_grid(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """``f_c exp(-max_i alpha_i . x)`` on a grid (n = 2 only)."""
        E = self.A[:, 0, None, None] * X + self.A[:, 1, None, None] * Y
        E -= E.max(axis=0)
        return np.tensordot(self.c, np.exp(E), axes=1)


# ---------------------------------------------------------------- singular zeros


@dataclass(frozen=True)
class SingularZeroReport:
    x: tuple[float, ...]
    c: tuple[float, ...]
    value: float
    gradient_norm: float
    residual: float
    hessian: np.ndarray
    eigenvalues: np.ndarray
    signature: tuple[int, int, int]

    def to_json(self) -> dict:
        return {
            "x": list(self.x),
            "c": list(self.c),
            "value": self.value,
            "gradient_norm": self.gradient_norm,
            "relative_residual": self.residual,
            "hessian": self.hessian.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "signature": {"positive": self.signature[0], "negative": self.signature[1],
                          "zero": self.signature[2]},
        }


def signature(eigenvalues: np.ndarray, threshold: float = ZERO_EIGENVALUE) -> tuple[int, int, int]:
    """Counts of positive, negative and zero eigenvalues relative to the spectral norm."""
    tol = threshold * max(float(np.max(np.abs(eigenvalues))), np.finfo(float).tiny)
    pos = int(np.sum(eigenvalues > tol))
    neg = int(np.sum(eigenvalues < -tol))
    return pos, neg, len(eigenvalues) - pos - neg


def singular_zero_report(ctx: EvalContext, x: Sequence[float]) -> SingularZeroReport:
    value, grad, hess = ctx.evaluate(x)
    eig = np.linalg.eigvalsh(hess)
    mag = ctx.magnitude(x)
    spread = max(1.0, float(np.abs(ctx.A).max()))
    residual = max(abs(value), float(np.linalg.norm(grad)) / spread) / mag
    return SingularZeroReport(tuple(float(v) for v in x), tuple(ctx.c.tolist()), value,
                              float(np.linalg.norm(grad)), residual, hess, eig, signature(eig))


def hessian_signature_at_constructed_singularity(gale: GaleDual, eps: Sequence[int],
                                                 lam: Sequence[float],
                                                 x: Sequence[float]) -> SingularZeroReport:
    """Build ``c`` with a singular zero at ``x`` from ``lam`` and report its Hessian."""
    c = horn_kapranov(gale, eps, lam, x)
    ctx = EvalContext(gale.support.with_signs(tuple(eps)), c)
    return singular_zero_report(ctx, x)


def degeneracy(hess: np.ndarray) -> float:
    """``|det H| / ||H||^n``; zero exactly when ``H`` is singular."""
    norm = np.linalg.norm(hess, 2)
    if norm == 0:
        return 0.0
    return float(abs(np.linalg.det(hess)) / norm ** hess.shape[0])


# ---------------------------------------------------------------- marching squares

# edges of a cell: 0 bottom, 1 right, 2 top, 3 left; corners 0..3 counter-clockwise
# from the bottom left. Cases index the corners with positive value.
_SEGMENTS = {
    0: (), 15: (),
    1: ((3, 0),), 14: ((3, 0),),
    2: ((0, 1),), 13: ((0, 1),),
    4: ((1, 2),), 11: ((1, 2),),
    8: ((2, 3),), 7: ((2, 3),),
    3: ((1, 3),), 12: ((1, 3),),
    6: ((0, 2),), 9: ((0, 2),),
}
# saddles: (centre positive, centre non-positive)
_SADDLES = {
    5: (((0, 1), (2, 3)), ((3, 0), (1, 2))),
    10: (((3, 0), (1, 2)), ((0, 1), (2, 3))),
}


@dataclass(frozen=True)
class ZeroSet:
    polylines: tuple[np.ndarray, ...]
    closed: tuple[bool, ...]
    bounded: tuple[bool, ...]
    window: Window
    resolution: int

    @property
    def components(self) -> int:
        return len(self.polylines)

    @property
    def bounded_components(self) -> int:
        return sum(self.bounded)

    @property
    def signature(self) -> tuple[int, int]:
        return self.components, self.bounded_components

    def to_json(self) -> dict:
        return {
            "components": self.components,
            "bounded": self.bounded_components,
            "unbounded": self.components - self.bounded_components,
            "window": self.window.to_json(),
            "resolution": self.resolution,
            "polylines": [{"points": len(p), "closed": c, "bounded": b}
                          for p, c, b in zip(self.polylines, self.closed, self.bounded)],
        }


def _extract(ctx: EvalContext, window: Window, resolution: int) -> ZeroSet:
    nx = ny = resolution
    xs = np.linspace(window.xmin, window.xmax, nx + 1)
    ys = np.linspace(window.ymin, window.ymax, ny + 1)
    X, Y = np.meshgrid(xs, ys)
    G = ctx.scaled_grid(X, Y)  # G[j, i] at (xs[i], ys[j])
    pos = G > 0

    # crossing points on horizontal edges (i, j)-(i+1, j) and vertical edges (i, j)-(i, j+1)
    def crossing(g0, g1, p0, p1):
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(g0 != g1, g0 / (g0 - g1), 0.5)
        return p0 + np.clip(t, 0.0, 1.0) * (p1 - p0)

    hx = crossing(G[:, :-1], G[:, 1:], X[:, :-1], X[:, 1:])
    hy = Y[:, :-1]
    vx = X[:-1, :]
    vy = crossing(G[:-1, :], G[1:, :], Y[:-1, :], Y[1:, :])
    nh = (ny + 1) * nx

    def hid(i, j):
        return j * nx + i

    def vid(i, j):
        return nh + j * (nx + 1) + i

    I, J = np.meshgrid(np.arange(nx), np.arange(ny))
    case = (pos[:-1, :-1].astype(int) | pos[:-1, 1:] << 1 | pos[1:, 1:] << 2 | pos[1:, :-1] << 3)
    edge_ids = np.stack([hid(I, J), vid(I + 1, J), hid(I, J + 1), vid(I, J)])
    active = (case != 0) & (case != 15)
    centre = np.zeros(case.shape, dtype=bool)
    saddle = (case == 5) | (case == 10)
    if saddle.any():
        sj, si = np.nonzero(saddle)
        cxs = (xs[si] + xs[si + 1]) / 2
        cys = (ys[sj] + ys[sj + 1]) / 2
        centre[sj, si] = ctx.scaled_grid(cxs, cys) > 0
    a_list, b_list = [], []
    for k in np.unique(case[active]):
        sel = case == k
        if k in _SADDLES:
            for flag, pairs in zip((True, False), _SADDLES[k]):
                m = sel & (centre == flag)
                for e0, e1 in pairs:
                    a_list.append(edge_ids[e0][m])
                    b_list.append(edge_ids[e1][m])
        else:
            for e0, e1 in _SEGMENTS[k]:
                a_list.append(edge_ids[e0][sel])
                b_list.append(edge_ids[e1][sel])
    if not a_list:
        return ZeroSet((), (), (), window, resolution)
    a = np.concatenate(a_list)
    b = np.concatenate(b_list)
    total = nh + ny * (nx + 1)
    points = np.empty((total, 2))
    points[:nh, 0], points[:nh, 1] = hx.ravel(), hy.ravel()
    points[nh:, 0], points[nh:, 1] = vx.ravel(), vy.ravel()
    hj, hi = np.divmod(np.arange(nh), nx)
    vj, vi = np.divmod(np.arange(total - nh), nx + 1)
    border = np.concatenate([(hj == 0) | (hj == ny), (vi == 0) | (vi == nx)])

    graph = coo_matrix((np.ones(len(a)), (a, b)), shape=(total, total))
    ncomp, labels = connected_components(graph, directed=False)
    used = np.unique(np.concatenate([a, b]))
    comps = np.unique(labels[used])
    adjacency: dict[int, list[int]] = {}
    for u, v in zip(a.tolist(), b.tolist()):
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)

    polylines, closed, bounded = [], [], []
    for comp in comps:
        nodes = used[labels[used] == comp]
        ends = [int(n) for n in nodes if len(adjacency[int(n)]) == 1]
        start = ends[0] if ends else int(nodes[0])
        path = [start]
        prev, cur = None, start
        while True:
            nxt = [n for n in adjacency[cur] if n != prev]
            if not nxt or (nxt[0] == start and prev is not None):
                break
            prev, cur = cur, nxt[0]
            path.append(cur)
            if len(path) > len(nodes) + 1:
                break
        is_closed = not ends
        if is_closed:
            path.append(start)
        polylines.append(points[path])
        closed.append(is_closed)
        bounded.append(not bool(border[nodes].any()))
    order = sorted(range(len(polylines)), key=lambda k: (polylines[k][0][0], polylines[k][0][1]))
    return ZeroSet(tuple(polylines[k] for k in order), tuple(closed[k] for k in order),
                   tuple(bounded[k] for k in order), window, resolution)


def zero_set_2d(ctx: EvalContext, window: Window | None = None, resolution: int = 512,
                check: bool = True, start: float = 4.0, max_doublings: int = 8) -> ZeroSet:
    """Zero set of ``f_c`` in the plane by marching squares.

    Without a window, ``[-w, w]^2`` starts at ``w = start`` and doubles until
    the component signature agrees across two consecutive doublings; the
    smallest window of that stable run is returned. With ``check`` the
    signature must survive doubling the resolution.
    """
    if ctx.support.n != 2:
        raise InputError("zero sets are extracted for n = 2 only")
    if window is None:
        w = start
        history = [_extract(ctx, Window(-w, w, -w, w), resolution)]
        for _ in range(max_doublings):
            w *= 2
            history.append(_extract(ctx, Window(-w, w, -w, w), resolution))
            if len(history) >= 3 and len({z.signature for z in history[-3:]}) == 1:
                break
        else:
            raise ResolutionTooCoarse("component count did not stabilize while enlarging the window")
        result = history[-3]
    else:
        result = _extract(ctx, window, resolution)
    if check:
        fine = _extract(ctx, result.window, 2 * resolution)
        if fine.signature != result.signature:
            raise ResolutionTooCoarse(
                f"zero set signature {result.signature} at {resolution} but "
                f"{fine.signature} at {2 * resolution}")
    return result
