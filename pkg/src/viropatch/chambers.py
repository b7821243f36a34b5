"""Chambers of the complement of a sampled discriminant curve.

The curve is rasterized onto a square grid and the complement is labelled by
4-connected flood fill. Regions touching the grid border are unbounded. A
region only counts when some cell is farther than two cells from the curve,
which discards slivers produced by rasterization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .discriminant import DiscriminantCurve, Window
from .errors import ResolutionTooCoarse

MIN_CLEARANCE = 2.0


@dataclass(frozen=True)
class Chamber:
    point: tuple[float, float]
    bounded: bool
    cells: int
    clearance: float


@dataclass(frozen=True)
class ChamberReport:
    total: int
    bounded: int
    chambers: tuple[Chamber, ...]
    resolution: int
    window: Window

    @property
    def unbounded(self) -> int:
        return self.total - self.bounded

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "bounded": self.bounded,
            "unbounded": self.unbounded,
            "resolution": self.resolution,
            "window": self.window.to_json(),
            "chambers": [{"point": list(c.point), "bounded": c.bounded} for c in self.chambers],
        }


def _extend_end(p0: np.ndarray, p1: np.ndarray, reach: float) -> np.ndarray:
    d = p1 - p0
    norm = np.hypot(*d)
    if norm == 0:
        return p1
    return p1 + d / norm * reach


def curve_with_rays(curve: DiscriminantCurve, window: Window) -> list[np.ndarray]:
    """Polylines with both end segments prolonged past the window boundary."""
    reach = 2 * window.diagonal
    out = []
    for pl in curve.polylines:
        if len(pl) < 2:
            continue
        head = _extend_end(pl[1], pl[0], reach)
        tail = _extend_end(pl[-2], pl[-1], reach)
        out.append(np.vstack([head, pl, tail]))
    return out


def rasterize(polylines, window: Window, resolution: int) -> np.ndarray:
    """Boolean wall mask; index ``[row, col]`` is ``(y, x)``."""
    wall = np.zeros((resolution, resolution), dtype=bool)
    sx = resolution / (window.xmax - window.xmin)
    sy = resolution / (window.ymax - window.ymin)
    for pl in polylines:
        g = np.column_stack([(pl[:, 0] - window.xmin) * sx, (pl[:, 1] - window.ymin) * sy])
        a, b = g[:-1], g[1:]
        # clip each segment to a slightly enlarged grid box (Liang-Barsky)
        lo, hi = -2.0, resolution + 2.0
        d = b - a
        t0 = np.zeros(len(a))
        t1 = np.ones(len(a))
        keep = np.ones(len(a), dtype=bool)
        for k in range(2):
            for p, q in ((-d[:, k], a[:, k] - lo), (d[:, k], hi - a[:, k])):
                zero = p == 0
                keep &= ~(zero & (q < 0))
                with np.errstate(divide="ignore", invalid="ignore"):
                    r = np.where(zero, 0.0, q / np.where(zero, 1.0, p))
                t0 = np.where(~zero & (p < 0), np.maximum(t0, r), t0)
                t1 = np.where(~zero & (p > 0), np.minimum(t1, r), t1)
        keep &= t0 <= t1
        a, b, d, t0, t1 = a[keep], b[keep], d[keep], t0[keep], t1[keep]
        s, e = a + d * t0[:, None], a + d * t1[:, None]
        length = np.hypot(*(e - s).T)
        counts = np.ceil(length / 0.5).astype(int) + 1
        seg = np.repeat(np.arange(len(s)), counts)
        offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        frac = offs / np.maximum(np.repeat(counts, counts) - 1, 1)
        pts = s[seg] + (e[seg] - s[seg]) * frac[:, None]
        ij = np.floor(pts).astype(int)
        ok = (ij[:, 0] >= 0) & (ij[:, 0] < resolution) & (ij[:, 1] >= 0) & (ij[:, 1] < resolution)
        wall[ij[ok, 1], ij[ok, 0]] = True
    return wall


def _count(curve: DiscriminantCurve, window: Window, resolution: int) -> ChamberReport:
    wall = rasterize(curve_with_rays(curve, window), window, resolution)
    labels, nlab = ndimage.label(~wall)
    dist = ndimage.distance_transform_edt(~wall)
    border = np.zeros_like(wall)
    border[0, :] = border[-1, :] = border[:, 0] = border[:, -1] = True
    touches = np.zeros(nlab + 1, dtype=bool)
    touches[np.unique(labels[border])] = True
    cx = (window.xmax - window.xmin) / resolution
    cy = (window.ymax - window.ymin) / resolution
    chambers = []
    best = ndimage.maximum(dist, labels, index=np.arange(1, nlab + 1))
    sizes = ndimage.sum(np.ones_like(dist), labels, index=np.arange(1, nlab + 1))
    centroids = ndimage.center_of_mass(np.ones_like(dist), labels, index=np.arange(1, nlab + 1))
    for lab in range(1, nlab + 1):
        clearance = float(best[lab - 1])
        if clearance <= MIN_CLEARANCE:
            continue
        r, c = (int(round(x)) for x in centroids[lab - 1])
        if not (0 <= r < resolution and 0 <= c < resolution
                and labels[r, c] == lab and dist[r, c] > MIN_CLEARANCE):
            mask = labels == lab
            flat = np.argmax(np.where(mask, dist, -1.0))
            r, c = np.unravel_index(flat, dist.shape)
        point = (window.xmin + (c + 0.5) * cx, window.ymin + (r + 0.5) * cy)
        chambers.append(Chamber(point, not touches[lab], int(sizes[lab - 1]), clearance))
    bounded = sum(1 for ch in chambers if ch.bounded)
    return ChamberReport(len(chambers), bounded, tuple(chambers), resolution, window)


def chamber_window(curve: DiscriminantCurve, padding: float = 1.5) -> Window:
    return Window.around(curve.samples()).padded(padding)


def chamber_count(curve: DiscriminantCurve, resolution: int = 1024, check: bool = True,
                  window: Window | None = None) -> ChamberReport:
    """Count chambers; with ``check`` the count must agree at twice the resolution."""
    if curve.empty:
        w = window or curve.window
        return ChamberReport(1, 0, (Chamber(((w.xmin + w.xmax) / 2, (w.ymin + w.ymax) / 2),
                                            False, resolution * resolution, float("inf")),),
                             resolution, w)
    window = window or chamber_window(curve)
    report = _count(curve, window, resolution)
    if check:
        fine = _count(curve, window, 2 * resolution)
        if (fine.total, fine.bounded) != (report.total, report.bounded):
            raise ResolutionTooCoarse(
                f"chamber count {report.total}/{report.bounded} at {resolution} but "
                f"{fine.total}/{fine.bounded} at {2 * resolution}")
    return report
