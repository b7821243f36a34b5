"""Minimal deterministic SVG writer.

The viewport is 800 by 800 pixels with a 40 pixel margin. A data point
``(x, y)`` in the window ``[xmin, xmax] x [ymin, ymax]`` maps to
``px = 40 + 720 (x - xmin) / (xmax - xmin)`` and
``py = 760 - 720 (y - ymin) / (ymax - ymin)``, so ``y`` grows upwards.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

SIZE = 800
MARGIN = 40


class Canvas:
    def __init__(self, xmin: float, xmax: float, ymin: float, ymax: float, title: str = ""):
        if xmax <= xmin or ymax <= ymin:
            raise ValueError("degenerate window")
        self.window = (float(xmin), float(xmax), float(ymin), float(ymax))
        self.items: list[str] = []
        self.title = title

    def map(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        xmin, xmax, ymin, ymax = self.window
        span = SIZE - 2 * MARGIN
        px = MARGIN + span * (pts[:, 0] - xmin) / (xmax - xmin)
        py = SIZE - MARGIN - span * (pts[:, 1] - ymin) / (ymax - ymin)
        return np.column_stack([px, py])

    @staticmethod
    def _coords(pts: np.ndarray) -> str:
        return " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)

    def polyline(self, pts: Sequence, stroke: str = "black", width: float = 1.5,
                 closed: bool = False) -> None:
        pts = np.asarray(pts, dtype=float)
        if len(pts) < 2:
            return
        tag = "polygon" if closed else "polyline"
        self.items.append(f'<{tag} points="{self._coords(self.map(pts))}" fill="none" '
                          f'stroke="{stroke}" stroke-width="{width}"/>')

    def polygon(self, pts: Sequence, fill: str, stroke: str = "none", opacity: float = 1.0) -> None:
        self.items.append(f'<polygon points="{self._coords(self.map(pts))}" fill="{fill}" '
                          f'fill-opacity="{opacity}" stroke="{stroke}"/>')

    def segment(self, p, q, stroke: str = "black", width: float = 1.5) -> None:
        (x1, y1), (x2, y2) = self.map([p, q])
        self.items.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                          f'stroke="{stroke}" stroke-width="{width}"/>')

    def circle(self, p, r: float = 4.0, fill: str = "black", stroke: str = "none") -> None:
        ((x, y),) = self.map([p])
        self.items.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r}" fill="{fill}" stroke="{stroke}"/>')

    def cells(self, mask: np.ndarray, xs: np.ndarray, ys: np.ndarray, fill: str) -> None:
        """Filled rectangles for ``mask[j, i]`` centred at ``(xs[i], ys[j])``.

        Consecutive cells of a row are merged into one rectangle.
        """
        dx = (xs[1] - xs[0]) if len(xs) > 1 else 1.0
        dy = (ys[1] - ys[0]) if len(ys) > 1 else 1.0
        for j in range(mask.shape[0]):
            row = np.concatenate([[False], mask[j], [False]])
            starts = np.nonzero(row[1:] & ~row[:-1])[0]
            stops = np.nonzero(~row[1:] & row[:-1])[0]
            for a, b in zip(starts, stops):
                (x0, y0), (x1, y1) = self.map([(xs[a] - dx / 2, ys[j] + dy / 2),
                                               (xs[b - 1] + dx / 2, ys[j] - dy / 2)])
                self.items.append(f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" '
                                  f'height="{y1 - y0:.2f}" fill="{fill}"/>')

    def axes(self) -> None:
        xmin, xmax, ymin, ymax = self.window
        if xmin < 0 < xmax:
            self.segment((0, ymin), (0, ymax), stroke="#bbbbbb", width=0.75)
        if ymin < 0 < ymax:
            self.segment((xmin, 0), (xmax, 0), stroke="#bbbbbb", width=0.75)

    def render(self) -> str:
        xmin, xmax, ymin, ymax = self.window
        head = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
                f'viewBox="0 0 {SIZE} {SIZE}">',
                f'<desc>window x [{xmin:.6g}, {xmax:.6g}] y [{ymin:.6g}, {ymax:.6g}]</desc>',
                f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>']
        if self.title:
            head.append(f'<text x="{MARGIN}" y="{MARGIN - 12}" font-size="14">{self.title}</text>')
        return "\n".join(head + self.items + ["</svg>"]) + "\n"


def window_of(points: Iterable, pad: float = 0.1) -> tuple[float, float, float, float]:
    """Square-ish bounding window with relative padding."""
    pts = np.vstack([np.atleast_2d(np.asarray(p, dtype=float)) for p in points])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = np.maximum(hi - lo, 1.0)
    lo, hi = lo - pad * span, hi + pad * span
    return float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1])
