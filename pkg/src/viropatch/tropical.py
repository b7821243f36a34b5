"""Regular subdivisions, tropical curves and their signed parts (n = 2).

Upper faces of the lifted point configuration are found by brute force over
point triples; everything is exact. The tropical curve uses the max
convention: the vertex dual to a cell ``F`` is the point ``v_F`` where
``max_i(v . alpha_i + h_i)`` is attained on ``F``.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionTooLarge, InputError, NonGenericLifting, NotFullDimensional
from .rational import fmt, parse_vector, solve
from .support import SignedSupport

Vec = tuple[Fraction, Fraction]


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Vec], idx: Sequence[int]) -> list[int]:
    """Indices of the hull vertices in counterclockwise order (no collinear points)."""
    order = sorted(set(idx), key=lambda i: points[i])
    if len(order) <= 2:
        return order
    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and _cross(points[lower[-2]], points[lower[-1]], points[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and _cross(points[upper[-2]], points[upper[-1]], points[i]) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def polygon_area(points: Sequence[Vec], ring: Sequence[int]) -> Fraction:
    s = Fraction(0)
    for a, b in zip(ring, list(ring[1:]) + [ring[0]]):
        s += points[a][0] * points[b][1] - points[b][0] * points[a][1]
    return s / 2


def _on_segment(p, a, b) -> bool:
    return (_cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


@dataclass(frozen=True)
class Lifting:
    h: tuple[Fraction, ...]

    @classmethod
    def parse(cls, text: str | Sequence) -> "Lifting":
        vals = text.split(",") if isinstance(text, str) else text
        return cls(parse_vector(vals))


@dataclass(frozen=True)
class Cell:
    points: tuple[int, ...]
    ring: tuple[int, ...]
    dual: Vec
    height: Fraction


@dataclass(frozen=True)
class Edge:
    ends: tuple[int, int]
    points: tuple[int, ...]
    cells: tuple[int, ...]

    @property
    def interior(self) -> bool:
        return len(self.cells) == 2


@dataclass(frozen=True)
class RegularSubdivision:
    support: SignedSupport
    h: tuple[Fraction, ...]
    cells: tuple[Cell, ...]
    edges: tuple[Edge, ...]
    vertices: tuple[int, ...]
    generic: bool

    @property
    def triangles(self) -> int:
        return sum(1 for c in self.cells if len(c.ring) == 3)

    def to_json(self) -> dict:
        return {
            "generic": self.generic,
            "cells": [{"points": list(c.points), "dual": [fmt(x) for x in c.dual]} for c in self.cells],
            "edges": [{"ends": list(e.ends), "interior": e.interior} for e in self.edges],
            "vertices": list(self.vertices),
            "counts": {"cells": len(self.cells), "edges": len(self.edges),
                       "vertices": len(self.vertices)},
        }


def _check_support(support: SignedSupport, h: Sequence) -> tuple[Fraction, ...]:
    if support.n != 2:
        raise DimensionTooLarge("tropical constructions are implemented for n = 2")
    if not support.full_dimensional:
        raise NotFullDimensional("support is not full-dimensional")
    h = parse_vector(h.h if isinstance(h, Lifting) else h)
    if len(h) != support.count:
        raise InputError(f"lifting has {len(h)} entries, support has {support.count} points")
    return h


def regular_subdivision(support: SignedSupport, h) -> RegularSubdivision:
    """Cells are the projections of the upper faces of ``{(alpha_i, h_i)}``."""
    h = _check_support(support, h)
    pts = support.points
    faces: dict[frozenset, tuple[Vec, Fraction]] = {}
    for tri in itertools.combinations(range(support.count), 3):
        a, b, c = (pts[i] for i in tri)
        if _cross(a, b, c) == 0:
            continue
        # plane h = p . alpha + q through the three lifted points
        M = [[pts[i][0], pts[i][1], Fraction(1)] for i in tri]
        p1, p2, q = solve(M, [h[i] for i in tri])
        gaps = [p1 * x + p2 * y + q - hi for (x, y), hi in zip(pts, h)]
        if any(g < 0 for g in gaps):
            continue
        on = frozenset(i for i, g in enumerate(gaps) if g == 0)
        faces.setdefault(on, ((-p1, -p2), q))
    cells = []
    for on, (dual, q) in sorted(faces.items(), key=lambda kv: sorted(kv[0])):
        ring = convex_hull(pts, sorted(on))
        cells.append(Cell(tuple(sorted(on)), tuple(ring), dual, q))
    edge_map: dict[frozenset, list[int]] = {}
    for ci, cell in enumerate(cells):
        ring = list(cell.ring)
        for a, b in zip(ring, ring[1:] + ring[:1]):
            edge_map.setdefault(frozenset((a, b)), []).append(ci)
    edges = []
    for key, owners in sorted(edge_map.items(), key=lambda kv: sorted(kv[0])):
        a, b = sorted(key)
        on = tuple(i for i in cells[owners[0]].points if _on_segment(pts[i], pts[a], pts[b]))
        edges.append(Edge((a, b), on, tuple(owners)))
    vertices = sorted({i for c in cells for i in c.ring})
    generic = all(len(c.points) == 3 for c in cells)
    return RegularSubdivision(support, h, tuple(cells), tuple(edges), tuple(vertices), generic)


@dataclass(frozen=True)
class TropicalEdge:
    """A bounded edge (``cells`` of length 2) or a ray (length 1, with ``direction``)."""

    pair: tuple[int, int]
    cells: tuple[int, ...]
    direction: Vec | None
    signed: bool

    @property
    def bounded(self) -> bool:
        return len(self.cells) == 2


@dataclass(frozen=True)
class TropicalCurve:
    subdivision: RegularSubdivision
    vertices: tuple[Vec, ...]
    edges: tuple[TropicalEdge, ...]
    signed_vertices: tuple[int, ...]

    @property
    def bounded_edges(self) -> list[TropicalEdge]:
        return [e for e in self.edges if e.bounded]

    @property
    def rays(self) -> list[TropicalEdge]:
        return [e for e in self.edges if not e.bounded]

    def signed_edges(self) -> list[TropicalEdge]:
        return [e for e in self.edges if e.signed]

    def components(self) -> list[tuple[list[TropicalEdge], bool]]:
        """Connected components of the signed curve as (edges, bounded)."""
        signed = self.signed_edges()
        parent = list(range(len(signed)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        by_vertex: dict[int, list[int]] = {}
        for k, e in enumerate(signed):
            for c in e.cells:
                by_vertex.setdefault(c, []).append(k)
        for ks in by_vertex.values():
            for k in ks[1:]:
                parent[find(k)] = find(ks[0])
        groups: dict[int, list[TropicalEdge]] = {}
        for k, e in enumerate(signed):
            groups.setdefault(find(k), []).append(e)
        return [(g, all(e.bounded for e in g)) for g in groups.values()]

    def signature(self) -> tuple[int, int]:
        comps = self.components()
        return len(comps), sum(1 for _, b in comps if b)

    def to_json(self) -> dict:
        comps = self.components()
        return {
            "vertices": [[fmt(x) for x in v] for v in self.vertices],
            "edges": [{"pair": list(e.pair), "cells": list(e.cells),
                       "direction": None if e.direction is None else [fmt(x) for x in e.direction],
                       "signed": e.signed} for e in self.edges],
            "counts": {"vertices": len(self.vertices), "edges": len(self.edges),
                       "bounded_edges": len(self.bounded_edges), "rays": len(self.rays)},
            "signed": {"edges": len(self.signed_edges()), "components": len(comps),
                       "bounded_components": sum(1 for _, b in comps if b)},
        }


def tropical_curve(support: SignedSupport, h) -> TropicalCurve:
    """Dual graph of a generic regular triangulation, with signs marked."""
    sub = h if isinstance(h, RegularSubdivision) else regular_subdivision(support, h)
    if not sub.generic:
        raise NonGenericLifting("an upper face contains more than three lifted points")
    pts, eps = support.points, support.signs
    edges = []
    for e in sub.edges:
        a, b = e.ends
        signed = eps[a] != eps[b]
        if e.interior:
            edges.append(TropicalEdge((a, b), e.cells, None, signed))
            continue
        cell = sub.cells[e.cells[0]]
        ring = list(cell.ring)
        k = ring.index(a)
        s, t = (a, b) if ring[(k + 1) % len(ring)] == b else (b, a)
        dx, dy = pts[t][0] - pts[s][0], pts[t][1] - pts[s][1]
        # counterclockwise ring, so (dy, -dx) points out of the cell
        edges.append(TropicalEdge((a, b), e.cells, (dy, -dx), signed))
    signed_vertices = tuple(ci for ci, c in enumerate(sub.cells)
                            if len({eps[i] for i in c.points}) == 2)
    return TropicalCurve(sub, tuple(c.dual for c in sub.cells), tuple(edges), signed_vertices)


def signed_tropical_curve(support: SignedSupport, h) -> TropicalCurve:
    """The tropical curve; its signed part is exposed by ``signed_edges`` and
    ``components``."""
    return tropical_curve(support, h)


def tropical_max(support: SignedSupport, h: Sequence[Fraction], v: Vec) -> tuple[Fraction, set[int]]:
    vals = [v[0] * p[0] + v[1] * p[1] + hi for p, hi in zip(support.points, h)]
    m = max(vals)
    return m, {i for i, x in enumerate(vals) if x == m}


def edge_witness(curve: TropicalCurve, edge: TropicalEdge) -> Vec:
    """A point in the relative interior of the edge: midpoint, or one step along a ray."""
    v = curve.vertices[edge.cells[0]]
    if edge.bounded:
        w = curve.vertices[edge.cells[1]]
        return ((v[0] + w[0]) / 2, (v[1] + w[1]) / 2)
    return (v[0] + edge.direction[0], v[1] + edge.direction[1])


def random_lifting(rng: random.Random, count: int, denominator: int = 10**6) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randrange(denominator), denominator) for _ in range(count))


@dataclass(frozen=True)
class PatchworkReport:
    signatures: Counter
    generic: int
    skipped: int
    structured: dict

    @property
    def distinct(self) -> list[tuple[int, int]]:
        return sorted(self.signatures)

    @property
    def any_bounded(self) -> bool:
        return any(b > 0 for _, b in self.signatures)

    def to_json(self) -> dict:
        return {
            "signatures": [{"components": c, "bounded": b, "count": n}
                           for (c, b), n in sorted(self.signatures.items())],
            "generic_liftings": self.generic,
            "skipped_nongeneric": self.skipped,
            "structured": self.structured,
        }


def structured_liftings(support: SignedSupport, rng: random.Random) -> list[tuple[str, tuple]]:
    """A lifting with the last height strictly maximal, and its negative."""
    base = list(random_lifting(rng, support.count))
    base[-1] = Fraction(2)
    h = tuple(base)
    return [("h_last_max", h), ("negated", tuple(-x for x in h))]


def patchwork_report(support: SignedSupport, sweep: int = 500, seed: int = 0) -> PatchworkReport:
    """Signed tropical curve signatures (components, bounded components) over liftings."""
    if support.n != 2:
        raise DimensionTooLarge("patchworking sweep is implemented for n = 2")
    rng = random.Random(seed)
    sigs: Counter = Counter()
    skipped = 0
    for _ in range(sweep):
        sub = regular_subdivision(support, random_lifting(rng, support.count))
        if not sub.generic:
            skipped += 1
            continue
        sigs[tropical_curve(support, sub).signature()] += 1
    structured = {}
    for name, h in structured_liftings(support, rng):
        sub = regular_subdivision(support, h)
        if not sub.generic:
            structured[name] = None
            continue
        comps, bounded = tropical_curve(support, sub).signature()
        sigs[(comps, bounded)] += 1
        structured[name] = {"h": [fmt(x) for x in h], "components": comps, "bounded": bounded}
    return PatchworkReport(sigs, sum(sigs.values()), skipped, structured)


def lattice_length(d: Sequence[Fraction]) -> int:
    """Lattice length of an integer vector."""
    if any(x.denominator != 1 for x in d):
        raise InputError("lattice length needs integer coordinates")
    return math.gcd(int(d[0]), int(d[1]))


def primitive(d: Sequence[Fraction]) -> tuple[int, int]:
    """Primitive integer vector positively proportional to a rational vector."""
    den = math.lcm(d[0].denominator, d[1].denominator)
    x, y = int(d[0] * den), int(d[1] * den)
    g = math.gcd(x, y)
    return x // g, y // g
