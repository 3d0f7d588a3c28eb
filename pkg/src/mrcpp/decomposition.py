"""Boustrophedon cell decomposition with its Reeb and dual graphs.

The sweep line moves left to right over columns. Each column's free pixels
form maximal row intervals; intervals of neighbouring columns that share at
least one row are connected. A cell keeps growing while its interval has
exactly one overlapping successor which in turn has exactly one overlapping
predecessor. Every other overlap pattern (appear, vanish, split, merge) is a
connectivity change and becomes a critical vertex of the Reeb graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import graphs
from .gridmap import GeodesicError, GridMap, PixelPoint, free_components


class DisconnectedMapError(ValueError):
    """Free space has more than one 4-connected component."""


@dataclass(frozen=True)
class Cell:
    id: int
    x_left: int
    slices: tuple[tuple[int, int], ...]  # (y_top, y_bottom) per column, inclusive
    left_vertex: int
    right_vertex: int
    center: PixelPoint

    @property
    def x_right(self) -> int:
        return self.x_left + len(self.slices) - 1

    @property
    def columns(self) -> tuple[int, int]:
        return (self.x_left, self.x_right)

    @property
    def width(self) -> int:
        return len(self.slices)

    @property
    def area(self) -> int:
        return sum(b - t + 1 for t, b in self.slices)

    def pixels(self):
        for i, (t, b) in enumerate(self.slices):
            for y in range(t, b + 1):
                yield PixelPoint(self.x_left + i, y)

    def mask(self, shape) -> np.ndarray:
        m = np.zeros(shape, dtype=bool)
        for i, (t, b) in enumerate(self.slices):
            m[t:b + 1, self.x_left + i] = True
        return m


@dataclass(frozen=True)
class Decomposition:
    """Cells plus the Reeb skeleton (critical vertex positions)."""

    cells: tuple[Cell, ...]
    vertices: tuple[PixelPoint, ...]
    region: np.ndarray  # pixels actually decomposed
    excluded_area: int = 0

    @property
    def area(self) -> int:
        return int(self.region.sum())


@dataclass(frozen=True)
class ReebEdge:
    id: int
    u: int  # left critical vertex
    v: int  # right critical vertex
    w_c: float
    w_t: float
    c_e: float
    width: int
    area: int


@dataclass(frozen=True, eq=False)
class ReebGraph:
    vertices: tuple[PixelPoint, ...]
    edges: tuple[ReebEdge, ...]
    start_vertex: int

    @cached_property
    def adj(self) -> list[list[tuple[int, int]]]:
        return graphs.adjacency(len(self.vertices), ((e.id, e.u, e.v) for e in self.edges))

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def endpoints(self, eid: int) -> tuple[int, int]:
        e = self.edges[eid]
        return e.u, e.v

    @cached_property
    def sp_t(self) -> np.ndarray:
        """All-pairs shortest paths under traversal weights."""
        return graphs.all_pairs(self.adj, lambda e: self.edges[e].w_t)[0]

    @cached_property
    def sp_c(self) -> np.ndarray:
        """All-pairs shortest paths under coverage weights."""
        return graphs.all_pairs(self.adj, lambda e: self.edges[e].w_c)[0]

    def is_connected(self) -> bool:
        return graphs.is_connected(self.adj)

    @property
    def total_coverage(self) -> float:
        return sum(e.w_c for e in self.edges)


@dataclass(frozen=True)
class DualGraph:
    positions: tuple[PixelPoint, ...]  # cell centers
    anchors: tuple[int, ...]  # leftmost critical vertex per cell
    edges: dict = field(default_factory=dict)  # (i, j) with i < j -> w_d

    def neighbors(self, i: int) -> list[tuple[float, int]]:
        """Adjacent cells as (w_d, cell id), nearest first."""
        out = []
        for (a, b), w in self.edges.items():
            if a == i:
                out.append((w, b))
            elif b == i:
                out.append((w, a))
        out.sort()
        return out

    @cached_property
    def _nbr(self) -> list[list[tuple[float, int]]]:
        return [self.neighbors(i) for i in range(len(self.positions))]

    def sorted_neighbors(self, i: int) -> list[tuple[float, int]]:
        return self._nbr[i]


# ---------------------------------------------------------------- decompose

def _runs(col: np.ndarray) -> list[tuple[int, int]]:
    padded = np.concatenate(([False], col, [False]))
    diff = np.flatnonzero(padded[1:] != padded[:-1])
    return [(int(diff[i]), int(diff[i + 1]) - 1) for i in range(0, len(diff), 2)]


def _overlaps(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def _groups(left: list, right: list) -> list[tuple[list[int], list[int]]]:
    """Connected components of the interval-overlap relation, top to bottom."""
    parent = list(range(len(left) + len(right)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    j0 = 0
    for i, a in enumerate(left):
        while j0 < len(right) and right[j0][1] < a[0]:
            j0 += 1
        j = j0
        while j < len(right) and right[j][0] <= a[1]:
            ra, rb = find(i), find(len(left) + j)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
            j += 1
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for i in range(len(left)):
        groups.setdefault(find(i), ([], []))[0].append(i)
    for j in range(len(right)):
        groups.setdefault(find(len(left) + j), ([], []))[1].append(j)

    def top(g):
        rows = [left[i][0] for i in g[0]] + [right[j][0] for j in g[1]]
        return min(rows)

    return sorted(groups.values(), key=top)


def _clamp(v: int, lo: int, hi: int) -> int:
    return max(lo, min(hi, v))


def _event_position(x: int, left: list, right: list) -> PixelPoint:
    """Pixel for the critical vertex between columns ``x - 1`` and ``x``."""
    if not left:  # appear
        t, b = right[0]
        return PixelPoint(x, (t + b) // 2)
    if not right:  # vanish
        t, b = left[0]
        return PixelPoint(x - 1, (t + b) // 2)
    if len(left) == 1:  # split: sit in the single slice, mid-gap of the new ones
        gap = (right[0][1] + 1 + right[1][0] - 1) // 2
        t, b = left[0]
        return PixelPoint(x - 1, _clamp(gap, t, b))
    if len(right) == 1:  # merge
        gap = (left[0][1] + 1 + left[1][0] - 1) // 2
        t, b = right[0]
        return PixelPoint(x, _clamp(gap, t, b))
    # simultaneous merge and split; stay on the left side
    gap = (right[0][1] + 1 + right[1][0] - 1) // 2
    t, b = min(left, key=lambda s: (0 if s[0] <= gap <= s[1] else min(abs(gap - s[0]), abs(gap - s[1])), s[0]))
    return PixelPoint(x - 1, _clamp(gap, t, b))


def _snap_center(x_left: int, slices: list[tuple[int, int]]) -> PixelPoint:
    xs, ys, ws = [], [], []
    for i, (t, b) in enumerate(slices):
        n = b - t + 1
        xs.append((x_left + i) * n)
        ys.append((t + b) / 2.0 * n)
        ws.append(n)
    area = sum(ws)
    cx, cy = sum(xs) / area, sum(ys) / area
    best = None
    for i, (t, b) in enumerate(slices):
        x = x_left + i
        y = _clamp(int(round(cy)), t, b)
        for yy in {y, t, b}:
            key = ((x - cx) ** 2 + (yy - cy) ** 2, yy, x)
            if best is None or key < best:
                best = key
    return PixelPoint(best[2], best[1])


def decompose(grid: GridMap, largest_component: bool = False) -> Decomposition:
    """Sweep the free space and return cells with their critical vertices."""
    comps = free_components(grid)
    if len(comps) > 1 and not largest_component:
        raise DisconnectedMapError(f"free space has {len(comps)} disconnected components")
    region = comps[0]
    excluded = grid.free_count - int(region.sum())

    vertices: list[PixelPoint] = []
    open_cells: list[dict] = []  # aligned with previous column's intervals
    finished: list[dict] = []
    prev: list[tuple[int, int]] = []
    w = grid.width
    for x in range(w + 1):
        cur = _runs(region[:, x]) if x < w else []
        new_open: list[dict | None] = [None] * len(cur)
        for li, ri in _groups(prev, cur):
            if len(li) == 1 and len(ri) == 1:
                cell = open_cells[li[0]]
                cell["slices"].append(cur[ri[0]])
                new_open[ri[0]] = cell
                continue
            vid = len(vertices)
            vertices.append(_event_position(x, [prev[i] for i in li], [cur[j] for j in ri]))
            for i in li:
                open_cells[i]["right"] = vid
                finished.append(open_cells[i])
            for j in ri:
                cell = {"x_left": x, "slices": [cur[j]], "left": vid, "order": None}
                new_open[j] = cell
        # creation order for ids: column, then top row
        for j, cell in enumerate(new_open):
            if cell["order"] is None:
                cell["order"] = (x, cur[j][0])
        open_cells = new_open  # type: ignore[assignment]
        prev = cur

    finished.sort(key=lambda c: c["order"])
    cells = tuple(
        Cell(
            id=i,
            x_left=c["x_left"],
            slices=tuple(c["slices"]),
            left_vertex=c["left"],
            right_vertex=c["right"],
            center=_snap_center(c["x_left"], c["slices"]),
        )
        for i, c in enumerate(finished)
    )
    return Decomposition(cells, tuple(vertices), region, excluded)


# --------------------------------------------------------------- weighting

def assign_weights(decomp: Decomposition, grid: GridMap, start) -> ReebGraph:
    """Attach w_c, w_t, c_e to every cell edge and pick the start vertex."""
    sx, sy = int(start[0]), int(start[1])
    if not grid.in_bounds((sx, sy)) or grid.occupancy[sy, sx]:
        raise GeodesicError(f"start pixel {(sx, sy)} is not free")
    if not decomp.region[sy, sx]:
        raise GeodesicError(f"start pixel {(sx, sy)} is outside the covered component")
    res = grid.resolution
    edges = []
    for c in decomp.cells:
        a, b = decomp.vertices[c.left_vertex], decomp.vertices[c.right_vertex]
        dist, _ = grid.field(b)
        w_t = float(dist[a[1], a[0]])
        if math.isinf(w_t):
            raise GeodesicError(f"cell {c.id} endpoints are not mutually reachable")
        area = c.area
        edges.append(
            ReebEdge(
                id=c.id,
                u=c.left_vertex,
                v=c.right_vertex,
                w_c=area * res * res,
                w_t=w_t,
                c_e=c.width ** 2 / area,
                width=c.width,
                area=area,
            )
        )
    dist, _ = grid.field((sx, sy))
    start_vertex = min(range(len(decomp.vertices)), key=lambda v: (dist[decomp.vertices[v][1], decomp.vertices[v][0]], v))
    return ReebGraph(decomp.vertices, tuple(edges), start_vertex)


def build_dual(decomp: Decomposition, resolution: float = 1.0) -> DualGraph:
    """Cells as vertices; cells sharing a critical vertex are adjacent."""
    by_vertex: dict[int, list[int]] = {}
    for c in decomp.cells:
        by_vertex.setdefault(c.left_vertex, []).append(c.id)
        by_vertex.setdefault(c.right_vertex, []).append(c.id)
    edges: dict[tuple[int, int], float] = {}
    for members in by_vertex.values():
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                key = (min(a, b), max(a, b))
                if key not in edges:
                    pa, pb = decomp.cells[key[0]].center, decomp.cells[key[1]].center
                    edges[key] = math.hypot(pa.x - pb.x, pa.y - pb.y) * resolution
    edges = dict(sorted(edges.items()))
    return DualGraph(
        positions=tuple(c.center for c in decomp.cells),
        anchors=tuple(c.left_vertex for c in decomp.cells),
        edges=edges,
    )


def to_json(decomp: Decomposition, graph: ReebGraph | None, dual: DualGraph) -> dict:
    doc = {
        "cells": [
            {"id": c.id, "columns": list(c.columns), "area": c.area, "width": c.width, "center": list(c.center)}
            for c in decomp.cells
        ],
        "vertices": [{"id": i, "x": p.x, "y": p.y} for i, p in enumerate(decomp.vertices)],
        "dual_edges": [{"pair": list(k), "w_d": w} for k, w in dual.edges.items()],
        "excluded_area": decomp.excluded_area,
    }
    if graph is not None:
        doc["edges"] = [
            {"id": e.id, "endpoints": [e.u, e.v], "w_c": e.w_c, "w_t": e.w_t, "c_e": e.c_e} for e in graph.edges
        ]
        doc["start_vertex"] = graph.start_vertex
    else:
        doc["edges"] = [{"id": c.id, "endpoints": [c.left_vertex, c.right_vertex]} for c in decomp.cells]
    return doc
