"""Waypoint paths: lawnmower stripes inside cells and geodesic transit between them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from scipy import ndimage

from .decomposition import Cell, Decomposition, ReebGraph
from .gridmap import GridMap, PixelPoint, geodesic_path
from .routesplit import RobotTour

COVER = "cover"
TRANSIT = "transit"


class Waypoint(NamedTuple):
    x: int
    y: int
    kind: str


@dataclass(frozen=True)
class FootprintSpec:
    """Chebyshev-square footprint; ``radius`` is the half-width in pixels."""

    radius: float = 0.5

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("footprint radius must be positive")

    @property
    def reach(self) -> int:
        """Whole pixels covered on each side of the waypoint."""
        return int(math.floor(self.radius + 1e-9))

    @property
    def spacing(self) -> int:
        return max(1, min(int(math.floor(2 * self.radius + 1e-9)), 2 * self.reach + 1))


# ----------------------------------------------------------------- lawnmower

def _walk(cell: Cell, a: tuple[int, int], b: tuple[int, int]) -> list[tuple[int, int]]:
    """4-connected path from ``a`` to ``b`` that never leaves the cell (excludes ``a``)."""
    x, y = a
    out = []
    step = 1 if b[0] > x else -1
    while x != b[0]:
        t0, b0 = cell.slices[x - cell.x_left]
        t1, b1 = cell.slices[x + step - cell.x_left]
        target = min(max(y, max(t0, t1)), min(b0, b1))
        dy = 1 if target > y else -1
        while y != target:
            y += dy
            out.append((x, y))
        x += step
        out.append((x, y))
    dy = 1 if b[1] > y else -1
    while y != b[1]:
        y += dy
        out.append((x, y))
    return out


def _stripe_columns(cell: Cell, fp: FootprintSpec) -> list[int]:
    r = fp.reach
    c = min(cell.x_left + r, cell.x_right)
    cols = [c]
    while c + r < cell.x_right:
        c = max(min(c + fp.spacing, cell.x_right - r), c + 1)
        cols.append(c)
    return cols


@lru_cache(maxsize=4096)
def _lawnmower_cached(cell: Cell, radius: float, entry_side: str) -> tuple[Waypoint, ...]:
    fp = FootprintSpec(radius)
    r = fp.reach
    cols = _stripe_columns(cell, fp)
    if entry_side == "right":
        cols.reverse()
    targets: list[tuple[int, int]] = []
    for i, c in enumerate(cols):
        t, b = cell.slices[c - cell.x_left]
        rows = range(t, b + 1)
        above, below = [], []
        for x in range(max(c - r, cell.x_left), min(c + r, cell.x_right) + 1):
            tx, bx = cell.slices[x - cell.x_left]
            above += [(x, y) for y in range(tx, min(bx, t - r - 1) + 1)]
            below += [(x, y) for y in range(max(tx, b + r + 1), bx + 1)]
        above.sort(key=lambda p: (p[1], p[0]))
        below.sort(key=lambda p: (p[1], p[0]))
        stripe = above + [(c, y) for y in rows] + below
        if i % 2:
            stripe.reverse()
        targets += stripe
    path = [targets[0]]
    for p in targets[1:]:
        if p != path[-1]:
            path += _walk(cell, path[-1], p)
    return tuple(Waypoint(x, y, COVER) for x, y in path)


def lawnmower(cell: Cell, footprint: FootprintSpec = FootprintSpec(), entry_side: str = "left") -> list[Waypoint]:
    """Boustrophedon stripes over one cell, starting from ``entry_side``."""
    if entry_side not in ("left", "right"):
        raise ValueError("entry_side must be 'left' or 'right'")
    return list(_lawnmower_cached(cell, float(footprint.radius), entry_side))


# ------------------------------------------------------------------ assembly

@dataclass
class RobotPlan:
    id: int
    idle: bool
    coverage_cost: float
    travel_cost: float
    total_cost: float
    cells: list[int]
    waypoints: list[Waypoint]
    cover_length: float = 0.0
    transit_length: float = 0.0


@dataclass
class CoveragePlan:
    robots: list[RobotPlan]
    start: PixelPoint
    footprint: FootprintSpec = field(default_factory=FootprintSpec)

    @property
    def k(self) -> int:
        return len(self.robots)


def _path_lengths(wps: Sequence[Waypoint], resolution: float) -> tuple[float, float]:
    cover = transit = 0.0
    for a, b in zip(wps, wps[1:]):
        dx, dy = abs(a.x - b.x), abs(a.y - b.y)
        step = 0.0 if dx == dy == 0 else (math.sqrt(2.0) if dx and dy else 1.0)
        if b.kind == COVER:
            cover += step * resolution
        else:
            transit += step * resolution
    return cover, transit


def _transit(grid: GridMap, frm, to) -> list[Waypoint]:
    if tuple(frm) == tuple(to):
        return []
    return [Waypoint(p.x, p.y, TRANSIT) for p in geodesic_path(grid, frm, to)[1:]]


def robot_waypoints(
    robot: RobotTour, g: ReebGraph, decomp: Decomposition, grid: GridMap, footprint: FootprintSpec, start
) -> list[Waypoint]:
    if robot.idle:
        return []
    start = PixelPoint(int(start[0]), int(start[1]))
    wps = [Waypoint(start.x, start.y, TRANSIT)]
    pos = start
    for s in robot.steps:
        if s.duplicate:
            wps += _transit(grid, pos, g.vertices[s.head])
            pos = g.vertices[s.head]
            continue
        cell = decomp.cells[s.edge]
        side = "left" if s.tail == cell.left_vertex else "right"
        stripes = lawnmower(cell, footprint, side)
        wps += _transit(grid, pos, stripes[0][:2])
        if wps[-1][:2] == stripes[0][:2]:
            wps.pop()
        wps += stripes
        pos = PixelPoint(stripes[-1].x, stripes[-1].y)
    wps += _transit(grid, pos, start)
    return wps


def assemble_plan(
    robots: Sequence[RobotTour],
    g: ReebGraph,
    decomp: Decomposition,
    grid: GridMap,
    footprint: FootprintSpec = FootprintSpec(),
    start=None,
) -> CoveragePlan:
    """Expand robot tours into waypoint paths that start and end at ``start``."""
    if start is None:
        start = g.vertices[g.start_vertex]
    out = []
    for r in robots:
        wps = robot_waypoints(r, g, decomp, grid, footprint, start)
        cover, transit = _path_lengths(wps, grid.resolution)
        out.append(
            RobotPlan(
                id=r.robot,
                idle=r.idle,
                coverage_cost=r.coverage_cost,
                travel_cost=r.travel_cost,
                total_cost=r.total_cost,
                cells=r.cells,
                waypoints=wps,
                cover_length=cover,
                transit_length=transit,
            )
        )
    return CoveragePlan(out, PixelPoint(int(start[0]), int(start[1])), footprint)


# -------------------------------------------------------------- verification

@dataclass(frozen=True)
class CoverageReport:
    covered: int
    missed: int
    overlap: int
    free: int


def swath_mask(waypoints: Sequence, shape, footprint: FootprintSpec) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    pts = [(w[0], w[1]) for w in waypoints if (w[2] if len(w) > 2 else COVER) == COVER]
    if not pts:
        return mask
    xs, ys = np.array(pts).T
    mask[ys, xs] = True
    r = footprint.reach
    if r:
        mask = ndimage.binary_dilation(mask, structure=np.ones((2 * r + 1, 2 * r + 1), dtype=bool))
    return mask


def verify_coverage(plan: CoveragePlan, grid: GridMap, region: np.ndarray | None = None) -> CoverageReport:
    """Rasterize cover swaths; count missed free pixels and multi-robot overlap."""
    free = ~grid.occupancy if region is None else (region & ~grid.occupancy)
    hits = np.zeros(grid.occupancy.shape, dtype=np.int32)
    for r in plan.robots:
        hits += swath_mask(r.waypoints, grid.occupancy.shape, plan.footprint)
    covered = int(((hits > 0) & free).sum())
    return CoverageReport(
        covered=covered,
        missed=int(free.sum()) - covered,
        overlap=int(((hits > 1) & free).sum()),
        free=int(free.sum()),
    )


def check_continuity(waypoints: Sequence[Waypoint]) -> bool:
    return all(max(abs(a.x - b.x), abs(a.y - b.y)) <= 1 for a, b in zip(waypoints, waypoints[1:]))
