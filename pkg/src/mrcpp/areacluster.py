"""Coverage with area clustering.

Cells (dual-graph vertices) are grouped greedily by a breadth-first search
that expands nearest neighbours first and admits a cell only while the
cluster stays under its size limit. Limits shrink the share of farther
clusters so that robots with long approach legs get less area. Each
cluster is then covered by its own postman tour.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .cpp import eulerianize, euler_tour
from .decomposition import DualGraph, ReebGraph
from .routesplit import RobotTour


def cluster_size(cells: Iterable[int], g: ReebGraph, dual: DualGraph) -> float:
    """Total area plus the travel distance from the start to the nearest member."""
    cells = list(cells)
    if not cells:
        raise ValueError("cluster_size of an empty cluster")
    sp = g.sp_t[g.start_vertex]
    return math.fsum(g.edges[c].w_c for c in cells) + min(float(sp[dual.anchors[c]]) for c in cells)


@dataclass
class LimitSchedule:
    """Iterative per-cluster size caps.

    ``travel`` holds each cell's distance from the start vertex to its
    leftmost critical vertex; ``order`` lists cells by decreasing distance.
    """

    k: int
    remaining: float
    travel: list[float]
    order: list[int]
    deduct_travel: bool = True
    limits: list[float] = field(default_factory=list)

    @property
    def opened(self) -> int:
        return len(self.limits)

    @property
    def exhausted(self) -> bool:
        return self.opened >= self.k or self.remaining <= 0

    def open(self, seed: int) -> float:
        h = self.opened + 1
        limit = self.travel[seed] + self.remaining / (self.k - h + 1)
        self.limits.append(limit)
        return limit

    def close(self, size: float, area: float) -> None:
        self.remaining -= size if self.deduct_travel else area


def compute_limits(dual: DualGraph, g: ReebGraph, k: int, deduct_travel: bool = True) -> LimitSchedule:
    if k < 1:
        raise ValueError("k must be at least 1")
    sp = g.sp_t[g.start_vertex]
    travel = [float(sp[a]) for a in dual.anchors]
    order = sorted(range(len(travel)), key=lambda c: (-travel[c], c))
    return LimitSchedule(k, g.total_coverage, travel, order, deduct_travel)


@dataclass(frozen=True)
class ClusterPlan:
    clusters: tuple[tuple[int, ...], ...]
    limits: tuple[float, ...]
    seeds: tuple[int, ...]
    tours: tuple[RobotTour, ...]


def cluster_cells(
    dual: DualGraph, g: ReebGraph, schedule: LimitSchedule
) -> tuple[list[list[int]], list[int]]:
    """Greedy limit-bounded BFS clustering; returns clusters and their seeds."""
    n = len(dual.positions)
    w_c = [g.edges[c].w_c for c in range(n)]
    travel = schedule.travel
    # bottom-to-top, then left-to-right; sorted() is stable so ids break ties
    scan = sorted(range(n), key=lambda c: (dual.positions[c].y, dual.positions[c].x))
    owner = [-1] * n
    clusters: list[list[int]] = []
    seeds: list[int] = []
    for seed in scan:
        if schedule.exhausted:
            break
        if owner[seed] >= 0:
            continue
        limit = schedule.open(seed)
        h = len(clusters)
        members = [seed]
        owner[seed] = h
        area, near = w_c[seed], travel[seed]
        queue = deque([seed])
        while queue:
            u = queue.popleft()
            for _, v in dual.sorted_neighbors(u):
                if owner[v] >= 0:
                    continue
                if area + w_c[v] + min(near, travel[v]) <= limit:
                    owner[v] = h
                    members.append(v)
                    area += w_c[v]
                    near = min(near, travel[v])
                    queue.append(v)
        clusters.append(members)
        seeds.append(seed)
        schedule.close(area + near, area)
    _absorb_leftovers(dual, owner, clusters)
    return [sorted(c) for c in clusters], seeds


def _absorb_leftovers(dual: DualGraph, owner: list[int], clusters: list[list[int]]) -> None:
    """Attach unclustered cells to the nearest adjacent cluster, one at a time."""
    while True:
        best = None
        for (a, b), w in dual.edges.items():
            for cell, other in ((a, b), (b, a)):
                if owner[cell] < 0 and owner[other] >= 0:
                    key = (w, cell, owner[other])
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, cell, h = best
        owner[cell] = h
        clusters[h].append(cell)
    if any(o < 0 for o in owner):  # only reachable with an empty clustering
        raise ValueError("dual graph is disconnected; cannot cluster every cell")


def per_cluster_ecc(cluster: Iterable[int], g: ReebGraph, robot: int = 0) -> RobotTour:
    """Postman tour of the cluster's cells, entered at the vertex nearest the start."""
    cluster = sorted(cluster)
    v1 = g.start_vertex
    if not cluster:
        return RobotTour(robot, v1, ())
    sp = g.sp_t
    verts = sorted({v for c in cluster for v in g.endpoints(c)})
    entry = min(verts, key=lambda v: (sp[v1, v], v))
    tour = euler_tour(eulerianize(g, cluster), entry)
    return RobotTour(robot, v1, tour.steps, float(sp[v1, entry]), float(sp[entry, v1]))


def cac(g: ReebGraph, dual: DualGraph, k: int, deduct_travel: bool = True) -> ClusterPlan:
    schedule = compute_limits(dual, g, k, deduct_travel)
    clusters, seeds = cluster_cells(dual, g, schedule)
    tours = [per_cluster_ecc(c, g, i) for i, c in enumerate(clusters)]
    tours += [RobotTour(i, g.start_vertex, ()) for i in range(len(tours), k)]
    return ClusterPlan(tuple(map(tuple, clusters)), tuple(schedule.limits), tuple(seeds), tuple(tours))
