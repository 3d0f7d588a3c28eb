"""Splitting one Euler tour into k robot missions.

Three modes share the same tour and differ in how boundaries are placed:

* ``crc``  - Frederickson-Hecht-Kim split with s_max and rounding under sp_t
* ``fhk``  - the same split planned with a single (coverage) cost: s_max and
  boundary rounding use sp_c
* ``nrc``  - greedy slices whose coverage cost first reaches C/k

Depot legs of the resulting missions are always reported as physical travel
(sp_t), so the three modes are measured in one cost model.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from itertools import accumulate

import numpy as np

from .cpp import EulerTour, Step
from .decomposition import ReebGraph

MODES = ("crc", "fhk", "nrc")


@dataclass(frozen=True)
class RobotTour:
    robot: int
    home: int  # start vertex
    steps: tuple[Step, ...]
    approach_cost: float = 0.0
    retreat_cost: float = 0.0
    span: tuple[int, int] | None = None  # [a, b) positions in the parent tour, if any

    @property
    def entry(self) -> int:
        return self.steps[0].tail if self.steps else self.home

    @property
    def exit(self) -> int:
        return self.steps[-1].head if self.steps else self.home

    @property
    def cells(self) -> list[int]:
        return [s.edge for s in self.steps if not s.duplicate]

    @property
    def coverage_cost(self) -> float:
        return math.fsum(s.cost for s in self.steps if not s.duplicate)

    @property
    def travel_cost(self) -> float:
        return math.fsum([self.approach_cost, self.retreat_cost] + [s.cost for s in self.steps if s.duplicate])

    @property
    def total_cost(self) -> float:
        # one exact sum, so a whole-tour mission reproduces the tour cost bit for bit
        return math.fsum([self.approach_cost, self.retreat_cost] + [s.cost for s in self.steps])

    @property
    def idle(self) -> bool:
        return not any(not s.duplicate for s in self.steps)


@dataclass(frozen=True)
class SplitReport:
    mode: str
    s_max: float
    boundaries: tuple[int, ...]  # k-1 non-decreasing step positions


def _metric(g: ReebGraph, mode: str) -> np.ndarray:
    if mode not in MODES:
        raise ValueError(f"unknown split mode {mode!r}")
    return g.sp_c if mode == "fhk" else g.sp_t


def compute_s_max(tour: EulerTour, g: ReebGraph, mode: str = "crc") -> float:
    """Cost of the most expensive depot -> single edge -> depot mission."""
    d = _metric(g, mode)
    v1 = tour.start
    best = 0.0
    for s in tour.steps:
        # a transit step can cost more than covering a very thin cell
        c = max(g.edges[s.edge].w_c, s.cost)
        best = max(best, d[v1, s.tail] + c + d[s.head, v1])
    return float(best)


def fhk_bound(total: float, s_max: float, k: int) -> float:
    return total / k + (1.0 - 1.0 / k) * s_max


def _prefix(tour: EulerTour) -> list[float]:
    return [0.0] + list(accumulate(s.cost for s in tour.steps))


def robots_from_boundaries(tour: EulerTour, g: ReebGraph, boundaries, d: np.ndarray) -> list[RobotTour]:
    cuts = [0] + list(boundaries) + [len(tour.steps)]
    v1 = tour.start
    robots = []
    for r in range(len(cuts) - 1):
        a, b = cuts[r], cuts[r + 1]
        steps = tour.steps[a:b]
        if not steps:
            robots.append(RobotTour(r, v1, (), span=(a, b)))
            continue
        robots.append(
            RobotTour(
                r,
                v1,
                steps,
                approach_cost=float(d[v1, steps[0].tail]),
                retreat_cost=float(d[steps[-1].head, v1]),
                span=(a, b),
            )
        )
    return robots


def split_frederickson(tour: EulerTour, g: ReebGraph, k: int, mode: str = "crc") -> tuple[list[RobotTour], SplitReport]:
    """Frederickson-Hecht-Kim tour splitting.

    Boundary j targets prefix length ``(j/k)(C - s_max) + s_max/2``. The
    edge straddling that target goes to the earlier robot only when the
    following robot's approach plus the overshoot stays within s_max/2;
    this rounding keeps every mission below ``C/k + (1 - 1/k) s_max``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if mode == "nrc":
        raise ValueError("use split_naive for nrc")
    d = _metric(g, mode)
    s = compute_s_max(tour, g, mode)
    m = len(tour.steps)
    L = _prefix(tour)
    C = L[-1]
    v1 = tour.start
    boundaries: list[int] = []
    if k > 1 and m > 0 and C > s:
        for j in range(1, k):
            target = j / k * (C - s) + s / 2
            p = bisect.bisect_right(L, target) - 1
            if p < m:
                overshoot = target - L[p]
                if d[v1, tour.vertex(p)] + overshoot > s / 2:
                    p += 1
            if boundaries and p < boundaries[-1]:
                p = boundaries[-1]
            boundaries.append(p)
    else:
        boundaries = [m] * (k - 1)
    robots = robots_from_boundaries(tour, g, boundaries, g.sp_t)
    return robots, SplitReport(mode, s, tuple(boundaries))


def split_naive(tour: EulerTour, g: ReebGraph, k: int) -> tuple[list[RobotTour], SplitReport]:
    """Cut the tour greedily: a segment closes once its coverage cost reaches C/k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    C = tour.total_cost
    m = len(tour.steps)
    quota = C / k
    eps = 1e-9 * max(C, 1.0)
    boundaries: list[int] = []
    covered = 0.0
    for p, s in enumerate(tour.steps, start=1):
        if len(boundaries) == k - 1:
            break
        if not s.duplicate:
            covered += s.cost
        if covered >= quota - eps:
            boundaries.append(p)
            covered = 0.0
    boundaries += [m] * (k - 1 - len(boundaries))
    robots = robots_from_boundaries(tour, g, boundaries, g.sp_t)
    return robots, SplitReport("nrc", compute_s_max(tour, g, "nrc"), tuple(boundaries))


def split(tour: EulerTour, g: ReebGraph, k: int, mode: str) -> tuple[list[RobotTour], SplitReport]:
    if mode == "nrc":
        return split_naive(tour, g, k)
    return split_frederickson(tour, g, k, mode)
