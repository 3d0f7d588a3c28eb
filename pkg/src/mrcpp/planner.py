"""End-to-end pipelines: map -> cells -> Reeb graph -> k robot plans."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .areacluster import ClusterPlan, cac
from .cpp import EulerMultigraph, EulerTour, ecc
from .decomposition import Decomposition, DualGraph, ReebGraph, assign_weights, build_dual, decompose
from .gridmap import GridMap, PixelPoint
from .pathgen import CoveragePlan, CoverageReport, FootprintSpec, RobotPlan, Waypoint, assemble_plan, verify_coverage
from .routesplit import RobotTour, SplitReport, split

ALGORITHMS = ("crc", "cac", "nrc", "fhk")


@dataclass(frozen=True, eq=False)
class Problem:
    """A decomposed map with its single-robot reference tour."""

    grid: GridMap
    decomposition: Decomposition
    graph: ReebGraph
    start: PixelPoint

    @cached_property
    def dual(self) -> DualGraph:
        return build_dual(self.decomposition, self.grid.resolution)

    @cached_property
    def _ecc(self) -> tuple[EulerMultigraph, EulerTour]:
        return ecc(self.graph)

    @property
    def multigraph(self) -> EulerMultigraph:
        return self._ecc[0]

    @property
    def tour(self) -> EulerTour:
        return self._ecc[1]

    @property
    def reference_cost(self) -> float:
        return self.tour.total_cost

    @cached_property
    def _raw(self) -> dict:
        return {}


def prepare(grid: GridMap, start=None, largest_component: bool = False) -> Problem:
    decomp = decompose(grid, largest_component=largest_component)
    if start is None:
        idx = int(np.flatnonzero(decomp.region.ravel())[0])
        start = PixelPoint(idx % grid.width, idx // grid.width)
    start = PixelPoint(int(start[0]), int(start[1]))
    graph = assign_weights(decomp, grid, start)
    return Problem(grid, decomp, graph, start)


def raw_robot_tours(problem: Problem, algorithm: str, k: int) -> tuple[list[RobotTour], SplitReport | ClusterPlan]:
    """Plan exactly as the algorithm prescribes for ``k`` robots."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    key = (algorithm, k)
    cached = problem._raw.get(key)
    if cached is None:
        if algorithm == "cac":
            cp = cac(problem.graph, problem.dual, k)
            cached = (list(cp.tours), cp)
        else:
            cached = split(problem.tour, problem.graph, k, algorithm)
        problem._raw[key] = cached
    return cached


def _max_cost(tours: list[RobotTour]) -> float:
    return max((t.total_cost for t in tours), default=0.0)


def robot_tours(
    problem: Problem, algorithm: str, k: int, monotone: bool = True
) -> tuple[list[RobotTour], SplitReport | ClusterPlan, int]:
    """Robot tours for ``k`` robots and the team size actually planned for.

    With ``monotone`` the plan for any smaller team is reused (extra robots
    idle) whenever it has a lower maximum mission cost, so the MinMax cost
    never rises when robots are added.
    """
    tours, detail = raw_robot_tours(problem, algorithm, k)
    used = k
    if monotone:
        best = _max_cost(tours)
        for kk in range(k - 1, 0, -1):
            t, d = raw_robot_tours(problem, algorithm, kk)
            if _max_cost(t) < best:
                tours, detail, used, best = t, d, kk, _max_cost(t)
    if used < k:
        v1 = problem.graph.start_vertex
        tours = list(tours) + [RobotTour(i, v1, ()) for i in range(used, k)]
    return list(tours), detail, used


@dataclass
class PlanResult:
    algorithm: str
    k: int
    tours: list[RobotTour]
    detail: SplitReport | ClusterPlan
    plan: CoveragePlan
    reference_cost: float
    planned_k: int

    @property
    def metrics(self):
        from .bench import evaluate

        return evaluate(self.plan, self.reference_cost, self.k)


def make_plan(
    problem: Problem, algorithm: str, k: int, footprint: FootprintSpec = FootprintSpec(), monotone: bool = True
) -> PlanResult:
    tours, detail, used = robot_tours(problem, algorithm, k, monotone)
    plan = assemble_plan(tours, problem.graph, problem.decomposition, problem.grid, footprint, problem.start)
    return PlanResult(algorithm, k, tours, detail, plan, problem.reference_cost, used)


def verify(problem: Problem, plan: CoveragePlan) -> CoverageReport:
    return verify_coverage(plan, problem.grid, problem.decomposition.region)


# ---------------------------------------------------------------------- JSON

def plan_to_json(result: PlanResult, map_name: str = "") -> dict:
    m = result.metrics
    doc = {
        "map": map_name,
        "algorithm": result.algorithm,
        "k": result.k,
        "start": list(result.plan.start),
        "footprint": result.plan.footprint.radius,
        "reference_cost": result.reference_cost,
        "planned_k": result.planned_k,
        "robots": [
            {
                "id": r.id,
                "idle": r.idle,
                "coverage_cost": r.coverage_cost,
                "travel_cost": r.travel_cost,
                "total_cost": r.total_cost,
                "cells": r.cells,
                "cover_length": r.cover_length,
                "transit_length": r.transit_length,
                "waypoints": [{"x": w.x, "y": w.y, "kind": w.kind} for w in r.waypoints],
            }
            for r in result.plan.robots
        ],
        "metrics": {
            "utilization_pct": m.utilization,
            "max_cost": m.max_cost,
            "max_cost_ratio": m.max_cost_ratio,
        },
    }
    if isinstance(result.detail, SplitReport):
        doc["split"] = {
            "mode": result.detail.mode,
            "s_max": result.detail.s_max,
            "boundaries": list(result.detail.boundaries),
            "segments": [[s.edge for s in t.steps] for t in result.tours],
            "steps": [
                [{"edge": s.edge, "from": s.tail, "to": s.head, "cost": s.cost, "is_duplicate": s.duplicate} for s in t.steps]
                for t in result.tours
            ],
        }
    else:
        doc["clusters"] = {
            "members": [list(c) for c in result.detail.clusters],
            "limits": list(result.detail.limits),
            "seeds": list(result.detail.seeds),
        }
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def plan_from_json(doc: dict) -> CoveragePlan:
    robots = [
        RobotPlan(
            id=r["id"],
            idle=r["idle"],
            coverage_cost=r["coverage_cost"],
            travel_cost=r["travel_cost"],
            total_cost=r["total_cost"],
            cells=list(r["cells"]),
            waypoints=[Waypoint(w["x"], w["y"], w["kind"]) for w in r["waypoints"]],
            cover_length=r.get("cover_length", 0.0),
            transit_length=r.get("transit_length", 0.0),
        )
        for r in doc["robots"]
    ]
    return CoveragePlan(robots, PixelPoint(*doc["start"]), FootprintSpec(doc.get("footprint", 0.5)))
