"""Random environments and the algorithm comparison suite built on plan metrics."""
from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cpp import check_tour
from .gridmap import GridMap, free_components
from .pathgen import CoveragePlan, FootprintSpec
from .planner import ALGORITHMS, make_plan, prepare, verify

log = logging.getLogger(__name__)

DEFAULT_K = (1, 2, 4, 8, 16, 20, 32)
CSV_COLUMNS = (
    "seed",
    "algorithm",
    "k",
    "utilization_pct",
    "max_cost",
    "max_cost_ratio",
    "total_cost_sum",
    "idle_count",
    "wall_ms",
)


class SuiteViolation(AssertionError):
    """A plan broke a coverage or tour invariant during the suite."""


@dataclass(frozen=True)
class EnvParams:
    width: int = 100
    height: int = 100
    obstacles: tuple[int, int] = (9, 24)
    size: tuple[int, int] = (5, 16)
    seed: int = 0
    max_retries: int = 200


def generate_env(params: EnvParams) -> GridMap:
    """Axis-aligned random rectangles; resampled until free space is 4-connected."""
    rng = np.random.default_rng(params.seed)
    lo, hi = params.obstacles
    smin, smax = params.size
    for _ in range(params.max_retries):
        occ = np.zeros((params.height, params.width), dtype=bool)
        n = int(rng.integers(lo, hi + 1)) if hi > 0 else 0
        for _ in range(n):
            w = int(rng.integers(smin, min(smax, params.width) + 1))
            h = int(rng.integers(smin, min(smax, params.height) + 1))
            x = int(rng.integers(0, params.width - w + 1))
            y = int(rng.integers(0, params.height - h + 1))
            occ[y:y + h, x:x + w] = True
        if occ.all():
            continue
        grid = GridMap(occ)
        if len(free_components(grid)) == 1:
            return grid
    raise RuntimeError(f"no connected environment after {params.max_retries} attempts (seed {params.seed})")


@dataclass(frozen=True)
class Metrics:
    k: int
    utilization: float
    max_cost: float
    max_cost_ratio: float
    costs: tuple[float, ...] = field(default=())

    @property
    def idle_count(self) -> int:
        return round(self.k * (100.0 - self.utilization) / 100.0)


def evaluate(plan: CoveragePlan, single_tour_cost: float, k: int | None = None) -> Metrics:
    """Utilization (% of robots that cover something) and MinMax cost ratio."""
    if not single_tour_cost > 0:
        raise ValueError("reference tour cost must be positive")
    k = plan.k if k is None else k
    costs = tuple(r.total_cost for r in plan.robots) + (0.0,) * (k - plan.k)
    busy = sum(1 for r in plan.robots if not r.idle and r.coverage_cost > 0)
    max_cost = max(costs) if costs else 0.0
    return Metrics(k, 100.0 * busy / k, max_cost, max_cost / single_tour_cost, costs)


def reeb_stats(seed: int, params: EnvParams | None = None) -> dict:
    params = EnvParams(seed=seed) if params is None else params
    problem = prepare(generate_env(params))
    return {
        "seed": seed,
        "vertices": len(problem.graph.vertices),
        "edges": len(problem.graph.edges),
        "tour_length": len(problem.tour),
        "tour_cost": problem.reference_cost,
    }


# --------------------------------------------------------------------- suite

def run_map(seed: int, ks: Sequence[int] = DEFAULT_K, algorithms: Sequence[str] = ALGORITHMS,
            params: EnvParams | None = None, footprint: FootprintSpec = FootprintSpec(),
            timings: bool = False, check: bool = True) -> list[dict]:
    """All (algorithm, k) rows for one generated map; raises on any invariant break."""
    params = EnvParams(seed=seed) if params is None else params
    problem = prepare(generate_env(params))
    if check:
        try:
            check_tour(problem.tour, problem.multigraph)
        except AssertionError as exc:
            raise SuiteViolation(f"seed {seed}: invalid Euler tour: {exc}") from exc
    rows = []
    for alg in algorithms:
        for k in ks:
            t0 = time.perf_counter()
            result = make_plan(problem, alg, k, footprint)
            elapsed = (time.perf_counter() - t0) * 1000.0
            m = result.metrics
            if check:
                report = verify(problem, result.plan)
                if report.missed:
                    raise SuiteViolation(f"seed {seed} {alg} k={k}: {report.missed} free pixels missed")
                covered = sorted(c for t in result.tours for c in t.cells)
                if covered != list(range(len(problem.graph.edges))):
                    raise SuiteViolation(f"seed {seed} {alg} k={k}: cells not partitioned among robots")
            rows.append(
                {
                    "seed": seed,
                    "algorithm": alg,
                    "k": k,
                    "utilization_pct": m.utilization,
                    "max_cost": m.max_cost,
                    "max_cost_ratio": m.max_cost_ratio,
                    "total_cost_sum": float(sum(m.costs)),
                    "idle_count": m.idle_count,
                    "wall_ms": round(elapsed, 3) if timings else "",
                }
            )
    return rows


def _run_map_star(args):
    return run_map(*args)


def run_suite(seeds: Iterable[int], ks: Sequence[int] = DEFAULT_K, algorithms: Sequence[str] = ALGORITHMS,
              params: EnvParams | None = None, footprint: FootprintSpec = FootprintSpec(),
              jobs: int = 1, timings: bool = False) -> list[dict]:
    """Rows sorted by (seed, algorithm, k); parallel over maps when ``jobs > 1``."""
    seeds = list(seeds)

    def params_for(s):
        return EnvParams(seed=s) if params is None else EnvParams(**{**asdict(params), "seed": s})

    work = [(s, tuple(ks), tuple(algorithms), params_for(s), footprint, timings) for s in seeds]
    rows: list[dict] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk in pool.map(_run_map_star, work):
                rows += chunk
    else:
        for w in work:
            rows += run_map(*w)
            log.debug("seed %s done", w[0])
    rows.sort(key=lambda r: (r["seed"], r["algorithm"], r["k"]))
    return rows


def aggregate(rows: Sequence[dict]) -> dict:
    """Per-(algorithm, k) means plus the overall mean over k > 1."""
    table: dict = {}
    for r in rows:
        a = table.setdefault(r["algorithm"], {"by_k": {}, "_util": [], "_ratio": []})
        cell = a["by_k"].setdefault(str(r["k"]), {"_util": [], "_ratio": []})
        cell["_util"].append(r["utilization_pct"])
        cell["_ratio"].append(r["max_cost_ratio"])
        if r["k"] > 1:
            a["_util"].append(r["utilization_pct"])
            a["_ratio"].append(r["max_cost_ratio"])
    out = {}
    for alg in sorted(table):
        a = table[alg]
        by_k = {
            k: {"utilization_pct": float(np.mean(v["_util"])), "max_cost_ratio": float(np.mean(v["_ratio"])), "n": len(v["_util"])}
            for k, v in sorted(a["by_k"].items(), key=lambda kv: int(kv[0]))
        }
        out[alg] = {
            "by_k": by_k,
            "utilization_pct": float(np.mean(a["_util"])) if a["_util"] else float("nan"),
            "max_cost_ratio": float(np.mean(a["_ratio"])) if a["_ratio"] else float("nan"),
        }
    return out


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def format_table(agg: dict) -> str:
    lines = [f"{'algorithm':<10}{'utilization %':>15}{'max cost ratio':>16}"]
    for alg, a in agg.items():
        lines.append(f"{alg.upper():<10}{a['utilization_pct']:>15.1f}{a['max_cost_ratio']:>16.3f}")
    return "\n".join(lines)


def aggregate_json(agg: dict) -> str:
    return json.dumps(agg, indent=1, sort_keys=True) + "\n"
