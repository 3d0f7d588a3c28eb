"""Compare the compiled and pure-Python distance-field kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--size S]

Reports the per-call time of one single-source field on a generated map and
the end-to-end time of preparing and planning that map with each backend.
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from mrcpp import _geodesic_py, kernels
from mrcpp.bench import EnvParams, generate_env
from mrcpp.planner import make_plan, prepare


def _time(fn, repeat: int) -> float:
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def _end_to_end(grid_params: EnvParams, impl) -> float:
    saved = kernels.distance_field
    kernels.distance_field = impl
    try:
        grid = generate_env(grid_params)  # fresh map: empty field cache
        t0 = time.perf_counter()
        make_plan(prepare(grid), "crc", 8)
        return time.perf_counter() - t0
    finally:
        kernels.distance_field = saved


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--size", type=int, default=100)
    args = ap.parse_args()

    params = EnvParams(width=args.size, height=args.size, seed=1)
    grid = generate_env(params)
    blocked = np.ascontiguousarray(grid.occupancy.view(np.uint8))
    sx, sy = grid.first_free()
    impls = {"python": _geodesic_py.distance_field}
    if kernels.BACKEND == "cython":
        impls["cython"] = kernels.distance_field
    else:
        print("compiled kernel unavailable; timing the fallback only")

    print(f"map {args.size}x{args.size}, {grid.free_count} free pixels, median of {args.repeat}")
    print(f"{'backend':<10}{'field ms':>12}{'plan ms':>12}")
    results = {}
    for name, impl in impls.items():
        field = _time(lambda: impl(blocked, sx, sy, 1.0), args.repeat)
        plan = statistics.median(_end_to_end(params, impl) for _ in range(3))
        results[name] = (field, plan)
        print(f"{name:<10}{field * 1e3:>12.2f}{plan * 1e3:>12.1f}")
    if len(results) == 2:
        f = results["python"][0] / results["cython"][0]
        p = results["python"][1] / results["cython"][1]
        print(f"speedup   {f:>11.1f}x{p:>11.1f}x")


if __name__ == "__main__":
    main()
