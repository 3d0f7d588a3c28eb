"""Pure-Python single-source grid Dijkstra (reference for the compiled kernel)."""
from __future__ import annotations

import heapq
import math

import numpy as np

_MOVES = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1))


def distance_field(blocked: np.ndarray, sx: int, sy: int, resolution: float):
    h, w = blocked.shape
    flat = blocked.ravel().tolist()
    dist = [math.inf] * (h * w)
    pred = [-1] * (h * w)
    axis = resolution
    diag = math.sqrt(2.0) * resolution
    src = sy * w + sx
    dist[src] = 0.0
    heap = [(0.0, src)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, cur = pop(heap)
        if d > dist[cur]:
            continue
        y, x = divmod(cur, w)
        for k, (dx, dy) in enumerate(_MOVES):
            nx, ny = x + dx, y + dy
            if nx < 0 or ny < 0 or nx >= w or ny >= h:
                continue
            nb = ny * w + nx
            if flat[nb]:
                continue
            if k >= 4:
                if flat[y * w + nx] or flat[ny * w + x]:
                    continue
                nd = d + diag
            else:
                nd = d + axis
            if nd < dist[nb]:
                dist[nb] = nd
                pred[nb] = cur
                push(heap, (nd, nb))
    return (
        np.array(dist, dtype=np.float64).reshape(h, w),
        np.array(pred, dtype=np.int64).reshape(h, w),
    )
