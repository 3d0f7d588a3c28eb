"""Small undirected multigraph helpers shared by the planners."""
from __future__ import annotations

import heapq
import math
from typing import Callable, Iterable, Sequence

import numpy as np


def adjacency(n: int, edges: Iterable[tuple[int, int, int]]) -> list[list[tuple[int, int]]]:
    """Build ``adj[v] = [(edge_id, other), ...]`` sorted by edge id."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for eid, u, v in edges:
        adj[u].append((eid, v))
        if v != u:
            adj[v].append((eid, u))
    for lst in adj:
        lst.sort()
    return adj


def dijkstra(
    adj: Sequence[Sequence[tuple[int, int]]],
    weight: Callable[[int], float],
    src: int,
) -> tuple[list[float], list[int]]:
    """Single-source shortest paths; returns distances and predecessor edge ids.

    Ties between equal-length paths resolve towards lower vertex ids, then
    lower edge ids, so results are reproducible.
    """
    n = len(adj)
    dist = [math.inf] * n
    pred = [-1] * n
    dist[src] = 0.0
    heap = [(0.0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for eid, v in adj[u]:
            nd = d + weight(eid)
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = eid
                heapq.heappush(heap, (nd, v))
    return dist, pred


def all_pairs(adj, weight) -> tuple[np.ndarray, list[list[int]]]:
    dists = np.empty((len(adj), len(adj)))
    preds = []
    for s in range(len(adj)):
        d, p = dijkstra(adj, weight, s)
        dists[s] = d
        preds.append(p)
    return dists, preds


def path_edges(pred: Sequence[int], endpoints: Callable[[int], tuple[int, int]], src: int, dst: int) -> list[int]:
    """Edge ids along the predecessor tree from ``src`` to ``dst``."""
    out = []
    v = dst
    while v != src:
        eid = pred[v]
        if eid < 0:
            raise ValueError(f"vertex {dst} unreachable from {src}")
        out.append(eid)
        a, b = endpoints(eid)
        v = a if b == v else b
    out.reverse()
    return out


def is_connected(adj, vertices: Iterable[int] | None = None) -> bool:
    nodes = list(range(len(adj))) if vertices is None else list(vertices)
    if not nodes:
        return True
    allowed = set(nodes)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        u = stack.pop()
        for _, v in adj[u]:
            if v in allowed and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen == allowed
