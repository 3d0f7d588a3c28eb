"""Chinese-postman coverage route over a Reeb graph.

Odd-degree vertices are paired by an exact minimum-weight perfect matching
over c_e-weighted shortest paths; the edges on the matched paths are
duplicated and a Hierholzer tour is extracted from the start vertex.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import networkx as nx

from . import graphs
from .decomposition import ReebGraph

# Subset DP is exact and fast up to this many odd vertices; beyond it the
# blossom matcher takes over (also exact).
DP_MATCHING_LIMIT = 12


@dataclass(frozen=True)
class EulerMultigraph:
    base: ReebGraph
    edges: tuple[int, ...]  # base edge ids in scope (all, or one cluster)
    duplicates: tuple[int, ...]

    @property
    def added_c_e(self) -> float:
        return sum(self.base.edges[e].c_e for e in self.duplicates)

    def degrees(self) -> dict[int, int]:
        deg: dict[int, int] = {}
        for eid in list(self.edges) + list(self.duplicates):
            e = self.base.edges[eid]
            deg[e.u] = deg.get(e.u, 0) + 1
            deg[e.v] = deg.get(e.v, 0) + 1
        return deg


@dataclass(frozen=True)
class Step:
    edge: int
    tail: int
    head: int
    duplicate: bool
    cost: float


@dataclass(frozen=True)
class EulerTour:
    start: int
    steps: tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def total_cost(self) -> float:
        return math.fsum(s.cost for s in self.steps)

    @property
    def total_coverage_cost(self) -> float:
        return math.fsum(s.cost for s in self.steps if not s.duplicate)

    def vertex(self, j: int) -> int:
        """Vertex reached after ``j`` steps (``vertex(0)`` is the start)."""
        return self.start if j == 0 else self.steps[j - 1].head


# ------------------------------------------------------------------ matching

def _match_dp(dist: Sequence[Sequence[float]]) -> list[tuple[int, int]]:
    n = len(dist)
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[float, int]:
        if mask == full:
            return 0.0, -1
        i = (~mask & (mask + 1)).bit_length() - 1  # lowest unmatched index
        result = (math.inf, -1)
        for j in range(i + 1, n):
            if not mask >> j & 1:
                c = dist[i][j] + best(mask | 1 << i | 1 << j)[0]
                if c < result[0]:
                    result = (c, j)
        return result

    pairs = []
    mask = 0
    while mask != full:
        i = (~mask & (mask + 1)).bit_length() - 1
        j = best(mask)[1]
        pairs.append((i, j))
        mask |= 1 << i | 1 << j
    return pairs


def _match_blossom(dist: Sequence[Sequence[float]]) -> list[tuple[int, int]]:
    g = nx.Graph()
    n = len(dist)
    for i in range(n):
        for j in range(i + 1, n):
            g.add_edge(i, j, weight=dist[i][j])
    matching = nx.min_weight_matching(g)
    return sorted(tuple(sorted(p)) for p in matching)


def min_weight_pairing(dist: Sequence[Sequence[float]]) -> list[tuple[int, int]]:
    """Exact minimum-weight perfect matching on a complete graph of even order."""
    if len(dist) % 2:
        raise ValueError("perfect matching needs an even number of vertices")
    if not dist:
        return []
    if len(dist) <= DP_MATCHING_LIMIT:
        return _match_dp(dist)
    return _match_blossom(dist)


# -------------------------------------------------------------- eulerianize

def _scope(g: ReebGraph, edges: Iterable[int] | None) -> tuple[int, ...]:
    return tuple(range(len(g.edges))) if edges is None else tuple(sorted(edges))


def eulerianize(g: ReebGraph, edges: Iterable[int] | None = None) -> EulerMultigraph:
    """Duplicate a minimum-c_e edge set so every vertex has even degree.

    ``edges`` restricts the work to a subgraph (one cluster); matched paths
    then stay inside it.
    """
    scope = _scope(g, edges)
    adj = graphs.adjacency(len(g.vertices), ((e, *g.endpoints(e)) for e in scope))
    if not graphs.is_connected(adj, {v for e in scope for v in g.endpoints(e)}):
        raise ValueError("eulerianize needs a connected (sub)graph")
    odd = [v for v in range(len(adj)) if len(adj[v]) % 2]
    preds = {}
    dist = []
    for v in odd:
        d, p = graphs.dijkstra(adj, lambda e: g.edges[e].c_e, v)
        preds[v] = p
        dist.append([d[w] for w in odd])
    parity: dict[int, int] = {}
    for i, j in min_weight_pairing(dist):
        for eid in graphs.path_edges(preds[odd[i]], g.endpoints, odd[i], odd[j]):
            parity[eid] = parity.get(eid, 0) ^ 1
    dups = tuple(sorted(e for e, p in parity.items() if p))
    return EulerMultigraph(g, scope, dups)


# ---------------------------------------------------------------- euler tour

def euler_tour(m: EulerMultigraph, start: int) -> EulerTour:
    """Closed Hierholzer tour from ``start``; lowest edge id is tried first.

    The first traversal of an edge in tour order is the coverage pass
    (cost w_c); a second traversal is transit (cost w_t).
    """
    g = m.base
    instances = [(e, 0) for e in m.edges] + [(e, 1) for e in m.duplicates]
    instances.sort()
    incident: dict[int, list[int]] = {}
    for idx, (eid, _) in enumerate(instances):
        u, v = g.endpoints(eid)
        incident.setdefault(u, []).append(idx)
        if v != u:
            incident.setdefault(v, []).append(idx)
    if start not in incident:
        if instances:
            raise ValueError(f"start vertex {start} is not on the graph")
        return EulerTour(start, ())
    used = [False] * len(instances)
    ptr = {v: 0 for v in incident}
    stack: list[tuple[int, int]] = [(start, -1)]
    circuit: list[tuple[int, int]] = []
    while stack:
        v, via = stack[-1]
        lst = incident[v]
        p = ptr[v]
        while p < len(lst) and used[lst[p]]:
            p += 1
        ptr[v] = p
        if p < len(lst):
            idx = lst[p]
            used[idx] = True
            u, w = g.endpoints(instances[idx][0])
            stack.append((w if u == v else u, idx))
        else:
            stack.pop()
            if via >= 0:
                circuit.append((v, via))
    circuit.reverse()
    steps = []
    seen: set[int] = set()
    cur = start
    for head, idx in circuit:
        eid = instances[idx][0]
        dup = eid in seen
        seen.add(eid)
        e = g.edges[eid]
        steps.append(Step(eid, cur, head, dup, e.w_t if dup else e.w_c))
        cur = head
    return EulerTour(start, tuple(steps))


def ecc(g: ReebGraph, edges: Iterable[int] | None = None, start: int | None = None) -> tuple[EulerMultigraph, EulerTour]:
    """Single-robot efficient complete coverage route."""
    m = eulerianize(g, edges)
    return m, euler_tour(m, g.start_vertex if start is None else start)


def check_tour(tour: EulerTour, m: EulerMultigraph) -> None:
    """Raise AssertionError unless ``tour`` is a valid closed Euler tour of ``m``."""
    g = m.base
    expected: dict[int, int] = {}
    for e in list(m.edges) + list(m.duplicates):
        expected[e] = expected.get(e, 0) + 1
    counts: dict[int, int] = {}
    cur = tour.start
    for s in tour.steps:
        u, v = g.endpoints(s.edge)
        assert s.tail == cur, f"step on edge {s.edge} does not continue from vertex {cur}"
        assert {s.tail, s.head} == {u, v}, f"step direction inconsistent with edge {s.edge}"
        counts[s.edge] = counts.get(s.edge, 0) + 1
        assert s.duplicate == (counts[s.edge] > 1), f"duplicate flag wrong on edge {s.edge}"
        cur = s.head
    assert cur == tour.start, "tour is not closed"
    assert counts == expected, "tour does not use every multigraph edge exactly once"
    for d in m.duplicates:
        assert expected[d] == 2, f"edge {d} duplicated more than once"
