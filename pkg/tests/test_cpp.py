import math

import numpy as np
import pytest

from conftest import centered_obstacle, random_reeb, reeb, stacked_obstacles
from mrcpp import cpp
from mrcpp.cpp import check_tour, ecc, eulerianize, euler_tour, min_weight_pairing
from mrcpp.decomposition import assign_weights, decompose
from oracles import all_pairings, floyd, min_even_duplication, min_pairing_cost


def _edges(g):
    return [(e.u, e.v, e.id) for e in g.edges]


def test_triangle_is_already_eulerian():
    g = reeb(3, [(0, 1, 5, 1), (1, 2, 5, 1), (2, 0, 5, 1)])
    m, tour = ecc(g)
    assert m.duplicates == ()
    assert len(tour) == 3 and sorted(s.edge for s in tour.steps) == [0, 1, 2]
    check_tour(tour, m)


@pytest.mark.parametrize("start", [0, 1, 2])
def test_triangle_from_any_vertex(start):
    g = reeb(3, [(0, 1, 5, 1), (1, 2, 5, 1), (2, 0, 5, 1)], start=start)
    m, tour = ecc(g)
    assert tour.start == start and len(tour) == 3
    check_tour(tour, m)


def test_single_edge_is_doubled():
    g = reeb(2, [(0, 1, 10, 3)])
    m, tour = ecc(g)
    assert m.duplicates == (0,)
    assert [(s.tail, s.head, s.duplicate, s.cost) for s in tour.steps] == [(0, 1, False, 10.0), (1, 0, True, 3.0)]
    assert tour.total_cost == 13.0 and tour.total_coverage_cost == 10.0


def test_centered_duplication_matches_exhaustive_search(centered):
    d = decompose(centered)
    g = assign_weights(d, centered, (0, 0))
    assert all(g.degree(v) % 2 for v in range(4))
    m = eulerianize(g)
    best = min_even_duplication(len(g.vertices), _edges(g), lambda e: g.edges[e].c_e)
    assert m.added_c_e == pytest.approx(best, abs=1e-9)
    # left and right cells are cheapest to repeat (c_e 0.35 each)
    assert m.duplicates == (0, 3)


def test_stacked_tour_invariants_and_cost(stacked):
    d = decompose(stacked)
    g = assign_weights(d, stacked, (0, 0))
    m, tour = ecc(g)
    check_tour(tour, m)
    expected = math.fsum([e.w_c for e in g.edges] + [g.edges[e].w_t for e in m.duplicates])
    assert tour.total_cost == pytest.approx(expected)


def test_first_traversal_covers():
    g = reeb(2, [(0, 1, 10, 3), (0, 1, 7, 2), (0, 1, 4, 1)])
    m, tour = ecc(g)
    check_tour(tour, m)
    seen = set()
    for s in tour.steps:
        assert s.duplicate == (s.edge in seen)
        seen.add(s.edge)


def test_check_tour_rejects_broken_tours():
    g = reeb(3, [(0, 1, 5, 1), (1, 2, 5, 1), (2, 0, 5, 1)])
    m, tour = ecc(g)
    with pytest.raises(AssertionError):
        check_tour(cpp.EulerTour(tour.start, tour.steps[:-1]), m)
    with pytest.raises(AssertionError):
        check_tour(cpp.EulerTour(tour.start, tour.steps[1:] + tour.steps[:1]), m)


def test_pairing_rejects_odd_count():
    with pytest.raises(ValueError):
        min_weight_pairing([[0.0]])


@pytest.mark.parametrize("seed", range(25))
def test_dp_and_blossom_agree_with_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.choice([2, 4, 6, 8, 10]))
    pts = rng.random((n, 2)) * 10
    dist = np.hypot(*(pts[:, None, :] - pts[None, :, :]).transpose(2, 0, 1)).tolist()

    def cost(p):
        return math.fsum(dist[a][b] for a, b in p)

    best = min(cost(p) for p in all_pairings(range(n)))
    assert cost(cpp._match_dp(dist)) == pytest.approx(best, abs=1e-9)
    assert cost(cpp._match_blossom(dist)) == pytest.approx(best, abs=1e-9)


@pytest.mark.parametrize("seed", range(40))
def test_random_graph_duplication_is_optimal(seed):
    rng = np.random.default_rng(100 + seed)
    nv = int(rng.integers(2, 8))
    g = random_reeb(rng, nv, int(rng.integers(nv - 1, 13)))
    m, tour = ecc(g)
    check_tour(tour, m)
    assert all(d % 2 == 0 for d in m.degrees().values())
    # two independent oracles: pairing enumeration and edge-subset enumeration
    d = floyd(nv, _edges(g), lambda e: g.edges[e].c_e)
    odd = [v for v in range(nv) if g.degree(v) % 2]
    assert m.added_c_e == pytest.approx(min_pairing_cost(odd, d), abs=1e-9)
    assert m.added_c_e == pytest.approx(min_even_duplication(nv, _edges(g), lambda e: g.edges[e].c_e), abs=1e-9)


def test_blossom_path_above_dp_limit():
    rng = np.random.default_rng(7)
    # a star with many leaves has many odd vertices
    g = reeb(16, [(0, v, float(rng.integers(1, 9)), 1.0) for v in range(1, 16)])
    odd = [v for v in range(16) if g.degree(v) % 2]
    assert len(odd) > cpp.DP_MATCHING_LIMIT
    m, tour = ecc(g)
    check_tour(tour, m)
    # a star must double every leaf edge
    assert m.duplicates == tuple(range(15))


def test_subgraph_restriction():
    g = reeb(4, [(0, 1, 5, 1), (1, 2, 5, 1), (2, 3, 5, 1), (3, 0, 5, 1)])
    m = eulerianize(g, [1, 2])
    assert m.edges == (1, 2) and m.duplicates == (1, 2)
    tour = euler_tour(m, 1)
    check_tour(tour, m)
    with pytest.raises(ValueError):
        eulerianize(g, [0, 2])


def test_tour_is_deterministic():
    g = assign_weights(decompose(centered_obstacle()), centered_obstacle(), (0, 0))
    assert ecc(g)[1] == ecc(g)[1]
