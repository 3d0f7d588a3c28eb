import math

import numpy as np
import pytest

from conftest import centered_obstacle, random_reeb, reeb
from mrcpp.cpp import EulerTour, Step, ecc
from mrcpp.decomposition import assign_weights, decompose
from mrcpp.routesplit import compute_s_max, fhk_bound, split, split_frederickson, split_naive
from oracles import best_contiguous_split, floyd, mission_cost


def _sp_t(g):
    return floyd(len(g.vertices), [(e.u, e.v, e.id) for e in g.edges], lambda e: g.edges[e].w_t)


def test_s_max_single_edge_out_and_back():
    # a one-column cell: both critical points coincide so w_t = 0
    g = reeb(2, [(0, 1, 12, 0)])
    _, tour = ecc(g)
    assert compute_s_max(tour, g) == 12.0


def test_s_max_path_graph():
    g = reeb(3, [(0, 1, 4, 2), (1, 2, 6, 3)])
    _, tour = ecc(g)
    assert g.sp_t[0, 1] == 2 and g.sp_t[0, 2] == 5
    assert compute_s_max(tour, g) == 13.0  # max(0+4+2, 2+6+5)


@pytest.mark.parametrize("seed", range(20))
def test_s_max_crc_not_above_fhk_when_travel_is_cheap(seed):
    g = random_reeb(np.random.default_rng(seed), 5, 8)
    _, tour = ecc(g)
    assert compute_s_max(tour, g, "crc") <= compute_s_max(tour, g, "fhk") + 1e-9


def test_k1_returns_whole_tour():
    g = assign_weights(decompose(centered_obstacle()), centered_obstacle(), (0, 0))
    _, tour = ecc(g)
    for mode in ("crc", "fhk", "nrc"):
        robots, _ = split(tour, g, 1, mode)
        assert len(robots) == 1
        r = robots[0]
        assert r.steps == tour.steps and r.approach_cost == 0 and r.retreat_cost == 0
        assert r.total_cost == pytest.approx(tour.total_cost)


@pytest.mark.parametrize("mode", ["crc", "fhk", "nrc"])
def test_more_robots_than_steps(mode):
    g = reeb(3, [(0, 1, 4, 2), (1, 2, 6, 3)])
    _, tour = ecc(g)
    robots, _ = split(tour, g, 10, mode)
    assert len(robots) == 10
    busy = [r for r in robots if not r.idle]
    assert 1 <= len(busy) <= len(tour)
    assert sorted(c for r in robots for c in r.cells) == [0, 1]


def test_six_edge_tour_k3_against_enumeration():
    g = reeb(4, [(0, 1, 10, 2), (1, 2, 8, 3), (2, 3, 12, 2), (3, 0, 9, 4), (1, 3, 7, 5), (1, 3, 6, 5)])
    m, tour = ecc(g)
    assert len(tour) == 6 and m.duplicates == ()
    sp = _sp_t(g)
    robots, rep = split_frederickson(tour, g, 3, "crc")
    worst = max(r.total_cost for r in robots)
    for r in robots:
        assert r.total_cost == pytest.approx(mission_cost(r.steps, 0, sp))
    assert worst <= fhk_bound(tour.total_cost, rep.s_max, 3) + 1e-9
    assert worst >= best_contiguous_split(tour.steps, 0, 3, sp) - 1e-9


@pytest.mark.parametrize("seed", range(60))
@pytest.mark.parametrize("mode", ["crc", "fhk"])
def test_bound_and_optimum_on_random_tours(seed, mode):
    rng = np.random.default_rng(seed)
    nv = int(rng.integers(2, 6))
    g = random_reeb(rng, nv, int(rng.integers(nv - 1, 7)))
    _, tour = ecc(g)
    sp = _sp_t(g)
    for k in (2, 3):
        robots, rep = split(tour, g, k, mode)
        worst = max(r.total_cost for r in robots)
        assert worst <= fhk_bound(tour.total_cost, rep.s_max, k) + 1e-9
        assert worst >= best_contiguous_split(tour.steps, 0, k, sp) - 1e-9
        # the pieces, in order, are exactly the tour
        assert tuple(s for r in robots for s in r.steps) == tour.steps


def _line_tour(costs):
    steps = tuple(Step(i, 0, 0, False, float(c)) for i, c in enumerate(costs))
    g = reeb(1, [(0, 0, c, 0) for c in costs])
    return g, EulerTour(0, steps)


def test_naive_k1():
    g, tour = _line_tour([3, 4, 5])
    robots, rep = split_naive(tour, g, 1)
    assert robots[0].steps == tour.steps and rep.boundaries == ()


def test_naive_uniform_halves():
    g, tour = _line_tour([5, 5, 5, 5])
    robots, rep = split_naive(tour, g, 2)
    assert [len(r.steps) for r in robots] == [2, 2]
    assert rep.boundaries == (2,)


def test_naive_skewed_leaves_idle_robots():
    g, tour = _line_tour([90, 4, 3, 3])
    robots, _ = split_naive(tour, g, 4)
    assert robots[0].cells == [0]
    assert sum(r.idle for r in robots) >= 1
    assert robots[1].cells == [1, 2, 3]


def test_naive_segments_reach_quota():
    g, tour = _line_tour([2, 7, 1, 1, 6, 3, 2, 8])
    robots, _ = split_naive(tour, g, 3)
    quota = tour.total_cost / 3
    for r in robots[:-1]:
        if not r.idle:
            assert r.coverage_cost >= quota
            assert r.coverage_cost - r.steps[-1].cost < quota


def test_large_s_max_sends_everything_to_one_robot():
    g = reeb(2, [(0, 1, 10, 50)])  # costly return leg dominates
    _, tour = ecc(g)
    robots, rep = split_frederickson(tour, g, 3)
    assert rep.s_max >= tour.total_cost
    assert [r.idle for r in robots] == [False, True, True]


def test_boundaries_non_decreasing():
    g = assign_weights(decompose(centered_obstacle()), centered_obstacle(), (0, 0))
    _, tour = ecc(g)
    for k in (2, 3, 5, 9, 32):
        _, rep = split_frederickson(tour, g, k)
        assert list(rep.boundaries) == sorted(rep.boundaries) and len(rep.boundaries) == k - 1


def test_unknown_mode():
    g, tour = _line_tour([1, 2])
    with pytest.raises(ValueError):
        split(tour, g, 2, "zzz")
    with pytest.raises(ValueError):
        split(tour, g, 0, "crc")


def test_naive_quota_counts_coverage_only():
    g = reeb(1, [(0, 0, 10, 5), (0, 0, 10, 0), (0, 0, 5, 0)])
    steps = (Step(0, 0, 0, False, 10.0), Step(0, 0, 0, True, 5.0), Step(1, 0, 0, False, 10.0), Step(2, 0, 0, False, 5.0))
    tour = EulerTour(0, steps)
    _, rep = split_naive(tour, g, 2)
    # quota 15: the transit step does not count, so the cut comes after 20 covered
    assert rep.boundaries == (3,)
