import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mrcpp.gridmap import (
    GeodesicError,
    GridMap,
    MapFormatError,
    PixelPoint,
    free_components,
    geodesic_distance,
    geodesic_path,
    load_map,
    octile_distance,
    read_map,
)
from oracles import grid_distances

SQRT2 = math.sqrt(2.0)


# ------------------------------------------------------------------ loading

def test_ascii_all_free():
    g = load_map(b"...\n...\n...\n")
    assert (g.width, g.height, g.free_count) == (3, 3, 9)


def test_ascii_without_trailing_newline_and_crlf():
    a = load_map(b".#\r\n..")
    assert a.occupancy.tolist() == [[False, True], [False, False]]


def test_pgm_p2_threshold():
    g = load_map(b"P2 2 1 255\n0 255\n")
    assert g.occupancy[0, 0] and not g.occupancy[0, 1]


def test_pgm_p2_scaled_maxval_and_comments():
    g = load_map(b"P2\n# made by hand\n3 1\n# max\n15\n7 8 15\n")
    # 7/15 -> 119 (< 128, obstacle); 8/15 -> 136 (free)
    assert g.occupancy.tolist() == [[True, False, False]]


def test_pgm_p5_round_trip():
    occ = np.array([[True, False, False], [False, False, True]])
    g = load_map(GridMap(occ).to_pgm())
    assert np.array_equal(g.occupancy, occ)


def test_ascii_round_trip():
    occ = np.array([[True, False], [False, False], [False, True]])
    assert np.array_equal(load_map(GridMap(occ).to_ascii().encode()).occupancy, occ)


def test_ragged_row_reports_line():
    with pytest.raises(MapFormatError, match=r"ragged row at line 2"):
        load_map(b"...\n..\n...\n")


def test_invalid_character_location():
    with pytest.raises(MapFormatError, match=r"line 2, column 3"):
        load_map(b"...\n..x\n")


@pytest.mark.parametrize(
    "data, pattern",
    [
        (b"P2 2 x 255\n0 0\n", "header"),
        (b"P2 2\n", "header"),
        (b"P5 4 4 255\n\x00\x00", "truncated"),
        (b"P2 2 2 255\n0 255 255\n", "truncated"),
        (b"P2 2 1 255\n0 0\n", "zero free"),
        (b"###\n###\n", "zero free"),
    ],
)
def test_malformed_inputs(data, pattern):
    with pytest.raises(MapFormatError, match=pattern):
        load_map(data)


def test_error_messages_carry_byte_offsets():
    with pytest.raises(MapFormatError, match=r"byte \d+"):
        load_map(b"P5 4 4 255\n\x00\x00")


def test_read_map_missing_file(tmp_path):
    with pytest.raises(OSError):
        read_map(tmp_path / "nope.pgm")


def test_read_map_pgm_by_extension(tmp_path):
    p = tmp_path / "m.pgm"
    p.write_bytes(b"P2 2 1 255\n255 0\n")
    assert read_map(p).occupancy.tolist() == [[False, True]]


# ----------------------------------------------------------- components

def test_components_all_free():
    comps = free_components(load_map(b"...\n...\n...\n"))
    assert len(comps) == 1 and comps[0].sum() == 9


def test_components_diagonal_pixels_are_separate():
    comps = free_components(load_map(b".##\n###\n##.\n"))
    assert len(comps) == 2
    assert all(c.sum() == 1 for c in comps)
    assert comps[0][0, 0]  # equal sizes: first pixel in row-major order wins


def test_components_full_height_wall():
    g = load_map(b"..#..\n..#..\n..#..\n..#..\n..#..\n")
    comps = free_components(g)
    assert [int(c.sum()) for c in comps] == [10, 10]
    assert comps[0][:, :2].all() and comps[1][:, 3:].all()


def test_components_largest_first():
    comps = free_components(load_map(b".#...\n.#...\n"))
    assert [int(c.sum()) for c in comps] == [6, 2]


# --------------------------------------------------------------- geodesy

def test_geodesic_identity():
    g = load_map(b"...\n...\n")
    assert geodesic_distance(g, (1, 1), (1, 1)) == 0.0
    assert geodesic_path(g, (1, 1), (1, 1)) == [PixelPoint(1, 1)]


def test_geodesic_straight_line():
    g = GridMap(np.zeros((4, 6), dtype=bool))
    assert geodesic_distance(g, (0, 0), (3, 0)) == 3.0


def test_geodesic_wall_with_gap_matches_enumeration():
    g = load_map(b"..#..\n..#..\n..#..\n..#..\n.....\n")
    oracle = grid_distances(g.occupancy, (4, 0))
    # hand value: (0,0)->(1,4) is 3+sqrt2, two axis steps under the wall, (3,4)->(4,0) is 3+sqrt2
    assert oracle[0, 0] == pytest.approx(8 + 2 * SQRT2)
    assert geodesic_distance(g, (0, 0), (4, 0)) == pytest.approx(oracle[0, 0], abs=1e-12)


def test_no_corner_cutting():
    g = load_map(b".#\n#.\n..\n")
    # (0,0) is sealed off: diagonal to (1,1) would squeeze between two obstacles
    with pytest.raises(GeodesicError):
        geodesic_distance(g, (0, 0), (1, 1))


def test_geodesic_errors():
    g = load_map(b"..#..\n..#..\n")
    with pytest.raises(GeodesicError, match="obstacle"):
        geodesic_distance(g, (2, 0), (0, 0))
    with pytest.raises(GeodesicError, match="different free components"):
        geodesic_distance(g, (0, 0), (4, 0))
    with pytest.raises(GeodesicError, match="outside"):
        geodesic_path(g, (9, 0), (0, 0))


def test_resolution_scales_costs():
    occ = np.zeros((3, 3), dtype=bool)
    assert geodesic_distance(GridMap(occ, 0.25), (0, 0), (2, 2)) == pytest.approx(0.5 * SQRT2)


def test_path_is_valid_and_has_geodesic_length():
    g = load_map(b"......\n.####.\n.#....\n.#.##.\n......\n")
    path = geodesic_path(g, (0, 0), (2, 2))
    assert path[0] == (0, 0) and path[-1] == (2, 2)
    length = 0.0
    for a, b in zip(path, path[1:]):
        dx, dy = abs(a.x - b.x), abs(a.y - b.y)
        assert max(dx, dy) == 1 and g.is_free(b)
        if dx and dy:
            assert g.is_free((b.x, a.y)) and g.is_free((a.x, b.y))
        length += SQRT2 if dx and dy else 1.0
    assert length == pytest.approx(geodesic_distance(g, (0, 0), (2, 2)))


# ------------------------------------------------------------ properties

@st.composite
def maps_with_points(draw, n_points=3):
    w = draw(st.integers(2, 8))
    h = draw(st.integers(2, 8))
    bits = draw(st.lists(st.booleans(), min_size=w * h, max_size=w * h))
    occ = np.array(bits, dtype=bool).reshape(h, w)
    free = np.argwhere(~occ)
    if len(free) == 0:
        occ[0, 0] = False
        free = np.argwhere(~occ)
    idx = draw(st.lists(st.integers(0, len(free) - 1), min_size=n_points, max_size=n_points))
    return GridMap(occ), [PixelPoint(int(free[i][1]), int(free[i][0])) for i in idx]


@settings(max_examples=60, deadline=None)
@given(maps_with_points())
def test_distances_match_relaxation_oracle(case):
    g, (a, _, _) = case
    oracle = grid_distances(g.occupancy, a)
    dist, _ = g.field(a)
    assert np.allclose(np.where(np.isinf(oracle), -1, oracle), np.where(np.isinf(dist), -1, dist))


@settings(max_examples=60, deadline=None)
@given(maps_with_points())
def test_metric_properties(case):
    g, (a, b, c) = case
    try:
        ab = geodesic_distance(g, a, b)
        bc = geodesic_distance(g, b, c)
        ac = geodesic_distance(g, a, c)
    except GeodesicError:
        return
    assert ab == pytest.approx(geodesic_distance(g, b, a), abs=1e-9)
    assert ac <= ab + bc + 1e-9
    assert ab >= max(abs(a.x - b.x), abs(a.y - b.y)) - 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.data())
def test_octile_on_empty_map(w, h, data):
    g = GridMap(np.zeros((h, w), dtype=bool))
    a = (data.draw(st.integers(0, w - 1)), data.draw(st.integers(0, h - 1)))
    b = (data.draw(st.integers(0, w - 1)), data.draw(st.integers(0, h - 1)))
    assert geodesic_distance(g, a, b) == pytest.approx(octile_distance(a, b))
