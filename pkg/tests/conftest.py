import numpy as np
import pytest

from mrcpp.gridmap import GridMap

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def ascii_grid(text: str) -> GridMap:
    rows = [r for r in text.strip().splitlines()]
    return GridMap(np.array([[c == "#" for c in r] for r in rows]))


def centered_obstacle(n: int = 20, side: int = 6) -> GridMap:
    occ = np.zeros((n, n), dtype=bool)
    a = (n - side) // 2
    occ[a:a + side, a:a + side] = True
    return GridMap(occ)


def stacked_obstacles() -> GridMap:
    occ = np.zeros((20, 20), dtype=bool)
    occ[4:8, 7:13] = True
    occ[12:16, 7:13] = True
    return GridMap(occ)


@pytest.fixture
def centered():
    return centered_obstacle()


@pytest.fixture
def stacked():
    return stacked_obstacles()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def reeb(n: int, edges, start: int = 0):
    """Synthetic Reeb graph from ``(u, v, w_c, w_t[, c_e])`` tuples."""
    from mrcpp.decomposition import ReebEdge, ReebGraph
    from mrcpp.gridmap import PixelPoint

    out = []
    for i, e in enumerate(edges):
        u, v, w_c, w_t = e[:4]
        c_e = e[4] if len(e) > 4 else w_c
        out.append(ReebEdge(i, u, v, float(w_c), float(w_t), float(c_e), 1, 1))
    return ReebGraph(tuple(PixelPoint(i, 0) for i in range(n)), tuple(out), start)


def random_reeb(rng, n_vertices, n_edges, start=0):
    """Random connected multigraph: a spanning tree plus extra (parallel) edges."""
    edges = []
    for v in range(1, n_vertices):
        edges.append((int(rng.integers(0, v)), v))
    while len(edges) < n_edges:
        u, v = rng.choice(n_vertices, 2, replace=False)
        edges.append((int(u), int(v)))
    rows = []
    for u, v in edges:
        w_c = float(rng.integers(1, 60))
        w_t = float(rng.integers(0, max(1, int(w_c))))
        rows.append((u, v, w_c, w_t, float(rng.uniform(0.1, 5.0))))
    return reeb(n_vertices, rows, start)
