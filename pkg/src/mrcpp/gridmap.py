"""Binary occupancy maps: parsing plus connectivity and geodesic queries."""
from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from . import kernels

PGM_THRESHOLD = 128
_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


class MapFormatError(ValueError):
    """Raised for unreadable or unusable map files."""


class GeodesicError(ValueError):
    """Raised when a geodesic query has no answer (blocked or disconnected)."""


class PixelPoint(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True, eq=False)
class GridMap:
    """Immutable occupancy raster; ``occupancy[y, x]`` is True for obstacles."""

    occupancy: np.ndarray
    resolution: float = 1.0
    _fields: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        occ = np.ascontiguousarray(self.occupancy, dtype=bool)
        if occ.ndim != 2 or occ.shape[0] < 1 or occ.shape[1] < 1:
            raise MapFormatError("map must be a non-empty 2D raster")
        if occ.all():
            raise MapFormatError("map has zero free pixels")
        if not self.resolution > 0:
            raise MapFormatError("resolution must be positive")
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)
        object.__setattr__(self, "_blocked", occ.view(np.uint8))

    @property
    def width(self) -> int:
        return self.occupancy.shape[1]

    @property
    def height(self) -> int:
        return self.occupancy.shape[0]

    @property
    def free_count(self) -> int:
        return int((~self.occupancy).sum())

    def in_bounds(self, p) -> bool:
        return 0 <= p[0] < self.width and 0 <= p[1] < self.height

    def is_free(self, p) -> bool:
        return self.in_bounds(p) and not self.occupancy[p[1], p[0]]

    def first_free(self) -> PixelPoint:
        """First free pixel in row-major order."""
        idx = int(np.flatnonzero(~self.occupancy.ravel())[0])
        y, x = divmod(idx, self.width)
        return PixelPoint(x, y)

    def restricted_to(self, mask: np.ndarray) -> "GridMap":
        """Copy where every pixel outside ``mask`` becomes an obstacle."""
        return GridMap(self.occupancy | ~mask, self.resolution)

    def field(self, source) -> tuple[np.ndarray, np.ndarray]:
        """Cached (distance, predecessor) arrays for a single source pixel."""
        key = (int(source[0]), int(source[1]))
        cached = self._fields.get(key)
        if cached is not None:
            return cached
        if not self.is_free(key):
            raise GeodesicError(f"pixel {key} is not a free pixel of the map")
        result = kernels.distance_field(self._blocked, key[0], key[1], float(self.resolution))
        with self._lock:
            self._fields.setdefault(key, result)
        return result

    def to_ascii(self) -> str:
        rows = ("".join("#" if v else "." for v in row) for row in self.occupancy)
        return "\n".join(rows) + "\n"

    def to_pgm(self) -> bytes:
        header = f"P5\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.where(self.occupancy, 0, 255).astype(np.uint8).tobytes()


# --------------------------------------------------------------------- loading

def load_map(source: bytes, format: str | None = None, resolution: float = 1.0) -> GridMap:
    """Parse a PGM (P2/P5) or ASCII ('#'/'.') map from raw bytes.

    ``format`` may be ``"pgm"``, ``"ascii"`` or None to sniff the magic number.
    """
    if format is None:
        format = "pgm" if source[:2] in (b"P2", b"P5") else "ascii"
    if format == "pgm":
        occ = _parse_pgm(source)
    elif format == "ascii":
        occ = _parse_ascii(source)
    else:
        raise MapFormatError(f"unknown map format {format!r}")
    if occ.all():
        raise MapFormatError("map has zero free pixels")
    return GridMap(occ, resolution)


def read_map(path, format: str | None = None, resolution: float = 1.0) -> GridMap:
    with open(path, "rb") as fh:
        data = fh.read()
    if format is None and str(path).lower().endswith((".pgm", ".pnm")):
        format = "pgm"
    return load_map(data, format, resolution)


_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    tokens = []
    pos = 0
    while len(tokens) < count:
        m = _TOKEN.match(data, pos)
        if m is None:
            raise MapFormatError(f"malformed PGM header: expected {count} fields, got {len(tokens)} (byte {pos})")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens, pos


def _parse_pgm(data: bytes) -> np.ndarray:
    tokens, pos = _header_tokens(data, 4)
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise MapFormatError(f"malformed PGM header: bad magic {magic!r} at byte 0")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise MapFormatError(f"malformed PGM header: non-integer field before byte {pos}") from None
    if width < 1 or height < 1:
        raise MapFormatError(f"malformed PGM header: dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise MapFormatError(f"malformed PGM header: maxval {maxval} not in 1..255")
    n = width * height
    if magic == b"P5":
        start = pos + 1  # exactly one whitespace byte after maxval
        payload = data[start:start + n]
        if len(payload) < n:
            raise MapFormatError(f"truncated PGM payload: expected {n} bytes at byte {start}, got {len(payload)}")
        values = np.frombuffer(payload, dtype=np.uint8)
    else:
        body = re.sub(rb"#[^\n]*", b"", data[pos:]).split()
        if len(body) < n:
            raise MapFormatError(f"truncated PGM payload: expected {n} values after byte {pos}, got {len(body)}")
        try:
            values = np.array([int(v) for v in body[:n]], dtype=np.int64)
        except ValueError:
            raise MapFormatError(f"malformed PGM payload after byte {pos}") from None
        if values.max(initial=0) > maxval or values.min(initial=0) < 0:
            raise MapFormatError(f"PGM value out of range 0..{maxval}")
    # scale to 0..255 before thresholding so maxval != 255 files binarize the same way
    scaled = values.astype(np.float64) * (255.0 / maxval)
    return (scaled < PGM_THRESHOLD).reshape(height, width)


def _parse_ascii(data: bytes) -> np.ndarray:
    text = data.decode("ascii", errors="replace")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [ln.rstrip("\r") for ln in lines]
    if not lines:
        raise MapFormatError("empty ASCII map")
    width = len(lines[0])
    if width == 0:
        raise MapFormatError("empty row at line 1")
    rows = []
    for lineno, line in enumerate(lines, start=1):
        if len(line) != width:
            raise MapFormatError(f"ragged row at line {lineno}: length {len(line)} != {width}")
        bad = set(line) - {"#", "."}
        if bad:
            col = min(line.index(c) for c in bad)
            raise MapFormatError(f"invalid character {line[col]!r} at line {lineno}, column {col + 1}")
        rows.append([c == "#" for c in line])
    return np.array(rows, dtype=bool)


# ---------------------------------------------------------------- connectivity

def free_components(grid: GridMap) -> list[np.ndarray]:
    """4-connected free components as boolean masks, largest first.

    Ties in size are broken by the row-major index of the first pixel.
    """
    labels, count = ndimage.label(~grid.occupancy, structure=_FOUR_CONNECTED)
    if count == 0:
        return []
    sizes = np.bincount(labels.ravel())[1:]
    flat = labels.ravel()
    first = np.full(count, flat.size, dtype=np.int64)
    nz = np.flatnonzero(flat)
    np.minimum.at(first, flat[nz] - 1, nz)
    order = sorted(range(count), key=lambda i: (-sizes[i], first[i]))
    return [labels == i + 1 for i in order]


# -------------------------------------------------------------------- geodesy

def octile_distance(a, b, resolution: float = 1.0) -> float:
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    lo = min(dx, dy)
    return (dx + dy - 2 * lo + math.sqrt(2.0) * lo) * resolution


def geodesic_distance(grid: GridMap, a, b) -> float:
    """Shortest 8-connected obstacle-avoiding path length (no corner cutting)."""
    _check_free(grid, a)
    _check_free(grid, b)
    dist, _ = grid.field(b)
    d = float(dist[a[1], a[0]])
    if math.isinf(d):
        raise GeodesicError(f"{tuple(a)} and {tuple(b)} lie in different free components")
    return d


def geodesic_path(grid: GridMap, a, b) -> list[PixelPoint]:
    """Waypoints of a shortest path from ``a`` to ``b`` inclusive."""
    _check_free(grid, a)
    _check_free(grid, b)
    dist, pred = grid.field(b)
    if math.isinf(dist[a[1], a[0]]):
        raise GeodesicError(f"{tuple(a)} and {tuple(b)} lie in different free components")
    w = grid.width
    path = [PixelPoint(int(a[0]), int(a[1]))]
    cur = a[1] * w + a[0]
    target = b[1] * w + b[0]
    flat_pred = pred.ravel()
    while cur != target:
        cur = int(flat_pred[cur])
        y, x = divmod(cur, w)
        path.append(PixelPoint(x, y))
    return path


def _check_free(grid: GridMap, p) -> None:
    if not grid.in_bounds(p):
        raise GeodesicError(f"pixel {tuple(p)} is outside the map")
    if grid.occupancy[p[1], p[0]]:
        raise GeodesicError(f"pixel {tuple(p)} is inside an obstacle")
