"""SVG rendering of coverage plans, one user unit per map pixel."""
from __future__ import annotations

import colorsys
from typing import Sequence

import numpy as np

from .gridmap import GridMap
from .pathgen import COVER, CoveragePlan


def _palette(n: int = 32) -> tuple[str, ...]:
    out = []
    for i in range(n):
        h = (i * 0.618033988749895) % 1.0
        light = 0.42 if i % 2 else 0.55
        r, g, b = colorsys.hls_to_rgb(h, light, 0.75)
        out.append(f"#{round(r * 255):02x}{round(g * 255):02x}{round(b * 255):02x}")
    return tuple(out)


PALETTE = _palette()


def _obstacle_rects(occ: np.ndarray) -> list[str]:
    rects = []
    for y, row in enumerate(occ):
        x, w = 0, len(row)
        while x < w:
            if not row[x]:
                x += 1
                continue
            x0 = x
            while x < w and row[x]:
                x += 1
            rects.append(f'<rect x="{x0}" y="{y}" width="{x - x0}" height="1"/>')
    return rects


def _runs(waypoints: Sequence) -> list[tuple[str, list]]:
    """Split a waypoint list into maximal same-kind polylines sharing endpoints."""
    runs: list[tuple[str, list]] = []
    for a, b in zip(waypoints, waypoints[1:]):
        kind = b[2]
        if runs and runs[-1][0] == kind:
            runs[-1][1].append(b)
        else:
            runs.append((kind, [a, b]))
    return runs


def plan_svg(plan: CoveragePlan, grid: GridMap) -> str:
    w, h = grid.width, grid.height
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="#ffffff"/>',
        '<g fill="#202020">',
        *_obstacle_rects(grid.occupancy),
        "</g>",
    ]
    for r in plan.robots:
        if not r.waypoints:
            continue
        color = PALETTE[r.id % len(PALETTE)]
        parts.append(f'<g id="robot-{r.id}" stroke="{color}" fill="none" stroke-width="0.3" stroke-linejoin="round">')
        for kind, pts in _runs(r.waypoints):
            coords = " ".join(f"{p[0] + 0.5:g},{p[1] + 0.5:g}" for p in pts)
            dash = "" if kind == COVER else ' stroke-dasharray="0.8 0.6"'
            parts.append(f'<polyline class="{kind}" points="{coords}"{dash}/>')
        parts.append("</g>")
    sx, sy = plan.start
    parts.append(f'<circle cx="{sx + 0.5}" cy="{sy + 0.5}" r="1" fill="#000000"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
