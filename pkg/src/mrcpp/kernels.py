"""Backend selection for the grid Dijkstra kernel.

The compiled extension is used when importable; set ``MRCPP_PURE_PYTHON=1``
to force the pure-Python implementation.
"""
from __future__ import annotations

import os

from . import _geodesic_py

BACKEND = "python"
distance_field = _geodesic_py.distance_field

if os.environ.get("MRCPP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _geodesic  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on build
        pass
    else:
        distance_field = _geodesic.distance_field
        BACKEND = "cython"

__all__ = ["BACKEND", "distance_field"]
