"""Hot stroke kernels: compiled core with a pure-Python fallback.

The Cython extension is picked at import time when present; otherwise
the pure backend takes over. Both produce bit-identical results. Set
LAYERPAINT_KERNELS to "c" or "pure" to force a backend ("c" raises if
the extension was not built).
"""

from __future__ import annotations

import os

import numpy as np

from . import _pure

GRAD_EPS = _pure.GRAD_EPS

_choice = os.environ.get("LAYERPAINT_KERNELS", "auto")
if _choice == "pure":
    _impl = _pure
elif _choice == "c":
    from . import _core as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND: str = _impl.BACKEND


def grow_stroke(gx: np.ndarray, gy: np.ndarray, ref: np.ndarray,
                canvas: np.ndarray, seed_x: int, seed_y: int,
                color: tuple[int, int, int], width: int, min_points: int,
                max_points: int, color_tol: float) -> np.ndarray:
    """Grow one stroke polyline; see _pure.grow_stroke for the rules."""
    return _impl.grow_stroke(gx, gy, ref, canvas, int(seed_x), int(seed_y),
                             int(color[0]), int(color[1]), int(color[2]),
                             int(width), int(min_points), int(max_points),
                             float(color_tol))


def stamp_polyline(canvas: np.ndarray, pts: np.ndarray,
                   color: tuple[int, int, int], width: int) -> None:
    """Stamp opaque discs along a polyline into `canvas` (in place)."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    _impl.stamp_polyline(canvas, pts, int(color[0]), int(color[1]),
                         int(color[2]), int(width))
