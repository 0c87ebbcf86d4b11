"""Pure-Python stroke kernels.

This is the fallback backend and the arithmetic reference for the
compiled twin in _core.pyx: every floating-point operation here must
appear in the same order there (Python floats and C doubles share IEEE
semantics, so matching the op order makes the two backends bit-equal).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "pure"

# Gradient magnitudes below this are treated as zero (flat region).
GRAD_EPS = 1e-6
_GRAD_EPS2 = GRAD_EPS * GRAD_EPS

_DISC_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def grow_stroke(gx, gy, ref, canvas, seed_x, seed_y, cr, cg, cb,
                width, min_points, max_points, color_tol):
    """Grow one polyline from a seed, perpendicular to the luma gradient.

    Stops at max_points; when the canvas already matches the reference
    better than the stroke color would (beyond color_tol); or in a flat
    region once min_points is reached (flat steps fall back to
    horizontal). Steps leaving the image end the stroke. Returns the
    points as a (n, 2) float64 array of (x, y).
    """
    h, w = gx.shape
    px = float(seed_x)
    py = float(seed_y)
    step = float(width)
    pts = [(px, py)]
    have_prev = False
    prev_ux = 0.0
    prev_uy = 0.0
    while len(pts) < max_points:
        ix = int(math.floor(px + 0.5))
        iy = int(math.floor(py + 0.5))
        gxv = float(gx[iy, ix])
        gyv = float(gy[iy, ix])
        mag2 = gxv * gxv + gyv * gyv
        if mag2 < _GRAD_EPS2:
            if len(pts) >= min_points:
                break
            ux, uy = 1.0, 0.0
        else:
            mag = math.sqrt(mag2)
            ux = -gyv / mag
            uy = gxv / mag
            # pick the gradient-perpendicular sign with the smaller turn
            if have_prev and (ux * prev_ux + uy * prev_uy) < 0.0:
                ux = -ux
                uy = -uy
        nx = px + step * ux
        ny = py + step * uy
        if not (0.0 <= nx <= w - 1.0 and 0.0 <= ny <= h - 1.0):
            break
        jx = int(math.floor(nx + 0.5))
        jy = int(math.floor(ny + 0.5))
        rr = int(ref[jy, jx, 0])
        rg = int(ref[jy, jx, 1])
        rb = int(ref[jy, jx, 2])
        dc = math.sqrt(float((rr - cr) ** 2 + (rg - cg) ** 2 + (rb - cb) ** 2))
        qr = int(canvas[jy, jx, 0])
        qg = int(canvas[jy, jx, 1])
        qb = int(canvas[jy, jx, 2])
        dv = math.sqrt(float((rr - qr) ** 2 + (rg - qg) ** 2 + (rb - qb) ** 2))
        if dc > dv + color_tol:
            break
        pts.append((nx, ny))
        px, py = nx, ny
        prev_ux, prev_uy = ux, uy
        have_prev = True
    return np.array(pts, dtype=np.float64)


def _disc_offsets(width: int) -> tuple[np.ndarray, np.ndarray]:
    cached = _DISC_CACHE.get(width)
    if cached is None:
        r = width // 2
        dy, dx = np.mgrid[-r:r + 1, -r:r + 1]
        keep = 4 * (dx * dx + dy * dy) <= width * width
        cached = (dy[keep].ravel(), dx[keep].ravel())
        _DISC_CACHE[width] = cached
    return cached


def stamp_polyline(canvas, pts, cr, cg, cb, width):
    """Stamp an opaque disc of diameter `width` along a polyline in place.

    Positions are interpolated at spacing <= 1 px per segment; discs are
    clipped at the canvas edges. Overwrites are idempotent, so the
    vectorized clipping here matches the compiled per-pixel loop.
    """
    h, w = canvas.shape[:2]
    offy, offx = _disc_offsets(width)
    color = np.array([cr, cg, cb], dtype=np.uint8)

    def stamp(cx: int, cy: int) -> None:
        ys = offy + cy
        xs = offx + cx
        keep = (ys >= 0) & (ys < h) & (xs >= 0) & (xs < w)
        canvas[ys[keep], xs[keep]] = color

    n = len(pts)
    stamp(int(math.floor(pts[0, 0] + 0.5)), int(math.floor(pts[0, 1] + 0.5)))
    for i in range(n - 1):
        ax = float(pts[i, 0])
        ay = float(pts[i, 1])
        bx = float(pts[i + 1, 0])
        by = float(pts[i + 1, 1])
        dist = math.sqrt((bx - ax) * (bx - ax) + (by - ay) * (by - ay))
        steps = max(1, int(math.ceil(dist)))
        for t in range(1, steps + 1):
            f = t / steps
            stamp(int(math.floor(ax + (bx - ax) * f + 0.5)),
                  int(math.floor(ay + (by - ay) * f + 0.5)))
