# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stroke kernels.

Arithmetic twin of _pure: the op order is identical so both backends
produce bit-equal strokes and canvases.
"""

from libc.math cimport ceil, floor, sqrt

import numpy as np

BACKEND = "c"

cdef double GRAD_EPS2 = 1e-12  # (1e-6)**2, matches _pure.GRAD_EPS


def grow_stroke(double[:, ::1] gx, double[:, ::1] gy,
                const unsigned char[:, :, ::1] ref,
                const unsigned char[:, :, ::1] canvas,
                int seed_x, int seed_y, int cr, int cg, int cb,
                int width, int min_points, int max_points, double color_tol):
    cdef int h = gx.shape[0]
    cdef int w = gx.shape[1]
    out = np.empty((max_points, 2), dtype=np.float64)
    cdef double[:, ::1] pts = out
    cdef double px = seed_x
    cdef double py = seed_y
    cdef double step = width
    cdef int n = 1
    cdef bint have_prev = False
    cdef double prev_ux = 0.0, prev_uy = 0.0
    cdef double gxv, gyv, mag2, mag, ux, uy, nx, ny, dc, dv
    cdef int ix, iy, jx, jy, rr, rg, rb, qr, qg, qb, dr0, dr1, dr2
    pts[0, 0] = px
    pts[0, 1] = py
    while n < max_points:
        ix = <int>floor(px + 0.5)
        iy = <int>floor(py + 0.5)
        gxv = gx[iy, ix]
        gyv = gy[iy, ix]
        mag2 = gxv * gxv + gyv * gyv
        if mag2 < GRAD_EPS2:
            if n >= min_points:
                break
            ux = 1.0
            uy = 0.0
        else:
            mag = sqrt(mag2)
            ux = -gyv / mag
            uy = gxv / mag
            if have_prev and (ux * prev_ux + uy * prev_uy) < 0.0:
                ux = -ux
                uy = -uy
        nx = px + step * ux
        ny = py + step * uy
        if not (0.0 <= nx <= w - 1.0 and 0.0 <= ny <= h - 1.0):
            break
        jx = <int>floor(nx + 0.5)
        jy = <int>floor(ny + 0.5)
        rr = ref[jy, jx, 0]
        rg = ref[jy, jx, 1]
        rb = ref[jy, jx, 2]
        dr0 = rr - cr
        dr1 = rg - cg
        dr2 = rb - cb
        dc = sqrt(<double>(dr0 * dr0 + dr1 * dr1 + dr2 * dr2))
        qr = canvas[jy, jx, 0]
        qg = canvas[jy, jx, 1]
        qb = canvas[jy, jx, 2]
        dr0 = rr - qr
        dr1 = rg - qg
        dr2 = rb - qb
        dv = sqrt(<double>(dr0 * dr0 + dr1 * dr1 + dr2 * dr2))
        if dc > dv + color_tol:
            break
        pts[n, 0] = nx
        pts[n, 1] = ny
        px = nx
        py = ny
        prev_ux = ux
        prev_uy = uy
        have_prev = True
        n += 1
    return out[:n].copy()


cdef inline void _stamp(unsigned char[:, :, ::1] canvas, int h, int w,
                        int cx, int cy, int cr, int cg, int cb,
                        int width) noexcept:
    cdef int r = width // 2
    cdef int dx, dy, x, y
    for dy in range(-r, r + 1):
        y = cy + dy
        if y < 0 or y >= h:
            continue
        for dx in range(-r, r + 1):
            x = cx + dx
            if x < 0 or x >= w:
                continue
            if 4 * (dx * dx + dy * dy) <= width * width:
                canvas[y, x, 0] = <unsigned char>cr
                canvas[y, x, 1] = <unsigned char>cg
                canvas[y, x, 2] = <unsigned char>cb


def stamp_polyline(unsigned char[:, :, ::1] canvas, double[:, ::1] pts,
                   int cr, int cg, int cb, int width):
    cdef int h = canvas.shape[0]
    cdef int w = canvas.shape[1]
    cdef int n = pts.shape[0]
    cdef int i, t, steps
    cdef double ax, ay, bx, by, dist, f
    _stamp(canvas, h, w, <int>floor(pts[0, 0] + 0.5), <int>floor(pts[0, 1] + 0.5),
           cr, cg, cb, width)
    for i in range(n - 1):
        ax = pts[i, 0]
        ay = pts[i, 1]
        bx = pts[i + 1, 0]
        by = pts[i + 1, 1]
        dist = sqrt((bx - ax) * (bx - ax) + (by - ay) * (by - ay))
        steps = <int>ceil(dist)
        if steps < 1:
            steps = 1
        for t in range(1, steps + 1):
            f = (<double>t) / (<double>steps)
            _stamp(canvas, h, w,
                   <int>floor(ax + (bx - ax) * f + 0.5),
                   <int>floor(ay + (by - ay) * f + 0.5),
                   cr, cg, cb, width)
