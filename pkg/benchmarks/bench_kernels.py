"""Benchmark the compiled stroke kernels against the pure-Python fallback.

Workload: grow + stamp 2000 strokes on a 640x512 synthetic scene, the
same shape as the standard structural run. Both backends are also
checked for bit-identical output, since backend choice must never
change results.

Run:  python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from layerpaint._kernels import _pure
from layerpaint.filters import binomial_blur3, luma, sobel_xy

try:
    from layerpaint._kernels import _core
except ImportError:
    _core = None

N_STROKES = 2000
WIDTH = 6
REPEATS = 3


def build_workload(seed: int = 0):
    rng = np.random.default_rng(seed)
    h, w = 512, 640
    ref = np.zeros((h, w, 3), np.uint8)
    ramp = np.linspace(60, 200, h).astype(np.uint8)
    ref[:, :, 0] = ramp[:, None]
    ref[:, :, 1] = 120
    ref[:, :, 2] = (255 - ramp)[:, None]
    ref[40:500, 60:280] = (200, 40, 40)
    ref[10:470, 360:580] = (40, 60, 200)
    ref = np.clip(ref.astype(np.int16)
                  + rng.integers(-12, 13, ref.shape, dtype=np.int16),
                  0, 255).astype(np.uint8)
    seeds = np.stack([rng.integers(0, w, N_STROKES),
                      rng.integers(0, h, N_STROKES)], axis=1)
    gx, gy = sobel_xy(binomial_blur3(luma(ref)))
    return ref, gx, gy, seeds


def run_backend(impl, ref, gx, gy, seeds):
    canvas = np.full_like(ref, 255)
    all_pts = []
    t0 = time.perf_counter()
    for sx, sy in seeds:
        r, g, b = (int(v) for v in ref[sy, sx])
        pts = impl.grow_stroke(gx, gy, ref, canvas, int(sx), int(sy),
                               r, g, b, WIDTH, 2, 12, 0.0)
        impl.stamp_polyline(canvas, pts, r, g, b, WIDTH)
        all_pts.append(pts)
    return time.perf_counter() - t0, canvas, all_pts


def main() -> int:
    ref, gx, gy, seeds = build_workload()
    backends = [("pure", _pure)] + ([("c", _core)] if _core else [])
    results = {}
    for name, impl in backends:
        best = min(run_backend(impl, ref, gx, gy, seeds)[0]
                   for _ in range(REPEATS))
        results[name] = best

    print(f"workload: {N_STROKES} strokes, width {WIDTH}, 640x512 canvas "
          f"(best of {REPEATS})")
    for name, secs in results.items():
        rate = N_STROKES / secs
        print(f"  {name:>4}: {secs * 1e3:8.1f} ms   {rate:10.0f} strokes/s")
    if _core is None:
        print("  (compiled backend not built; install with "
              "`pip install -e . --no-build-isolation`)")
        return 0

    print(f"  speedup: {results['pure'] / results['c']:.1f}x")

    _, canvas_p, pts_p = run_backend(_pure, ref, gx, gy, seeds)
    _, canvas_c, pts_c = run_backend(_core, ref, gx, gy, seeds)
    identical = (canvas_p == canvas_c).all() and all(
        np.array_equal(a, b) for a, b in zip(pts_p, pts_c))
    print(f"  outputs bit-identical: {identical}")
    return 0 if identical else 1


if __name__ == "__main__":
    raise SystemExit(main())
