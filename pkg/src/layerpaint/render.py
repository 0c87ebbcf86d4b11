"""Deterministic rasterization of stroke plans with progress snapshots."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import _kernels as kernels
from .errors import OutputError
from .imagecore import Image, save_image
from .strokes import Stroke, StrokePlan, white_canvas


def raster_stroke(canvas: np.ndarray, stroke: Stroke) -> np.ndarray:
    """Draw one stroke as stamped opaque discs; returns the same canvas."""
    kernels.stamp_polyline(canvas, stroke.points, stroke.color, stroke.width_px)
    return canvas


def render_strokes(plan: StrokePlan, upto: int | None = None) -> Image:
    """Render the first `upto` strokes (all by default) on a fresh canvas."""
    w, h = plan.canvas_size
    canvas = white_canvas(w, h)
    strokes = plan.strokes if upto is None else plan.strokes[:upto]
    for s in strokes:
        raster_stroke(canvas, s)
    return Image.from_array(canvas)


def default_snapshots(n: int) -> list[int]:
    """Snapshot cadence: 50, 250, 500, 1000, then every 500 strokes."""
    counts = [c for c in (50, 250, 500, 1000) if c < n]
    c = 1500
    while c < n:
        counts.append(c)
        c += 500
    return counts


def render_plan(plan: StrokePlan, snapshot_at: list[int],
                out_dir: str | Path) -> tuple[Image, dict[int, Path]]:
    """Render the full plan, saving frame{count:04}.png snapshots and
    painting.png; returns the final image and the snapshot paths."""
    if sorted(snapshot_at) != list(snapshot_at):
        raise ValueError("snapshot counts must be ascending")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(f"cannot create output directory {out_dir}: {e}") from e

    w, h = plan.canvas_size
    canvas = white_canvas(w, h)
    pending = [c for c in snapshot_at if c <= len(plan.strokes)]
    snapshots: dict[int, Path] = {}
    try:
        for i, s in enumerate(plan.strokes, start=1):
            raster_stroke(canvas, s)
            if pending and i == pending[0]:
                path = out_dir / f"frame{i:04}.png"
                save_image(Image.from_array(canvas.copy()), path)
                snapshots[i] = path
                pending.pop(0)
        final = Image.from_array(canvas)
        save_image(final, out_dir / "painting.png")
    except OSError as e:
        raise OutputError(f"cannot write into {out_dir}: {e}") from e
    return final, snapshots
