"""Stroke generation: ordered seeds become drawable polylines.

Each stroke takes the reference color at its seed (palette-quantized
when a palette is active) and grows perpendicular to the local luma
gradient in steps of one stroke-width. Strokes are generated strictly
in plan order against a working canvas that is updated after every
stroke, so the stopping rule sees what has already been painted. That
feedback loop makes this module inherently sequential.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels as kernels
from . import filters
from .imagecore import Image
from .ordering import SeedPlan
from .palette import Palette, quantize


@dataclass
class StrokeParams:
    width_px: int = 6
    min_points: int = 2
    max_points: int = 12
    color_tolerance: float = 0.0


@dataclass
class Stroke:
    points: np.ndarray              # (n, 2) float64 (x, y)
    width_px: int
    color: tuple[int, int, int]
    color_index: int | None         # palette index, None in unrestricted mode
    seed: tuple[int, int]
    frame_index: int
    prediction_id: int
    bin_index: int


@dataclass
class StrokePlan:
    strokes: list[Stroke]
    canvas_size: tuple[int, int]    # (width, height)
    palette: Palette | None = None


def gradient_field(image: Image) -> tuple[np.ndarray, np.ndarray]:
    """Sobel gradient of the 3x3-blurred luma, precomputed once per image."""
    return filters.sobel_xy(filters.binomial_blur3(filters.luma(image.pixels)))


def white_canvas(width: int, height: int) -> np.ndarray:
    return np.full((height, width, 3), 255, dtype=np.uint8)


def generate_stroke(seed: tuple[int, int], ref: Image, canvas: np.ndarray,
                    params: StrokeParams, palette: Palette | None = None,
                    gradient: tuple[np.ndarray, np.ndarray] | None = None,
                    frame_index: int = 0, prediction_id: int = 0,
                    bin_index: int = 0) -> Stroke:
    """Grow a single stroke from one seed against the given canvas state."""
    sx, sy = int(seed[0]), int(seed[1])
    rgb = ref.pixels[sy, sx]
    if palette is not None:
        ci = quantize(rgb, palette)
        color = tuple(int(c) for c in palette.colors[ci])
    else:
        ci = None
        color = (int(rgb[0]), int(rgb[1]), int(rgb[2]))
    gx, gy = gradient if gradient is not None else gradient_field(ref)
    pts = kernels.grow_stroke(gx, gy, ref.pixels, canvas, sx, sy, color,
                              params.width_px, params.min_points,
                              params.max_points, params.color_tolerance)
    return Stroke(points=pts, width_px=params.width_px, color=color,
                  color_index=ci, seed=(sx, sy), frame_index=frame_index,
                  prediction_id=prediction_id, bin_index=bin_index)


def generate_all(plan: SeedPlan, ref: Image, palette: Palette | None = None,
                 params: StrokeParams | None = None) -> StrokePlan:
    """Generate every stroke in plan order with canvas feedback.

    The stroke sequence matches the seed sequence one-to-one; each
    stroke is stamped onto the working canvas before the next grows.
    """
    params = params or StrokeParams()
    gx, gy = gradient_field(ref)
    canvas = white_canvas(ref.width, ref.height)
    strokes: list[Stroke] = []
    for fi, frame in enumerate(plan.frames):
        for seed in frame.seeds:
            s = generate_stroke((seed[0], seed[1]), ref, canvas, params,
                                palette=palette, gradient=(gx, gy),
                                frame_index=fi, prediction_id=frame.prediction_id,
                                bin_index=frame.bin_index)
            kernels.stamp_polyline(canvas, s.points, s.color, s.width_px)
            strokes.append(s)
    return StrokePlan(strokes=strokes, canvas_size=(ref.width, ref.height),
                      palette=palette)


def save_stroke_plan(plan: StrokePlan, path: str | Path) -> None:
    """JSON Lines export, one stroke per line."""
    with open(path, "w") as fh:
        for i, s in enumerate(plan.strokes):
            rec = {
                "i": i,
                "pred": s.prediction_id,
                "bin": s.bin_index,
                "color": [s.color[0], s.color[1], s.color[2]],
                "w": s.width_px,
                "pts": [[float(x), float(y)] for x, y in s.points],
            }
            fh.write(json.dumps(rec) + "\n")


def load_stroke_plan(path: str | Path, canvas_size: tuple[int, int],
                     palette: Palette | None = None) -> StrokePlan:
    strokes = []
    with open(path) as fh:
        for line in fh:
            rec = json.loads(line)
            pts = np.array(rec["pts"], dtype=np.float64).reshape(-1, 2)
            strokes.append(Stroke(
                points=pts, width_px=rec["w"],
                color=(rec["color"][0], rec["color"][1], rec["color"][2]),
                color_index=None, seed=(int(pts[0, 0]), int(pts[0, 1])),
                frame_index=0, prediction_id=rec["pred"], bin_index=rec["bin"]))
    return StrokePlan(strokes=strokes, canvas_size=canvas_size, palette=palette)
