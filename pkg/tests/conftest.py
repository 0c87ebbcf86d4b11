"""Shared synthetic scenes for the test suite.

Scenes follow one shape: a background "stuff" band with a vertical
depth ramp, plus rectangular uniform-color "things" that span most rows
so their seeds spread across all depth bins.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

from layerpaint.imagecore import (
    NEARER_HIGH,
    DepthMap,
    Image,
    Prediction,
    Segmentation,
    save_depth,
    save_image,
    save_labels,
)


@dataclass
class Scene:
    image: Image
    depth: DepthMap
    seg: Segmentation


def build_scene(width: int, height: int,
                thing_rects: list[tuple[int, int, int, int]] | None = None,
                thing_colors: list[tuple[int, int, int]] | None = None,
                depth_power: float = 2.0) -> Scene:
    """Synthetic scene: colored rectangles over a vertical color ramp,
    with depth = (y / (height-1)) ** depth_power and nearer-high
    orientation (small values are far away)."""
    if thing_rects is None:
        w8, h8 = width // 8, height // 16
        thing_rects = [
            (w8, h8, 3 * w8, height - h8),
            (4 * w8 + w8 // 2, h8 // 2, 7 * w8, height - 2 * h8),
        ]
    if thing_colors is None:
        thing_colors = [(200, 40, 40), (40, 60, 200)][: len(thing_rects)]

    pix = np.zeros((height, width, 3), np.uint8)
    ramp = np.linspace(70, 190, height).astype(np.uint8)
    pix[:, :, 0] = ramp[:, None]
    pix[:, :, 1] = 130
    pix[:, :, 2] = (255 - ramp)[:, None]

    labels = np.full((height, width), len(thing_rects), np.int32)
    preds = []
    for i, ((x0, y0, x1, y1), color) in enumerate(zip(thing_rects, thing_colors)):
        pix[y0:y1, x0:x1] = color
        labels[y0:y1, x0:x1] = i
        area = int((labels == i).sum())
        score = 0.9 - 0.1 * i
        preds.append(Prediction(i, "thing", score, "box", 0, area, score * area))
    bg_id = len(thing_rects)
    bg_area = int((labels == bg_id).sum())
    preds.append(Prediction(bg_id, "stuff", 1.0, "background", 9, bg_area,
                            float(bg_area)))

    yy = (np.arange(height) / (height - 1.0)) ** depth_power
    depth = DepthMap.from_array(np.repeat(yy[:, None], width, axis=1), NEARER_HIGH)
    return Scene(image=Image.from_array(pix), depth=depth,
                 seg=Segmentation(labels, preds))


def write_scene(scene: Scene, directory: Path) -> dict[str, Path]:
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "image": directory / "scene.png",
        "depth": directory / "scene.pgm",
        "labels": directory / "scene_labels.png",
        "meta": directory / "scene_meta.json",
    }
    save_image(scene.image, paths["image"])
    save_depth(scene.depth, paths["depth"])
    save_labels(scene.seg, paths["labels"], paths["meta"])
    return paths


@pytest.fixture()
def small_scene() -> Scene:
    return build_scene(160, 128)


@pytest.fixture(scope="session")
def small_scene_files(tmp_path_factory) -> dict[str, Path]:
    return write_scene(build_scene(160, 128), tmp_path_factory.mktemp("scene"))
