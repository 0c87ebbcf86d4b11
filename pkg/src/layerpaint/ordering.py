"""Frame construction and the full depth-layered seed plan.

A frame is the subset of one prediction's seeds whose smoothed depth
falls in one histogram bin. Frames are emitted per prediction in
back-to-front bin order, and the seeds inside a frame are sorted by a
coarse grid cell (row-major) and then by (y, x), which keeps the pen in
one area for a while instead of scanning.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import depth as depthmod
from . import segmentation as segmod
from .imagecore import DepthMap, Image, Segmentation


@dataclass
class Frame:
    prediction_id: int
    bin_index: int
    seeds: np.ndarray  # (n, 2) int32 (x, y), sorted


@dataclass
class SeedPlan:
    frames: list[Frame]
    grid_dims: tuple[int, int]  # (rows, cols)

    def total_seeds(self) -> int:
        return sum(len(f.seeds) for f in self.frames)


def grid_cell(x: int, y: int, grid_dims: tuple[int, int],
              width: int, height: int) -> tuple[int, int]:
    rows, cols = grid_dims
    return (rows * y // height, cols * x // width)


def compute_frames(hist: depthmod.DepthHistogram, seed_set: segmod.SeedSet,
                   smoothed: DepthMap, grid_dims: tuple[int, int],
                   width: int, height: int) -> list[Frame]:
    """Split one seed set into per-bin frames, sorted grid-major.

    Sort key inside a frame: (cell row, cell col, y, x) ascending, with
    cell = (rows*y // height, cols*x // width). Empty frames are dropped.
    """
    rows, cols = grid_dims
    if rows < 1 or cols < 1:
        raise ValueError("grid_dims must be >= (1, 1)")
    seeds = seed_set.seeds
    if len(seeds) == 0:
        return []
    xs = seeds[:, 0].astype(np.int64)
    ys = seeds[:, 1].astype(np.int64)
    vals = smoothed.values[ys, xs]
    bins = depthmod.bins_of(vals, hist)
    cell_r = rows * ys // height
    cell_c = cols * xs // width

    frames = []
    for b in hist.traversal:
        sel = np.nonzero(bins == b)[0]
        if len(sel) == 0:
            continue
        order = np.lexsort((xs[sel], ys[sel], cell_c[sel], cell_r[sel]))
        frames.append(Frame(prediction_id=seed_set.prediction_id, bin_index=int(b),
                            seeds=seeds[sel[order]]))
    return frames


def _trim_excess(frames: list[Frame], budgets: dict[int, int], excess: int) -> list[Frame]:
    # Drops seeds from the final frames of the largest-budget predictions.
    # Only reachable when the minimum-1 rule forces the total above n.
    order = sorted(budgets, key=lambda pid: (-budgets[pid], pid))
    counts = {pid: sum(len(f.seeds) for f in frames if f.prediction_id == pid)
              for pid in order}
    for pid in order:
        while excess > 0 and counts[pid] > 1:
            last = max(i for i, f in enumerate(frames) if f.prediction_id == pid)
            f = frames[last]
            if len(f.seeds) == 1:
                frames.pop(last)
            else:
                frames[last] = Frame(f.prediction_id, f.bin_index, f.seeds[:-1])
            counts[pid] -= 1
            excess -= 1
    if excess > 0:
        for i in range(len(frames) - 1, -1, -1):
            if excess == 0:
                break
            frames.pop(i)
            excess -= 1
    return frames


def layered_depth_plan(image: Image, seg: Segmentation, depth: DepthMap,
                       n: int, sigma: float | None = None, bin_count: int = 8,
                       grid_dims: tuple[int, int] = (5, 5),
                       equal_population: bool = False,
                       interleave_first_k: int = 0) -> SeedPlan:
    """Build the complete ordered seed plan for an image.

    Pipeline: order predictions, smooth the depth map, build its global
    histogram, then per prediction compute its budget, superpixels, and
    centroid seeds, and append that prediction's frames back-to-front.
    Total seeds never exceed n.

    interleave_first_k > 0 switches to an alternative global order that
    emits the first k depth layers of every thing before continuing
    with the remaining frames (off by default).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if sigma is None:
        sigma = depthmod.default_sigma(image)
    ordered = segmod.order_predictions(seg)
    smoothed = depthmod.smooth_depth(depth, sigma)
    hist = depthmod.build_histogram(smoothed, bin_count,
                                    equal_population=equal_population)
    budgets = segmod.allocate_budgets(seg, image, n)

    per_pred: list[tuple[int, list[Frame]]] = []
    for p in ordered:
        budget = budgets.get(p.id, 0)
        if budget < 1:
            continue
        mask = seg.mask_of(p.id)
        regions = segmod.superpixels(image, mask, budget)
        seed_set = segmod.region_centroids(regions, mask, p.id)
        frames = compute_frames(hist, seed_set, smoothed, grid_dims,
                                image.width, image.height)
        per_pred.append((p.id, frames))

    frames = [f for _, fs in per_pred for f in fs]
    excess = sum(len(f.seeds) for f in frames) - n
    if excess > 0:
        frames = _trim_excess(frames, budgets, excess)

    if interleave_first_k > 0:
        thing_ids = {p.id for p in ordered if p.kind == "thing"}
        pos = {b: i for i, b in enumerate(hist.traversal)}
        def is_early(f: Frame) -> bool:
            return f.prediction_id in thing_ids and pos[f.bin_index] < interleave_first_k

        frames = [f for f in frames if is_early(f)] + \
                 [f for f in frames if not is_early(f)]

    return SeedPlan(frames=frames, grid_dims=grid_dims)


def save_seed_plan(plan: SeedPlan, path: str | Path) -> None:
    payload = {
        "grid": [plan.grid_dims[0], plan.grid_dims[1]],
        "frames": [
            {"predictionId": f.prediction_id, "binIndex": f.bin_index,
             "seeds": [[int(x), int(y)] for x, y in f.seeds]}
            for f in plan.frames
        ],
    }
    Path(path).write_text(json.dumps(payload) + "\n")


def load_seed_plan(path: str | Path) -> SeedPlan:
    payload = json.loads(Path(path).read_text())
    frames = [
        Frame(prediction_id=f["predictionId"], bin_index=f["binIndex"],
              seeds=np.array(f["seeds"], dtype=np.int32).reshape(-1, 2))
        for f in payload["frames"]
    ]
    return SeedPlan(frames=frames, grid_dims=(payload["grid"][0], payload["grid"][1]))
