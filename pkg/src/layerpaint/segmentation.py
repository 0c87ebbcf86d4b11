"""Prediction ordering, seed budgets, and superpixel seed placement.

Painting order: things first, sorted by decreasing weight (confidence x
area), then stuff in ascending semantic-group order. Each region's seed
budget is its share of the total stroke count; seeds are the centroids
of marker-controlled watershed superpixels computed on the luma
gradient inside the region's mask.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.ndimage import distance_transform_edt
from skimage.segmentation import watershed

from . import filters
from .imagecore import Image, Prediction, Segmentation


@dataclass
class SuperpixelRegions:
    """Dense region ids covering one mask; -1 outside the mask."""

    region_map: np.ndarray  # (height, width) int32
    region_count: int


@dataclass
class SeedSet:
    """Stroke seed pixels for one prediction, ordered by region id."""

    prediction_id: int
    seeds: np.ndarray  # (n, 2) int32 (x, y)


def order_predictions(seg: Segmentation) -> list[Prediction]:
    """Painting order: things by weight desc (tie: area desc, id asc),
    then stuff by semantic group asc (tie: id asc)."""
    things = [p for p in seg.predictions if p.kind == "thing"]
    stuff = [p for p in seg.predictions if p.kind == "stuff"]
    things.sort(key=lambda p: (-p.weight, -p.area, p.id))
    stuff.sort(key=lambda p: (p.semantic_group, p.id))
    return things + stuff


def seed_budget(prediction: Prediction, image: Image, n: int) -> int:
    """Uncorrected per-prediction budget: round-half-up share of n, min 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if prediction.area < 1:
        return 0
    frac = prediction.area / (image.width * image.height) * n
    return max(1, int(np.floor(frac + 0.5)))


def allocate_budgets(seg: Segmentation, image: Image, n: int) -> dict[int, int]:
    """Per-prediction budgets summing to exactly n (when feasible).

    Rounding starts from seed_budget; a correction pass then trims units
    from budgets that rounded up (largest error first, then largest
    budget) or tops up budgets that rounded down, keeping every nonzero
    region at >= 1. With more regions than n the minimum wins and the
    sum stays above n; the planner trims the excess seeds later.
    """
    preds = [p for p in seg.predictions if p.area >= 1]
    total_px = image.width * image.height
    frac = {p.id: p.area / total_px * n for p in preds}
    alloc = {p.id: seed_budget(p, image, n) for p in preds}
    by_pred = {p.id: p for p in preds}

    diff = sum(alloc.values()) - n
    while diff > 0:
        candidates = [pid for pid, b in alloc.items() if b >= 2]
        if not candidates:
            break
        pid = max(candidates,
                  key=lambda i: (alloc[i] - frac[i], alloc[i], by_pred[i].area, -i))
        alloc[pid] -= 1
        diff -= 1
    while diff < 0:
        pid = max(alloc,
                  key=lambda i: (frac[i] - alloc[i], by_pred[i].area, -i))
        alloc[pid] += 1
        diff += 1
    return alloc


def farthest_point_markers(mask: np.ndarray, count: int) -> np.ndarray:
    """Spread `count` marker pixels over a mask by farthest-point sampling.

    Starts at the lowest-index mask pixel; every later marker maximizes
    the minimum squared distance to the chosen set (first occurrence
    wins ties). Integer arithmetic keeps the result exact.
    """
    ys, xs = np.nonzero(mask)
    m = len(ys)
    if m == 0:
        raise ValueError("mask is empty")
    count = min(count, m)
    xs64 = xs.astype(np.int64)
    ys64 = ys.astype(np.int64)
    chosen = [0]
    d2 = (xs64 - xs64[0]) ** 2 + (ys64 - ys64[0]) ** 2
    for _ in range(count - 1):
        j = int(d2.argmax())
        chosen.append(j)
        nd2 = (xs64 - xs64[j]) ** 2 + (ys64 - ys64[j]) ** 2
        np.minimum(d2, nd2, out=d2)
    pts = np.stack([xs[chosen], ys[chosen]], axis=1)
    return pts.astype(np.int32)


def superpixels(image: Image, mask: np.ndarray, count: int) -> SuperpixelRegions:
    """Partition a mask into `count` watershed regions on the luma gradient.

    Markers come from farthest-point sampling, so each marker grows one
    region and ids stay dense. Connected components the flood cannot
    reach (disjoint mask pieces without a marker) are assigned to the
    nearest labeled pixel afterwards, keeping coverage exact.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    area = int(mask.sum())
    if area == 0:
        raise ValueError("mask is empty")
    count = min(count, area)

    grad = filters.sobel_magnitude(filters.luma(image.pixels))
    marker_pts = farthest_point_markers(mask, count)
    markers = np.zeros(mask.shape, dtype=np.int32)
    markers[marker_pts[:, 1], marker_pts[:, 0]] = np.arange(1, count + 1)

    labels = watershed(grad, markers=markers, mask=mask)
    unreached = mask & (labels == 0)
    if unreached.any():
        iy, ix = distance_transform_edt(labels == 0, return_distances=False,
                                        return_indices=True)
        labels = np.where(unreached, labels[iy, ix], labels)

    region_map = np.where(mask, labels - 1, -1).astype(np.int32)
    return SuperpixelRegions(region_map=region_map, region_count=count)


def region_centroids(regions: SuperpixelRegions, mask: np.ndarray,
                     prediction_id: int) -> SeedSet:
    """One seed per region at the rounded mean (x, y); snaps into the mask.

    A concave region can place its centroid outside the mask; such seeds
    move to the nearest pixel of their own region.
    """
    rm = regions.region_map
    ys, xs = np.nonzero(rm >= 0)
    labels = rm[ys, xs]
    k = regions.region_count
    counts = np.bincount(labels, minlength=k).astype(np.float64)
    sx = np.bincount(labels, weights=xs, minlength=k)
    sy = np.bincount(labels, weights=ys, minlength=k)
    cx = np.floor(sx / counts + 0.5).astype(np.int64)
    cy = np.floor(sy / counts + 0.5).astype(np.int64)

    seeds = np.stack([cx, cy], axis=1)
    for r in range(k):
        if not mask[cy[r], cx[r]]:
            sel = labels == r
            rx, ry = xs[sel].astype(np.int64), ys[sel].astype(np.int64)
            d2 = (rx - cx[r]) ** 2 + (ry - cy[r]) ** 2
            j = int(d2.argmin())
            seeds[r, 0], seeds[r, 1] = rx[j], ry[j]
    return SeedSet(prediction_id=prediction_id, seeds=seeds.astype(np.int32))


def save_region_map(regions: SuperpixelRegions, path: str | Path) -> None:
    """Debug dump: region ids + 1 as 16-bit PNG (0 = outside the mask)."""
    from PIL import Image as PILImage

    arr = (regions.region_map + 1).clip(0, 65535).astype(np.uint16)
    PILImage.fromarray(arr).save(path, format="PNG")


def save_seeds(seed_set: SeedSet, path: str | Path) -> None:
    payload = {"predictionId": seed_set.prediction_id,
               "seeds": [[int(x), int(y)] for x, y in seed_set.seeds]}
    Path(path).write_text(json.dumps(payload) + "\n")
