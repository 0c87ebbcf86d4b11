"""Depth smoothing, histogram construction, and bin lookup.

The histogram's bins drive stroke ordering: traversal lists bin indices
back-to-front according to the depth map's orientation flag, so the
plan sweeps from the farthest layer toward the viewer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import filters
from .imagecore import NEARER_HIGH, DepthMap, Image


@dataclass
class DepthHistogram:
    bin_count: int
    edges: np.ndarray       # (bin_count + 1,) strictly ascending
    traversal: list[int]    # bin indices, farthest first


def default_sigma(image: Image) -> float:
    """Default smoothing width: image diagonal / 200."""
    return image.diagonal / 200.0


def smooth_depth(depth: DepthMap, sigma: float) -> DepthMap:
    """Gaussian-smooth a depth map (radius ceil(3*sigma), replicate borders).

    sigma = 0 is the identity. Output values are clipped back into the
    input's [min, max] so float rounding never widens the range.
    """
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        values = depth.values.copy()
    else:
        values = filters.gaussian_blur(depth.values, sigma)
        values = np.clip(values, depth.values.min(), depth.values.max())
    return DepthMap(width=depth.width, height=depth.height, values=values,
                    convention=depth.convention)


def build_histogram(depth: DepthMap, bin_count: int,
                    equal_population: bool = False) -> DepthHistogram:
    """Equal-width bins over [min, max]; each bin [e_i, e_i+1), last closed.

    equal_population switches to quantile edges (experimental; ties can
    reduce the effective bin count). A degenerate map (min == max)
    yields a single bin.
    """
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    values = depth.values
    lo = float(values.min())
    hi = float(values.max())
    if lo == hi:
        edges = np.array([lo, np.nextafter(lo, np.inf)])
    elif equal_population:
        edges = np.quantile(values, np.linspace(0.0, 1.0, bin_count + 1))
        edges = np.unique(edges)
        if len(edges) < 2:
            edges = np.array([lo, np.nextafter(lo, np.inf)])
    else:
        edges = np.linspace(lo, hi, bin_count + 1)
    if not (np.diff(edges) > 0).all():
        # collapse duplicate edges (tiny range vs many bins)
        edges = np.unique(edges)
        if len(edges) < 2:
            edges = np.array([lo, np.nextafter(lo, np.inf)])
    n = len(edges) - 1
    if depth.convention == NEARER_HIGH:
        traversal = list(range(n))          # far = low values
    else:
        traversal = list(range(n - 1, -1, -1))  # far = high values
    return DepthHistogram(bin_count=n, edges=edges, traversal=traversal)


def bin_of(value: float, hist: DepthHistogram) -> int:
    """Containing bin per the half-open rule; out-of-range values clamp."""
    i = int(np.searchsorted(hist.edges, value, side="right")) - 1
    return min(max(i, 0), hist.bin_count - 1)


def bins_of(values: np.ndarray, hist: DepthHistogram) -> np.ndarray:
    """Vectorized bin_of."""
    idx = np.searchsorted(hist.edges, values, side="right") - 1
    return np.clip(idx, 0, hist.bin_count - 1)
