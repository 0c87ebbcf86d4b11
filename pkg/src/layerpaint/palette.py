"""k-color palette extraction and nearest-color lookup.

The palette is built with Lloyd's algorithm over the image's RGB values,
seeded deterministically (k-means++ with an explicit RNG seed). Pixels
are folded into (unique color, count) pairs first, which leaves every
assignment and SSE value identical to clustering the raw pixel list
while keeping the distance matrix small.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .imagecore import Image

# Above this many pixels, cluster a deterministic stride subsample.
MAX_CLUSTER_PIXELS = 1_000_000


@dataclass
class Palette:
    """Ordered list of distinct RGB colors, at most k of them."""

    colors: np.ndarray  # (n, 3) uint8
    k: int

    def __len__(self) -> int:
        return len(self.colors)


def cluster_colors(pixels: np.ndarray, k: int, rng_seed: int,
                   max_iters: int) -> tuple[np.ndarray, list[float]]:
    """Weighted Lloyd's over unique colors; returns (centers, SSE per iteration).

    Centers are float64. The SSE trace is recorded after each assignment
    step and is nonincreasing. Empty clusters are dropped as they appear.
    """
    colors, counts = np.unique(pixels.reshape(-1, 3), axis=0, return_counts=True)
    colors = colors.astype(np.float64)
    weights = counts.astype(np.float64)
    m = len(colors)
    if m <= k:
        return colors, []

    rng = np.random.default_rng(rng_seed)
    # k-means++: seed with one color, then sample proportional to squared
    # distance from the chosen set (weighted by pixel count).
    first = int(rng.choice(m, p=weights / weights.sum()))
    centers = [colors[first]]
    d2 = ((colors - centers[0]) ** 2).sum(axis=1)
    for _ in range(k - 1):
        mass = d2 * weights
        total = mass.sum()
        if total <= 0.0:
            break
        nxt = int(rng.choice(m, p=mass / total))
        centers.append(colors[nxt])
        d2 = np.minimum(d2, ((colors - colors[nxt]) ** 2).sum(axis=1))
    c = np.array(centers)

    sse_trace: list[float] = []
    prev_assign = None
    for _ in range(max_iters):
        dist2 = ((colors[:, None, :] - c[None, :, :]) ** 2).sum(axis=2)
        assign = dist2.argmin(axis=1)
        sse_trace.append(float((dist2[np.arange(m), assign] * weights).sum()))
        if prev_assign is not None and np.array_equal(assign, prev_assign):
            break
        occupied = np.unique(assign)
        if len(occupied) < len(c):
            remap = -np.ones(len(c), dtype=np.int64)
            remap[occupied] = np.arange(len(occupied))
            assign = remap[assign]
            prev_assign = None  # cluster count changed; force one more pass
        else:
            prev_assign = assign
        nc = np.zeros((len(occupied), 3))
        wsum = np.bincount(assign, weights=weights, minlength=len(occupied))
        for ch in range(3):
            nc[:, ch] = np.bincount(assign, weights=colors[:, ch] * weights,
                                    minlength=len(occupied))
        c = nc / wsum[:, None]
    return c, sse_trace


def build_palette(image: Image, k: int, rng_seed: int = 0,
                  max_iters: int = 50) -> Palette:
    """Cluster the image's RGB values into at most k palette colors."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    pixels = image.pixels.reshape(-1, 3)
    n = len(pixels)
    if n > MAX_CLUSTER_PIXELS:
        stride = -(-n // MAX_CLUSTER_PIXELS)
        pixels = pixels[::stride]
    centers, _ = cluster_colors(pixels, k, rng_seed, max_iters)
    rounded = np.clip(np.floor(centers + 0.5), 0, 255).astype(np.uint8)
    # dedupe post-rounding collisions, keeping first occurrence
    seen: set[tuple[int, int, int]] = set()
    out = []
    for c in rounded:
        t = (int(c[0]), int(c[1]), int(c[2]))
        if t not in seen:
            seen.add(t)
            out.append(t)
    return Palette(colors=np.array(out, dtype=np.uint8), k=k)


def quantize(color: tuple[int, int, int] | np.ndarray, palette: Palette) -> int:
    """Index of the nearest palette color (squared RGB distance, lowest index wins ties)."""
    c = np.asarray(color, dtype=np.int64)
    d2 = ((palette.colors.astype(np.int64) - c) ** 2).sum(axis=1)
    return int(d2.argmin())


def save_palette(palette: Palette, path: str | Path) -> None:
    triples = [[int(r), int(g), int(b)] for r, g, b in palette.colors]
    Path(path).write_text(json.dumps(triples) + "\n")


def load_palette(path: str | Path) -> Palette:
    triples = json.loads(Path(path).read_text())
    colors = np.array(triples, dtype=np.uint8).reshape(-1, 3)
    return Palette(colors=colors, k=len(colors))
