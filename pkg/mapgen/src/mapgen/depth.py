"""Depth map generation: model inference or a classical proxy.

Output contract (shared with the core engine): binary P5 PGM, maxval
65535, big-endian samples, model output min-max normalized to [0, 1]
and scaled to 16 bits, at the input image's resolution. A manifest
sidecar records the backend, checkpoint, and value orientation.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage

from . import ModelUnavailable, __version__

DEPTH_MAXVAL = 65535
MIDAS_DEFAULT = "MiDaS_small"


def load_rgb(image_path: str | Path) -> np.ndarray:
    with Image.open(image_path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def write_pgm16(values: np.ndarray, path: str | Path) -> None:
    """values in [0, 1] -> 16-bit binary PGM."""
    h, w = values.shape
    q = np.clip(np.floor(values * DEPTH_MAXVAL + 0.5), 0, DEPTH_MAXVAL)
    header = f"P5\n{w} {h}\n{DEPTH_MAXVAL}\n".encode("ascii")
    Path(path).write_bytes(header + q.astype(">u2").tobytes())


def normalize(raw: np.ndarray) -> np.ndarray:
    lo, hi = float(raw.min()), float(raw.max())
    if hi == lo:
        return np.zeros_like(raw, dtype=np.float64)
    return (raw.astype(np.float64) - lo) / (hi - lo)


def classical_depth(pixels: np.ndarray) -> np.ndarray:
    """Geometric depth proxy, larger = nearer.

    Combines a ground-plane prior (lower rows are closer) with local
    sharpness (in-focus texture is closer), smoothed so the result bins
    cleanly. Deterministic; intended for testing and offline use.
    """
    h, w = pixels.shape[:2]
    g = pixels.astype(np.float64) @ np.array([0.299, 0.587, 0.114])
    gx = ndimage.sobel(g, axis=1, mode="nearest")
    gy = ndimage.sobel(g, axis=0, mode="nearest")
    sharp = ndimage.gaussian_filter(np.hypot(gx, gy), sigma=max(2.0, min(h, w) / 32))
    sharp = normalize(sharp)
    row_prior = np.repeat(np.linspace(0.0, 1.0, h)[:, None], w, axis=1)
    depth = 0.65 * row_prior + 0.35 * sharp
    depth = ndimage.gaussian_filter(depth, sigma=min(h, w) / 64)
    return normalize(depth)


def _midas_depth(pixels: np.ndarray, model_name: str) -> np.ndarray:
    try:
        import torch
    except ImportError as e:
        raise ModelUnavailable(
            "torch is not installed; install the model extras "
            "(pip install 'mapgen-adapter[models]') or use --backend classical"
        ) from e
    try:
        midas = torch.hub.load("intel-isl/MiDaS", model_name, trust_repo=True)
        transforms = torch.hub.load("intel-isl/MiDaS", "transforms", trust_repo=True)
    except Exception as e:
        raise ModelUnavailable(
            f"could not load MiDaS weights ({e}); this needs network access "
            "to torch hub on first use. Pre-download the checkpoint or use "
            "--backend classical"
        ) from e
    midas.eval()
    t = (transforms.small_transform if "small" in model_name
         else transforms.dpt_transform)
    with torch.no_grad():
        pred = midas(t(pixels))
        pred = torch.nn.functional.interpolate(
            pred.unsqueeze(1), size=pixels.shape[:2],
            mode="bicubic", align_corners=False).squeeze()
    return normalize(pred.cpu().numpy())


def gen_depth(image_path: str | Path, out_pgm: str | Path,
              backend: str = "midas", model_name: str = MIDAS_DEFAULT) -> Path:
    """Write a 16-bit depth PGM for an image; returns the manifest path.

    Both backends produce inverse-depth-style values: larger = nearer
    (the core's "nearer-high" convention).
    """
    pixels = load_rgb(image_path)
    if backend == "classical":
        values = classical_depth(pixels)
        checkpoint = None
    elif backend == "midas":
        values = _midas_depth(pixels, model_name)
        checkpoint = model_name
    else:
        raise ValueError(f"unknown depth backend {backend!r}")
    write_pgm16(values, out_pgm)

    manifest_path = Path(str(out_pgm) + ".manifest.json")
    manifest_path.write_text(json.dumps({
        "tool": "mapgen",
        "version": __version__,
        "kind": "depth",
        "backend": backend,
        "checkpoint": checkpoint,
        "convention": "nearer-high",
        "source": str(image_path),
    }, indent=2, sort_keys=True) + "\n")
    return manifest_path
