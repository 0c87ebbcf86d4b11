"""Shared scalar-field helpers: luma, Gaussian blur, Sobel gradients.

All filters run in float64 with replicate ("nearest") borders so results
are reproducible bit-for-bit across runs.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import correlate1d

_SOBEL_DIFF = np.array([-1.0, 0.0, 1.0])
_SOBEL_SMOOTH = np.array([1.0, 2.0, 1.0])
_BINOMIAL3 = np.array([0.25, 0.5, 0.25])


def luma(pixels: np.ndarray) -> np.ndarray:
    """ITU-R 601 luma of an (H, W, 3) uint8 array, as float64."""
    p = pixels.astype(np.float64)
    return 0.299 * p[:, :, 0] + 0.587 * p[:, :, 1] + 0.114 * p[:, :, 2]


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian with kernel radius ceil(3*sigma)."""
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(field: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur; sigma = 0 returns an unmodified copy."""
    if sigma == 0:
        return field.copy()
    k = gaussian_kernel(sigma)
    out = correlate1d(field.astype(np.float64), k, axis=0, mode="nearest")
    return correlate1d(out, k, axis=1, mode="nearest")


def binomial_blur3(field: np.ndarray) -> np.ndarray:
    """3x3 binomial pre-blur used before gradient estimation."""
    out = correlate1d(field.astype(np.float64), _BINOMIAL3, axis=0, mode="nearest")
    return correlate1d(out, _BINOMIAL3, axis=1, mode="nearest")


def sobel_xy(field: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sobel derivatives (d/dx, d/dy) of a 2-D field."""
    f = field.astype(np.float64)
    gx = correlate1d(f, _SOBEL_DIFF, axis=1, mode="nearest")
    gx = correlate1d(gx, _SOBEL_SMOOTH, axis=0, mode="nearest")
    gy = correlate1d(f, _SOBEL_DIFF, axis=0, mode="nearest")
    gy = correlate1d(gy, _SOBEL_SMOOTH, axis=1, mode="nearest")
    return gx, gy


def sobel_magnitude(field: np.ndarray) -> np.ndarray:
    gx, gy = sobel_xy(field)
    return np.hypot(gx, gy)
