"""Grayscale image type, resizing, normalization, ROI cropping, and file I/O.

Resizing uses area-weighted averaging when shrinking an axis and bilinear
interpolation when enlarging it. Both paths are written in anchored form
(``v0 + w * (v1 - v0)``) so a constant input stays bit-for-bit constant,
which the thresholding encoders rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

# Conventional luma weights for color input.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True)
class GrayImage:
    """A width x height grid of non-negative intensities, row-major."""

    pixels: np.ndarray  # float64, shape (height, width), read-only

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels, dtype=np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("image must be a non-empty 2-D grid")
        if not np.all(arr >= 0):
            raise ValueError("image intensities must be non-negative")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def scaled(self, factor: float) -> "GrayImage":
        """A copy with every intensity multiplied by ``factor`` (> 0)."""
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return GrayImage(self.pixels * factor)


def luma_from_rgb(rgb: np.ndarray) -> np.ndarray:
    """Collapse an (h, w, 3) RGB array to grayscale with 0.299/0.587/0.114."""
    r, g, b = LUMA_WEIGHTS
    arr = np.asarray(rgb, dtype=np.float64)
    return arr[..., 0] * r + arr[..., 1] * g + arr[..., 2] * b


def read_gray(path: str | Path) -> GrayImage:
    """Load PNG/BMP/TIFF as grayscale; color inputs go through the luma weights."""
    with Image.open(path) as im:
        if im.mode in ("L", "I", "I;16", "I;16B", "I;16L", "F"):
            arr = np.asarray(im, dtype=np.float64)
        elif im.mode == "LA":
            arr = np.asarray(im.convert("L"), dtype=np.float64)
        else:
            arr = luma_from_rgb(np.asarray(im.convert("RGB")))
    return GrayImage(arr)


def _shrink_axis(values: np.ndarray, out_len: int) -> np.ndarray:
    """Area-weighted reduction along axis 0 (in_len > out_len)."""
    in_len = values.shape[0]
    ratio = in_len / out_len
    out = np.empty((out_len,) + values.shape[1:], dtype=np.float64)
    for j in range(out_len):
        start = j * ratio
        stop = (j + 1) * ratio
        lo = int(math.floor(start))
        hi = min(int(math.ceil(stop)), in_len)
        anchor = values[lo]
        acc = np.zeros_like(anchor)
        for i in range(lo, hi):
            overlap = min(stop, i + 1.0) - max(start, float(i))
            if overlap <= 0.0:
                continue
            acc = acc + (overlap / ratio) * (values[i] - anchor)
        out[j] = anchor + acc
    return out


def _enlarge_axis(values: np.ndarray, out_len: int) -> np.ndarray:
    """Bilinear interpolation along axis 0 with endpoints fixed."""
    in_len = values.shape[0]
    if in_len == 1:
        return np.repeat(values, out_len, axis=0).astype(np.float64)
    out = np.empty((out_len,) + values.shape[1:], dtype=np.float64)
    positions = np.linspace(0.0, in_len - 1.0, out_len)
    for j, t in enumerate(positions):
        i0 = min(int(math.floor(t)), in_len - 2)
        frac = t - i0
        out[j] = values[i0] + frac * (values[i0 + 1] - values[i0])
    return out


def _resize_axis(values: np.ndarray, out_len: int) -> np.ndarray:
    in_len = values.shape[0]
    if out_len == in_len:
        return values.astype(np.float64)
    if out_len < in_len:
        return _shrink_axis(values, out_len)
    return _enlarge_axis(values, out_len)


def resize_array(pixels: np.ndarray, out_height: int, out_width: int) -> np.ndarray:
    """Resize a 2-D array, choosing shrink/enlarge mode per axis."""
    if out_height < 1 or out_width < 1:
        raise ValueError("target size must be at least 1x1")
    rows = _resize_axis(np.asarray(pixels, dtype=np.float64), out_height)
    return _resize_axis(rows.T, out_width).T


def normalize(img: GrayImage, size: int) -> GrayImage:
    """Resize to size x size and rescale intensities into [0, 1].

    The rescale divides by the post-resize maximum, so the brightest pixel
    maps to exactly 1.0; an all-zero image stays all-zero.
    """
    if size < 2:
        raise ValueError("normalized size must be at least 2")
    resized = resize_array(img.pixels, size, size)
    peak = resized.max()
    if peak > 0:
        resized = resized / peak
    return GrayImage(resized)


def crop_roi(img: GrayImage, x: int, y: int, w: int, h: int) -> GrayImage:
    """Cut the rectangle with top-left (x, y), width w, height h."""
    if w < 1 or h < 1:
        raise ValueError("ROI must be at least 1x1")
    if x < 0 or y < 0 or x + w > img.width or y + h > img.height:
        raise ValueError(
            f"ROI ({x},{y},{w},{h}) exceeds image bounds {img.width}x{img.height}"
        )
    return GrayImage(img.pixels[y : y + h, x : x + w])
