"""Local-binary-pattern barcodes, plain and Radon-domain.

Both encoders record the raw 8-bit neighborhood codes of every interior
pixel, concatenated row-major, rather than a histogram: on a 32x32
normalized image that is 30 * 30 * 8 = 7200 bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .barcode import Barcode, EncoderTag, pack_bits
from .image import GrayImage, normalize, resize_array
from .radon import radon_transform

# 3x3 neighbor offsets (dy, dx), clockwise starting at the top-left corner.
NEIGHBOR_OFFSETS = (
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
)


@dataclass(frozen=True)
class LbpConfig:
    """Neighborhood-code barcode parameters (3x3, 8 neighbors, fixed)."""

    normalized_size: int = 32
    lrbp_n_p: int = 4

    def __post_init__(self) -> None:
        if self.normalized_size < 3:
            raise ValueError("normalized_size must be at least 3 for a 3x3 neighborhood")
        if self.lrbp_n_p < 1:
            raise ValueError("lrbp_n_p must be at least 1")

    @property
    def bit_length(self) -> int:
        return (self.normalized_size - 2) ** 2 * 8


def lbp_codeword(img: GrayImage, x: int, y: int) -> np.ndarray:
    """The 8-bit code of interior pixel (x, y): bit k = neighbor_k >= center."""
    if not (1 <= x <= img.width - 2 and 1 <= y <= img.height - 2):
        raise ValueError(f"pixel ({x},{y}) is not interior to {img.width}x{img.height}")
    center = img.pixels[y, x]
    return np.array(
        [1 if img.pixels[y + dy, x + dx] >= center else 0 for dy, dx in NEIGHBOR_OFFSETS],
        dtype=np.uint8,
    )


def _codeword_grid(pixels: np.ndarray) -> np.ndarray:
    """All interior codewords at once; shape (h-2, w-2, 8), same bit order."""
    h, w = pixels.shape
    center = pixels[1 : h - 1, 1 : w - 1]
    planes = [
        (pixels[1 + dy : h - 1 + dy, 1 + dx : w - 1 + dx] >= center)
        for dy, dx in NEIGHBOR_OFFSETS
    ]
    return np.stack(planes, axis=-1).astype(np.uint8)


def encode_lbp(img: GrayImage, cfg: LbpConfig = LbpConfig()) -> Barcode:
    """Concatenate the interior codewords of the normalized image, row-major."""
    normalized = normalize(img, cfg.normalized_size)
    bits = _codeword_grid(normalized.pixels).ravel()
    return pack_bits(bits, encoder_tag=EncoderTag.LBP)


def encode_lrbp(img: GrayImage, cfg: LbpConfig = LbpConfig()) -> Barcode:
    """Neighborhood codes of the Radon-transformed image.

    The sinogram (one row per angle, one column per rho bin) is treated
    as an intensity grid, resized to the normalized size, and encoded
    like a plain image, so the code length matches encode_lbp exactly.
    """
    normalized = normalize(img, cfg.normalized_size)
    sinogram = radon_transform(normalized, cfg.lrbp_n_p)
    grid = resize_array(sinogram.values, cfg.normalized_size, cfg.normalized_size)
    inner = encode_lbp(GrayImage(grid), cfg)
    return Barcode(
        packed=inner.packed,
        bit_length=inner.bit_length,
        encoder_tag=EncoderTag.LRBP,
        n_p=cfg.lrbp_n_p,
    )
