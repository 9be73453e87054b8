"""Discrete Radon projections and the projection-threshold barcode encoder.

Geometry convention: pixel (row, col) sits at x = col - (W-1)/2,
y = row - (H-1)/2, so at angle 0 the rays are vertical and the projection
equals the column sums. Each projection bin is a 1-pixel-wide strip along
rho = x*cos(theta) + y*sin(theta); a pixel's unit-square footprint is
distributed over the strips it overlaps by exact area, which preserves
total mass and leaves bins outside the image support at exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .barcode import Barcode, EncoderTag, pack_bits
from .image import GrayImage, normalize


@dataclass(frozen=True)
class RbcConfig:
    """Projection-barcode parameters.

    The barcode length is n_p * bins_per_angle: each projection is
    resampled to a fixed bins_per_angle before thresholding, so the
    fragment length is configuration-controlled rather than a function
    of the image size.
    """

    n_p: int
    normalized_size: int = 32
    bins_per_angle: int = 128

    def __post_init__(self) -> None:
        if self.n_p < 1:
            raise ValueError("n_p must be at least 1")
        if self.normalized_size < 2:
            raise ValueError("normalized_size must be at least 2")
        if self.bins_per_angle < 1:
            raise ValueError("bins_per_angle must be at least 1")

    @property
    def bit_length(self) -> int:
        return self.n_p * self.bins_per_angle


@dataclass(frozen=True)
class Sinogram:
    """One projection vector per angle; all vectors share a bin grid."""

    angles: np.ndarray  # degrees, strictly < 180
    values: np.ndarray  # shape (len(angles), n_bins)

    def __post_init__(self) -> None:
        angles = np.asarray(self.angles, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != angles.size:
            raise ValueError("sinogram needs one projection row per angle")
        angles.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "values", values)

    @property
    def n_angles(self) -> int:
        return int(self.angles.size)


def projection_bin_count(width: int, height: int) -> int:
    """Number of 1-pixel rho bins spanning the image diagonal (even count)."""
    return 2 * math.ceil(math.hypot(width, height) / 2.0)


def _square_projection_cdf(u: np.ndarray, a: float, b: float) -> np.ndarray:
    """CDF of the projection of a centered unit square onto a unit direction.

    a and b are the absolute direction cosines with a >= b. The projected
    footprint is the convolution of two boxes of widths a and b: a trapezoid
    supported on [-(a+b)/2, (a+b)/2]. Values clamp to exactly 0 and 1
    outside the support so that per-pixel masses telescope to 1.
    """
    if b < 1e-12:
        return np.clip(u / a + 0.5, 0.0, 1.0)
    l1 = -(a + b) / 2.0
    l2 = -(a - b) / 2.0
    l3 = (a - b) / 2.0
    l4 = (a + b) / 2.0
    return np.where(
        u <= l1,
        0.0,
        np.where(
            u <= l2,
            (u - l1) ** 2 / (2.0 * a * b),
            np.where(
                u <= l3,
                b / (2.0 * a) + (u - l2) / a,
                np.where(u <= l4, 1.0 - (l4 - u) ** 2 / (2.0 * a * b), 1.0),
            ),
        ),
    )


def radon_projection(img: GrayImage, theta: float) -> np.ndarray:
    """Project the image onto the rho axis at ``theta`` degrees.

    Returns one value per rho bin, increasing rho, bins centered on the
    image center. The sum of the projection equals the sum of the pixels.
    """
    if not 0.0 <= theta < 180.0:
        raise ValueError(f"theta must lie in [0, 180), got {theta}")
    h, w = img.height, img.width
    c = math.cos(math.radians(theta))
    s = math.sin(math.radians(theta))
    a, b = max(abs(c), abs(s)), min(abs(c), abs(s))

    n_bins = projection_bin_count(w, h)
    edges = np.arange(n_bins + 1, dtype=np.float64) - n_bins / 2.0

    cols = np.arange(w, dtype=np.float64) - (w - 1) / 2.0
    rows = np.arange(h, dtype=np.float64) - (h - 1) / 2.0
    rho = (cols[None, :] * c + rows[:, None] * s).ravel()

    cdf = _square_projection_cdf(edges[:, None] - rho[None, :], a, b)
    per_bin_mass = np.diff(cdf, axis=0)
    return per_bin_mass @ img.pixels.ravel()


def radon_transform(img: GrayImage, n_p: int) -> Sinogram:
    """All n_p projections at angles k * 180 / n_p, k = 0 .. n_p - 1."""
    if n_p < 1:
        raise ValueError("n_p must be at least 1")
    angles = np.array([k * 180.0 / n_p for k in range(n_p)])
    values = np.stack([radon_projection(img, theta) for theta in angles])
    return Sinogram(angles=angles, values=values)


def resample_projection(p: np.ndarray, bins: int) -> np.ndarray:
    """Linearly resample a projection to exactly ``bins`` values.

    Sample positions run from the first to the last original bin
    (endpoints fixed), so constants and the all-zero vector survive.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.size == 0:
        raise ValueError("projection must be non-empty")
    if bins < 1:
        raise ValueError("bins must be at least 1")
    positions = np.linspace(0.0, p.size - 1.0, bins)
    return np.interp(positions, np.arange(p.size, dtype=np.float64), p)


def binarize_projection(p: np.ndarray) -> np.ndarray:
    """Threshold one projection at the median of its nonzero values.

    Bit i is 1 iff p[i] >= median (inclusive). An all-zero projection has
    no nonzero median and yields all-zero bits, so empty borders do not
    flood the code with ones.
    """
    p = np.asarray(p, dtype=np.float64)
    nonzero = p[p != 0.0]
    if nonzero.size == 0:
        return np.zeros(p.size, dtype=np.uint8)
    threshold = np.median(nonzero)
    return (p >= threshold).astype(np.uint8)


def encode_rbc(img: GrayImage, cfg: RbcConfig) -> Barcode:
    """Projection barcode: normalize, project, resample, threshold, concat.

    The code fragments are concatenated in angle order; the result always
    has exactly cfg.n_p * cfg.bins_per_angle bits.
    """
    normalized = normalize(img, cfg.normalized_size)
    sinogram = radon_transform(normalized, cfg.n_p)
    fragments = [
        binarize_projection(resample_projection(row, cfg.bins_per_angle))
        for row in sinogram.values
    ]
    return pack_bits(np.concatenate(fragments), encoder_tag=EncoderTag.RBC, n_p=cfg.n_p)
