"""Uniform encoder selection shared by index building and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

from .barcode import Barcode, EncoderTag
from .image import GrayImage
from .lbp import LbpConfig, encode_lbp, encode_lrbp
from .radon import RbcConfig, encode_rbc


@dataclass(frozen=True)
class EncoderSpec:
    """One encoder choice plus its parameters, serializable to an index header.

    ``n_p`` and ``bins_per_angle`` are stored as 0 where the encoder does
    not use them (plain LBP has no projections; the LBP-family length is
    fixed by normalized_size alone).
    """

    tag: EncoderTag
    n_p: int = 0
    normalized_size: int = 32
    bins_per_angle: int = 0

    def __post_init__(self) -> None:
        if self.tag in (EncoderTag.RBC, EncoderTag.LRBP) and self.n_p < 1:
            raise ValueError(f"{self.tag.value} requires n_p >= 1")
        if self.tag == EncoderTag.RBC and self.bins_per_angle < 1:
            raise ValueError("RBC requires bins_per_angle >= 1")

    @classmethod
    def rbc(cls, n_p: int, normalized_size: int = 32, bins_per_angle: int = 128) -> "EncoderSpec":
        return cls(EncoderTag.RBC, n_p, normalized_size, bins_per_angle)

    @classmethod
    def lbp(cls, normalized_size: int = 32) -> "EncoderSpec":
        return cls(EncoderTag.LBP, 0, normalized_size, 0)

    @classmethod
    def lrbp(cls, n_p: int, normalized_size: int = 32) -> "EncoderSpec":
        return cls(EncoderTag.LRBP, n_p, normalized_size, 0)

    @property
    def method_name(self) -> str:
        """Report label, e.g. RBC4, LBP, LRBP32."""
        if self.tag == EncoderTag.LBP:
            return "LBP"
        return f"{self.tag.value}{self.n_p}"

    @property
    def bit_length(self) -> int:
        if self.tag == EncoderTag.RBC:
            return self.n_p * self.bins_per_angle
        return (self.normalized_size - 2) ** 2 * 8

    def encode(self, img: GrayImage) -> Barcode:
        if self.tag == EncoderTag.RBC:
            cfg = RbcConfig(
                n_p=self.n_p,
                normalized_size=self.normalized_size,
                bins_per_angle=self.bins_per_angle,
            )
            return encode_rbc(img, cfg)
        cfg = LbpConfig(
            normalized_size=self.normalized_size,
            lrbp_n_p=self.n_p if self.n_p >= 1 else 4,
        )
        if self.tag == EncoderTag.LBP:
            return encode_lbp(img, cfg)
        return encode_lrbp(img, cfg)

    def header_fields(self) -> list[str]:
        return [
            self.tag.value,
            str(self.n_p),
            str(self.normalized_size),
            str(self.bins_per_angle),
        ]

    @classmethod
    def from_header_fields(cls, fields: list[str]) -> "EncoderSpec":
        if len(fields) != 4:
            raise ValueError("encoder header needs tag, n_p, size, bins")
        try:
            tag = EncoderTag(fields[0])
            n_p, size, bins = (int(f) for f in fields[1:])
        except ValueError as exc:
            raise ValueError(f"bad encoder header fields {fields!r}") from exc
        return cls(tag, n_p, size, bins)
