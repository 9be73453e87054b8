"""Fixed-length binary barcodes: packing, hex serialization, equality."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np


class EncoderTag(str, enum.Enum):
    """Which encoder family produced a barcode."""

    RBC = "RBC"
    LBP = "LBP"
    LRBP = "LRBP"


@dataclass(frozen=True)
class Barcode:
    """An immutable bit sequence, stored MSB-first in packed bytes.

    ``packed`` holds ceil(bit_length / 8) bytes; logical bit i lives in
    byte i // 8 at position 7 - (i % 8). Trailing pad bits are zero, so
    comparing packed bytes is equivalent to comparing logical bits.
    ``encoder_tag`` and ``n_p`` record provenance and are excluded from
    equality (a barcode read back from hex compares equal to the original).
    """

    packed: bytes
    bit_length: int
    encoder_tag: Optional[EncoderTag] = field(default=None, compare=False)
    n_p: Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.bit_length <= 0:
            raise ValueError("empty barcode")
        expected = (self.bit_length + 7) // 8
        if len(self.packed) != expected:
            raise ValueError(
                f"packed length {len(self.packed)} does not match "
                f"bit_length {self.bit_length} (expected {expected} bytes)"
            )
        pad = 8 * expected - self.bit_length
        if pad and self.packed[-1] & ((1 << pad) - 1):
            raise ValueError("trailing pad bits must be zero")

    def bits(self) -> np.ndarray:
        """Logical bits as a uint8 array of 0/1, length ``bit_length``."""
        raw = np.frombuffer(self.packed, dtype=np.uint8)
        return np.unpackbits(raw)[: self.bit_length]

    def as_bytes_array(self) -> np.ndarray:
        """Packed storage as a read-only uint8 array."""
        arr = np.frombuffer(self.packed, dtype=np.uint8)
        arr.flags.writeable = False
        return arr

    def __len__(self) -> int:
        return self.bit_length


def pack_bits(
    bits: Iterable[int],
    encoder_tag: Optional[EncoderTag] = None,
    n_p: Optional[int] = None,
) -> Barcode:
    """Pack an ordered 0/1 sequence into a Barcode (MSB-first per byte)."""
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
    if arr.size == 0:
        raise ValueError("empty barcode")
    arr = arr.astype(np.uint8).ravel()
    if np.any(arr > 1):
        raise ValueError("bits must be 0 or 1")
    return Barcode(
        packed=np.packbits(arr).tobytes(),
        bit_length=int(arr.size),
        encoder_tag=encoder_tag,
        n_p=n_p,
    )


def barcode_to_hex(b: Barcode) -> str:
    """Lowercase hex of the packed bytes; pairs with :func:`barcode_from_hex`."""
    return b.packed.hex()


def barcode_from_hex(
    text: str,
    bit_length: int,
    encoder_tag: Optional[EncoderTag] = None,
    n_p: Optional[int] = None,
) -> Barcode:
    """Rebuild a Barcode from hex text plus its known bit length.

    Raises ValueError when the hex is malformed, its byte count does not
    match the given length, or a trailing pad bit is set.
    """
    try:
        packed = bytes.fromhex(text)
    except ValueError as exc:
        raise ValueError(f"malformed hex barcode: {exc}") from exc
    return Barcode(packed=packed, bit_length=bit_length, encoder_tag=encoder_tag, n_p=n_p)
