"""Normalized Hamming similarity and exhaustive nearest-neighbor search."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .barcode import Barcode
from .evaluation import IrmaCode


@dataclass(frozen=True)
class IndexRecord:
    id: str
    code: Optional[IrmaCode]
    barcode: Barcode


@dataclass(frozen=True)
class Match:
    id: str
    similarity: float
    rank: int


@dataclass(frozen=True)
class BarcodeIndex:
    """Immutable collection of annotated barcodes plus the encoder config.

    All barcodes must share bit length and encoder tag, and ids must be
    unique. The packed codes are cached as one uint8 matrix so a query is
    a single vectorized XOR + popcount pass.
    """

    records: tuple[IndexRecord, ...]
    encoder_config: object = None
    _matrix: np.ndarray = field(init=False, repr=False, compare=False)
    _positions: dict = field(init=False, repr=False, compare=False)

    def __init__(self, records: Sequence[IndexRecord], encoder_config: object = None):
        records = tuple(records)
        if not records:
            raise ValueError("index must contain at least one record")
        first = records[0].barcode
        for rec in records:
            if rec.barcode.bit_length != first.bit_length:
                raise ValueError("all barcodes in an index must share bit_length")
            if rec.barcode.encoder_tag != first.encoder_tag:
                raise ValueError("all barcodes in an index must share encoder_tag")
            if "\t" in rec.id or "\n" in rec.id:
                raise ValueError(f"record id {rec.id!r} contains tab or newline")
        positions = {rec.id: i for i, rec in enumerate(records)}
        if len(positions) != len(records):
            raise ValueError("record ids must be unique")
        matrix = np.stack([rec.barcode.as_bytes_array() for rec in records])
        matrix.flags.writeable = False
        object.__setattr__(self, "records", records)
        object.__setattr__(self, "encoder_config", encoder_config)
        object.__setattr__(self, "_matrix", matrix)
        object.__setattr__(self, "_positions", positions)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def bit_length(self) -> int:
        return self.records[0].barcode.bit_length

    def record_by_id(self, record_id: str) -> IndexRecord:
        return self.records[self._positions[record_id]]

    def hamming_distances(self, query: Barcode) -> np.ndarray:
        """Bit differences between the query and every record, in record order."""
        if query.bit_length != self.bit_length:
            raise ValueError(
                f"query has {query.bit_length} bits, index has {self.bit_length}"
            )
        xored = np.bitwise_xor(self._matrix, query.as_bytes_array()[None, :])
        return np.bitwise_count(xored).sum(axis=1, dtype=np.int64)


def hamming_similarity(a: Barcode, b: Barcode) -> float:
    """1 - (differing bits) / bit_length; 1.0 iff the codes are identical."""
    if a.bit_length != b.bit_length:
        raise ValueError(
            f"barcode lengths differ: {a.bit_length} vs {b.bit_length}"
        )
    xored = np.bitwise_xor(a.as_bytes_array(), b.as_bytes_array())
    distance = int(np.bitwise_count(xored).sum(dtype=np.int64))
    return 1.0 - distance / a.bit_length


def nearest(query: Barcode, index: BarcodeIndex, exclude_id: Optional[str] = None) -> Match:
    """The most similar record; ties go to the lexicographically smallest id."""
    distances = index.hamming_distances(query)
    mask = np.ones(len(index), dtype=bool)
    if exclude_id is not None and exclude_id in index._positions:
        mask[index._positions[exclude_id]] = False
    if not mask.any():
        raise ValueError("index is empty after exclusion")
    best = distances[mask].min()
    candidates = np.flatnonzero(mask & (distances == best))
    winner = min(candidates, key=lambda i: index.records[i].id)
    similarity = 1.0 - int(best) / index.bit_length
    return Match(id=index.records[winner].id, similarity=similarity, rank=1)


def top_k(query: Barcode, index: BarcodeIndex, k: int, exclude_id: Optional[str] = None) -> list[Match]:
    """First min(k, |index|) matches ordered by similarity desc, id asc."""
    if k < 1:
        raise ValueError("k must be at least 1")
    distances = index.hamming_distances(query)
    order = sorted(
        (i for i in range(len(index)) if index.records[i].id != exclude_id),
        key=lambda i: (distances[i], index.records[i].id),
    )
    return [
        Match(
            id=index.records[i].id,
            similarity=1.0 - int(distances[i]) / index.bit_length,
            rank=rank,
        )
        for rank, i in enumerate(order[:k], start=1)
    ]
