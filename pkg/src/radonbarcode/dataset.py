"""Dataset ingestion and the line-oriented barcode-index file format.

Index files are human-inspectable text:

    RBCIDX 1 <tag> <n_p> <normalized_size> <bins_per_angle> <bit_length>
    <id>\\t<irma_code_or_dash>\\t<hex_barcode>
    ...
    #sha256 <hex digest of every prior line, newlines included>

Labels files pair ids with codes, one ``<id>;<irma code>`` per line;
``#`` starts a comment.
"""

from __future__ import annotations

import hashlib
import logging
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .barcode import barcode_from_hex, barcode_to_hex
from .encoders import EncoderSpec
from .evaluation import IrmaCode, parse_irma
from .image import read_gray
from .retrieval import BarcodeIndex, IndexRecord

logger = logging.getLogger(__name__)

INDEX_MAGIC = "RBCIDX"
INDEX_VERSION = "1"
IMAGE_SUFFIXES = (".png", ".bmp", ".tif", ".tiff")


class IndexFileError(ValueError):
    """Base class for unreadable index files."""


class IndexVersionError(IndexFileError):
    """The file declares a format version this reader does not speak."""


class IndexIntegrityError(IndexFileError):
    """The checksum line does not match the file content."""


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    id: str
    code: Optional[IrmaCode]


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[ManifestEntry, ...]
    warnings: tuple[str, ...] = ()
    skipped_labels: int = 0

    def __len__(self) -> int:
        return len(self.entries)


def _parse_labels_file(path: Path) -> tuple[dict[str, IrmaCode], list[str], int]:
    labels: dict[str, IrmaCode] = {}
    warnings: list[str] = []
    skipped = 0
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) != 2 or not parts[0]:
            warnings.append(f"{path.name}:{lineno}: expected '<id>;<code>', skipped")
            skipped += 1
            continue
        try:
            labels[parts[0]] = parse_irma(parts[1])
        except ValueError as exc:
            warnings.append(f"{path.name}:{lineno}: {exc}, skipped")
            skipped += 1
    return labels, warnings, skipped


def ingest(image_dir: str | Path, labels_file: Optional[str | Path] = None) -> DatasetManifest:
    """Pair every image in a directory with its label row, matched by file stem.

    Images without a label stay in the manifest unlabeled; label rows that
    do not parse are skipped and counted; label ids without an image
    become warnings.
    """
    image_dir = Path(image_dir)
    if not image_dir.is_dir():
        raise NotADirectoryError(f"not a readable directory: {image_dir}")

    labels: dict[str, IrmaCode] = {}
    warnings: list[str] = []
    skipped = 0
    if labels_file is not None:
        labels, warnings, skipped = _parse_labels_file(Path(labels_file))

    entries: list[ManifestEntry] = []
    seen: dict[str, Path] = {}
    for path in sorted(image_dir.iterdir()):
        if not path.is_file() or path.suffix.lower() not in IMAGE_SUFFIXES:
            continue
        if path.stem in seen:
            raise ValueError(f"duplicate image id {path.stem!r}: {seen[path.stem]} and {path}")
        seen[path.stem] = path
        entries.append(ManifestEntry(path=path, id=path.stem, code=labels.pop(path.stem, None)))

    for orphan in sorted(labels):
        warnings.append(f"label {orphan!r} has no matching image")

    for message in warnings:
        logger.warning("%s", message)
    entries.sort(key=lambda e: e.id)
    return DatasetManifest(entries=tuple(entries), warnings=tuple(warnings), skipped_labels=skipped)


def build_index(
    manifest: DatasetManifest,
    encoder: EncoderSpec,
    workers: Optional[int] = None,
) -> BarcodeIndex:
    """Encode every decodable image in the manifest into an index.

    Unreadable files are logged and skipped; the record list is sorted by
    id afterwards so the result is identical for any worker count.
    """
    if not manifest.entries:
        raise ValueError("manifest is empty")

    def encode_entry(entry: ManifestEntry) -> Optional[IndexRecord]:
        try:
            img = read_gray(entry.path)
        except (OSError, ValueError) as exc:
            logger.warning("skipping %s: %s", entry.path, exc)
            return None
        return IndexRecord(id=entry.id, code=entry.code, barcode=encoder.encode(img))

    max_workers = workers or os.cpu_count() or 1
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(encode_entry, manifest.entries))
    else:
        results = [encode_entry(e) for e in manifest.entries]

    records = sorted((r for r in results if r is not None), key=lambda r: r.id)
    if not records:
        raise ValueError("no decodable images in manifest")
    return BarcodeIndex(records, encoder_config=encoder)


def _index_lines(index: BarcodeIndex) -> list[str]:
    spec = index.encoder_config
    if not isinstance(spec, EncoderSpec):
        raise ValueError("index has no serializable encoder config")
    header = " ".join(
        [INDEX_MAGIC, INDEX_VERSION, *spec.header_fields(), str(index.bit_length)]
    )
    lines = [header]
    for rec in index.records:
        code_text = str(rec.code) if rec.code is not None else "-"
        lines.append(f"{rec.id}\t{code_text}\t{barcode_to_hex(rec.barcode)}")
    return lines


def save_index(index: BarcodeIndex, path: str | Path) -> None:
    """Write the index atomically (temp file + rename), checksum last."""
    path = Path(path)
    lines = _index_lines(index)
    digest = hashlib.sha256()
    for line in lines:
        digest.update(line.encode("utf-8") + b"\n")
    lines.append(f"#sha256 {digest.hexdigest()}")
    payload = "".join(line + "\n" for line in lines).encode("utf-8")

    fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def load_index(path: str | Path) -> BarcodeIndex:
    """Read an index file back, verifying version, record syntax, and checksum."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 3:
        raise IndexFileError(f"{path}: too short to be an index file")

    header = lines[0].split(" ")
    if len(header) != 7 or header[0] != INDEX_MAGIC:
        raise IndexFileError(f"{path}: line 1: bad header {lines[0]!r}")
    if header[1] != INDEX_VERSION:
        raise IndexVersionError(
            f"{path}: file version {header[1]!r}, reader version {INDEX_VERSION}"
        )
    try:
        spec = EncoderSpec.from_header_fields(header[2:6])
        bit_length = int(header[6])
    except ValueError as exc:
        raise IndexFileError(f"{path}: line 1: {exc}") from exc

    if not lines[-1].startswith("#sha256 "):
        raise IndexFileError(f"{path}: truncated file, checksum line missing")

    records = []
    for lineno, line in enumerate(lines[1:-1], start=2):
        parts = line.split("\t")
        if len(parts) != 3:
            raise IndexFileError(f"{path}: line {lineno}: expected 3 tab-separated fields")
        record_id, code_text, hex_text = parts
        try:
            code = None if code_text == "-" else parse_irma(code_text)
            barcode = barcode_from_hex(hex_text, bit_length, spec.tag, spec.n_p or None)
        except ValueError as exc:
            raise IndexFileError(f"{path}: line {lineno}: {exc}") from exc
        records.append(IndexRecord(id=record_id, code=code, barcode=barcode))

    digest = hashlib.sha256()
    for line in lines[:-1]:
        digest.update(line.encode("utf-8") + b"\n")
    stated = lines[-1][len("#sha256 ") :].strip()
    if stated != digest.hexdigest():
        raise IndexIntegrityError(f"{path}: checksum mismatch, file is corrupt")

    if not records:
        raise IndexFileError(f"{path}: index contains no records")
    return BarcodeIndex(records, encoder_config=spec)
