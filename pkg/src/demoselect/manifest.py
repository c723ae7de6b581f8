"""Data ingestion: sample manifests, PGM/PPM artifacts, feature CSVs.

Manifest schema (UTF-8 JSON, paths resolved relative to the manifest file):

    {"version": 1,
     "samples": [{"id": 0, "mask": "m0.pgm", "image": "i0.ppm", "feature_row": 0}, ...],
     "features": "features.csv"}

Masks are binary PGM (P5, maxval 255); a pixel >= 128 is foreground.  Images
are PPM (P6) or PGM (P5) and are normalized by their maxval at load.
Feature rows are "id, c1, c2, ..." with one consistent dimension per file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, MissingEntry, MissingFile, ParseError
from .metrics import BinaryMask, PixelImage

MANIFEST_VERSION = 1


def _read_pnm(path: Path) -> tuple[str, int, int, int, np.ndarray]:
    """Parse a binary PNM file into (magic, width, height, maxval, samples)."""
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise MissingFile(f"{path}: {exc}") from None
    magic = data[:2].decode("ascii", errors="replace")
    if magic not in ("P5", "P6"):
        raise ParseError(f"{path}: unsupported magic {magic!r}, expected P5 or P6")
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ParseError(f"{path}: truncated header")
        try:
            fields.append(int(data[start:pos]))
        except ValueError:
            raise ParseError(f"{path}: bad header token {data[start:pos]!r}") from None
    pos += 1  # single whitespace byte after maxval
    width, height, maxval = fields
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise ParseError(f"{path}: invalid dimensions or maxval in header")
    channels = 3 if magic == "P6" else 1
    count = width * height * channels
    if maxval < 256:
        raw = np.frombuffer(data, dtype=np.uint8, offset=pos)
    else:
        raw = np.frombuffer(data, dtype=">u2", offset=pos)
    if raw.size < count:
        raise ParseError(f"{path}: expected {count} samples, found {raw.size}")
    return magic, width, height, maxval, raw[:count]


def load_mask(path: str | Path) -> BinaryMask:
    """Load a binary PGM mask; pixel >= 128 means foreground."""
    path = Path(path)
    magic, width, height, maxval, raw = _read_pnm(path)
    if magic != "P5":
        raise ParseError(f"{path}: masks must be PGM (P5), got {magic}")
    if maxval != 255:
        raise ParseError(f"{path}: mask maxval must be 255, got {maxval}")
    return BinaryMask(width, height, raw >= 128)


def save_mask(mask: BinaryMask, path: str | Path) -> None:
    path = Path(path)
    header = f"P5 {mask.width} {mask.height} 255\n".encode("ascii")
    body = np.where(mask.bits, 255, 0).astype(np.uint8).tobytes()
    path.write_bytes(header + body)


def load_image(path: str | Path) -> PixelImage:
    """Load a PPM/PGM image, normalizing values by the file's maxval."""
    path = Path(path)
    magic, width, height, maxval, raw = _read_pnm(path)
    channels = 3 if magic == "P6" else 1
    values = raw.astype(np.float64) / float(maxval)
    return PixelImage(width, height, channels, values)


def save_image(image: PixelImage, path: str | Path) -> None:
    path = Path(path)
    magic = "P6" if image.channels == 3 else "P5"
    header = f"{magic} {image.width} {image.height} 255\n".encode("ascii")
    body = np.rint(image.values * 255.0).astype(np.uint8).tobytes()
    path.write_bytes(header + body)


def load_features_csv(path: str | Path) -> dict[int, np.ndarray]:
    """Parse a feature CSV into an id -> vector map with one shared dimension."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MissingFile(f"{path}: {exc}") from None
    features: dict[int, np.ndarray] = {}
    dim = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        cells = line.split(",")
        try:
            fid = int(cells[0])
            vec = np.array([float(c) for c in cells[1:]], dtype=np.float64)
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
        if vec.size == 0:
            raise ParseError(f"{path}:{lineno}: feature row {fid} has no components")
        if dim is None:
            dim = vec.size
        elif vec.size != dim:
            raise DimensionMismatch(
                f"{path}:{lineno}: feature row {fid} has dimension {vec.size}, "
                f"expected {dim}"
            )
        if fid in features:
            raise ParseError(f"{path}:{lineno}: duplicate feature row id {fid}")
        vec.setflags(write=False)
        features[fid] = vec
    return features


@dataclass
class LoadedSample:
    id: int
    mask: BinaryMask | None = None
    image: PixelImage | None = None
    feature: np.ndarray | None = None


@dataclass
class SamplePool:
    samples: list[LoadedSample]
    features: dict[int, np.ndarray]

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(s.id for s in self.samples)

    def by_id(self, sid: int) -> LoadedSample:
        for s in self.samples:
            if s.id == sid:
                return s
        raise MissingEntry(f"no sample with id {sid} in pool")


def ingest_manifest(path: str | Path) -> SamplePool:
    """Load a manifest and all referenced artifacts, validating as it goes."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MissingFile(f"{path}: {exc}") from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: bad JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("version") != MANIFEST_VERSION:
        raise ParseError(f"{path}: expected manifest version {MANIFEST_VERSION}")
    entries = doc.get("samples")
    if not isinstance(entries, list) or not entries:
        raise ParseError(f"{path}: manifest needs a non-empty samples list")
    base = path.parent
    features: dict[int, np.ndarray] = {}
    if doc.get("features") is not None:
        features = load_features_csv(base / doc["features"])
    samples: list[LoadedSample] = []
    seen: set[int] = set()
    for entry in entries:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), int):
            raise ParseError(f"{path}: sample entry {entry!r} needs an integer id")
        sid = entry["id"]
        if sid < 0:
            raise ParseError(f"{path}: sample id {sid} must be non-negative")
        if sid in seen:
            raise ParseError(f"{path}: duplicate sample id {sid}")
        seen.add(sid)
        sample = LoadedSample(id=sid)
        if entry.get("mask") is not None:
            mask_path = base / entry["mask"]
            if not mask_path.is_file():
                raise MissingFile(f"sample {sid}: mask file {mask_path} not found")
            sample.mask = load_mask(mask_path)
        if entry.get("image") is not None:
            image_path = base / entry["image"]
            if not image_path.is_file():
                raise MissingFile(f"sample {sid}: image file {image_path} not found")
            sample.image = load_image(image_path)
        if entry.get("feature_row") is not None:
            row = entry["feature_row"]
            if row not in features:
                raise MissingEntry(
                    f"sample {sid}: feature_row {row} not present in features file"
                )
            sample.feature = features[row]
        samples.append(sample)
    return SamplePool(samples=samples, features=features)
