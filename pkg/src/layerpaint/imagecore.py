"""Input artifact loading and the shared raster data model.

Three artifacts drive a run: an RGB target image (PNG), a depth map
(binary 16-bit PGM with values normalized to [0, 1]), and a label map
(16-bit grayscale PNG of region ids plus a JSON metadata sidecar).
Loaders validate eagerly and return plain dataclasses holding numpy
arrays; the values are treated as immutable once constructed and are
safe to share across threads.

File contracts:
  - target image: PNG, 8-bit RGB or RGBA (alpha discarded)
  - depth:  "P5" PGM, maxval 65535, big-endian samples, row-major
  - labels: 16-bit grayscale PNG of ids + JSON array of
    {id, kind, score, category, semanticGroup}

The label value 65535 is reserved: pixels carrying it are folded into a
synthetic "background" stuff region so the plan always covers the whole
canvas even when a segmenter leaves voids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .errors import InputError

# Depth value orientation: which end of [0, 1] is closest to the viewer.
NEARER_HIGH = "nearer-high"  # larger value = nearer
NEARER_LOW = "nearer-low"    # larger value = farther
CONVENTIONS = (NEARER_HIGH, NEARER_LOW)

DEPTH_MAXVAL = 65535
UNLABELED_ID = 65535  # reserved label-map value for pixels no region claims
BACKGROUND_CATEGORY = "background"


@dataclass
class Image:
    """8-bit RGB raster, pixels shaped (height, width, 3)."""

    width: int
    height: int
    pixels: np.ndarray

    @property
    def diagonal(self) -> float:
        return float(np.hypot(self.width, self.height))

    @classmethod
    def from_array(cls, pixels: np.ndarray) -> "Image":
        pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
        h, w = pixels.shape[:2]
        return cls(width=w, height=h, pixels=pixels)


@dataclass
class DepthMap:
    """Scalar depth in [0, 1], shaped (height, width), with orientation flag."""

    width: int
    height: int
    values: np.ndarray
    convention: str = NEARER_HIGH

    @classmethod
    def from_array(cls, values: np.ndarray, convention: str = NEARER_HIGH) -> "DepthMap":
        if convention not in CONVENTIONS:
            raise InputError(f"unknown depth convention {convention!r}")
        values = np.ascontiguousarray(values, dtype=np.float64)
        h, w = values.shape
        return cls(width=w, height=h, values=values, convention=convention)


@dataclass
class Prediction:
    """One segmented region (thing or stuff) with confidence and semantics."""

    id: int
    kind: str  # "thing" | "stuff"
    score: float
    category: str
    semantic_group: int
    area: int
    weight: float


@dataclass
class Segmentation:
    """Per-pixel region ids plus the metadata of every region present."""

    label_map: np.ndarray  # (height, width) int32
    predictions: list[Prediction]

    def mask_of(self, prediction_id: int) -> np.ndarray:
        return self.label_map == prediction_id

    def prediction(self, prediction_id: int) -> Prediction:
        for p in self.predictions:
            if p.id == prediction_id:
                return p
        raise KeyError(prediction_id)


def load_image(path: str | Path) -> Image:
    """Decode an RGB(A) PNG into an Image; alpha is discarded."""
    try:
        with PILImage.open(path) as im:
            im.load()
            if im.mode != "RGB":
                im = im.convert("RGB")
            arr = np.asarray(im, dtype=np.uint8)
    except FileNotFoundError as e:
        raise InputError(f"unreadable file: {path}: {e}") from e
    except (UnidentifiedImageError, OSError, ValueError) as e:
        raise InputError(f"decode failure: {path}: {e}") from e
    if arr.ndim != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InputError(f"zero-dimension image: {path}")
    return Image.from_array(arr)


def save_image(image: Image, path: str | Path) -> None:
    PILImage.fromarray(image.pixels).save(path, format="PNG")


def _pgm_header(data: bytes) -> tuple[str, list[int], int]:
    """Parse a PGM header; returns (magic, [w, h, maxval], data offset)."""
    pos = 0
    tokens: list[bytes] = []
    while len(tokens) < 4:
        if pos >= len(data):
            raise InputError("malformed PGM header: truncated")
        c = data[pos : pos + 1]
        if c == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        elif c.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end : end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    # exactly one whitespace byte separates the maxval from the samples
    pos += 1
    magic = tokens[0].decode("ascii", "replace")
    try:
        nums = [int(t) for t in tokens[1:4]]
    except ValueError as e:
        raise InputError(f"malformed PGM header: {e}") from e
    return magic, nums, pos


def load_depth(path: str | Path, convention: str = NEARER_HIGH) -> DepthMap:
    """Read a 16-bit binary PGM depth map, scaling samples into [0, 1]."""
    if convention not in CONVENTIONS:
        raise InputError(f"unknown depth convention {convention!r}")
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"unreadable file: {path}: {e}") from e
    magic, (w, h, maxval), offset = _pgm_header(data)
    if magic != "P5":
        raise InputError(f"malformed PGM header: expected P5, got {magic!r}")
    if maxval != DEPTH_MAXVAL:
        raise InputError(f"unsupported PGM maxval {maxval}; expected {DEPTH_MAXVAL}")
    if w < 1 or h < 1:
        raise InputError(f"malformed PGM header: bad dimensions {w}x{h}")
    need = w * h * 2
    if len(data) - offset < need:
        raise InputError(f"truncated PGM: expected {need} sample bytes")
    samples = np.frombuffer(data, dtype=">u2", count=w * h, offset=offset)
    values = samples.reshape(h, w).astype(np.float64) / DEPTH_MAXVAL
    return DepthMap(width=w, height=h, values=values, convention=convention)


def save_depth(depth: DepthMap, path: str | Path) -> None:
    """Write a DepthMap as 16-bit binary PGM (inverse of load_depth)."""
    q = np.floor(depth.values * DEPTH_MAXVAL + 0.5)
    q = np.clip(q, 0, DEPTH_MAXVAL).astype(">u2")
    header = f"P5\n{depth.width} {depth.height}\n{DEPTH_MAXVAL}\n".encode("ascii")
    Path(path).write_bytes(header + q.tobytes())


def _parse_meta(meta_path: str | Path) -> dict[int, dict]:
    try:
        raw = json.loads(Path(meta_path).read_text())
    except OSError as e:
        raise InputError(f"unreadable file: {meta_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"malformed metadata JSON: {meta_path}: {e}") from e
    if not isinstance(raw, list):
        raise InputError(f"malformed metadata JSON: {meta_path}: expected an array")
    entries: dict[int, dict] = {}
    for entry in raw:
        try:
            pid = int(entry["id"])
            kind = str(entry["kind"])
            score = float(entry["score"])
            category = str(entry["category"])
            group = int(entry["semanticGroup"])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed metadata entry: {entry!r}: {e}") from e
        if pid in entries:
            raise InputError(f"duplicate metadata id {pid}")
        if kind not in ("thing", "stuff"):
            raise InputError(f"metadata id {pid}: unknown kind {kind!r}")
        if not 0.0 <= score <= 1.0:
            raise InputError(f"metadata id {pid}: score {score} outside [0, 1]")
        if kind == "stuff" and score != 1.0:
            raise InputError(f"metadata id {pid}: stuff entry with score {score} != 1.0")
        if group < 0:
            raise InputError(f"metadata id {pid}: negative semanticGroup")
        entries[pid] = {"kind": kind, "score": score, "category": category, "group": group}
    return entries


def load_labels(map_path: str | Path, meta_path: str | Path) -> Segmentation:
    """Read a label map plus metadata sidecar into a Segmentation.

    Every id present in the map must have a metadata entry, except the
    reserved UNLABELED_ID which is folded into a synthetic background
    stuff region ranked after every declared group.
    """
    try:
        with PILImage.open(map_path) as im:
            im.load()
            arr = np.asarray(im)
    except FileNotFoundError as e:
        raise InputError(f"unreadable file: {map_path}: {e}") from e
    except (UnidentifiedImageError, OSError, ValueError) as e:
        raise InputError(f"decode failure: {map_path}: {e}") from e
    if arr.ndim != 2 or not np.issubdtype(arr.dtype, np.integer):
        raise InputError(f"label map must be single-channel integer PNG: {map_path}")
    label_map = arr.astype(np.int32)
    entries = _parse_meta(meta_path)

    ids_present = np.unique(label_map)
    unknown = [int(i) for i in ids_present if int(i) not in entries and int(i) != UNLABELED_ID]
    if unknown:
        raise InputError(f"unknown prediction id {unknown[0]} in label map")

    if UNLABELED_ID in ids_present:
        bg_id = 0
        while bg_id in entries or bg_id == UNLABELED_ID:
            bg_id += 1
        groups = [e["group"] for e in entries.values() if e["kind"] == "stuff"]
        bg_group = (max(groups) if groups else 8) + 1
        entries[bg_id] = {
            "kind": "stuff",
            "score": 1.0,
            "category": BACKGROUND_CATEGORY,
            "group": bg_group,
        }
        label_map = np.where(label_map == UNLABELED_ID, bg_id, label_map)

    areas = np.bincount(label_map.ravel(), minlength=max(entries, default=0) + 1)
    predictions = []
    for pid in sorted(entries):
        e = entries[pid]
        area = int(areas[pid]) if pid < len(areas) else 0
        predictions.append(
            Prediction(
                id=pid,
                kind=e["kind"],
                score=e["score"],
                category=e["category"],
                semantic_group=e["group"],
                area=area,
                weight=e["score"] * area,
            )
        )
    return Segmentation(label_map=label_map, predictions=predictions)


def save_labels(seg: Segmentation, map_path: str | Path, meta_path: str | Path) -> None:
    """Write a Segmentation back out as 16-bit PNG + JSON sidecar."""
    arr = seg.label_map
    if arr.min() < 0 or arr.max() > 65535:
        raise InputError("label ids must fit in uint16 to be saved")
    PILImage.fromarray(arr.astype(np.uint16)).save(map_path, format="PNG")
    meta = [
        {
            "id": p.id,
            "kind": p.kind,
            "score": p.score,
            "category": p.category,
            "semanticGroup": p.semantic_group,
        }
        for p in seg.predictions
    ]
    Path(meta_path).write_text(json.dumps(meta, indent=2) + "\n")


def validate_consistent(image: Image, depth: DepthMap | None = None,
                        seg: Segmentation | None = None) -> None:
    """Require depth/label maps to match the target image pixel-for-pixel."""
    if depth is not None and (depth.width, depth.height) != (image.width, image.height):
        raise InputError(
            f"dimension mismatch: depth {depth.width}x{depth.height} "
            f"vs image {image.width}x{image.height}"
        )
    if seg is not None and seg.label_map.shape != (image.height, image.width):
        h, w = seg.label_map.shape
        raise InputError(
            f"dimension mismatch: labels {w}x{h} vs image {image.width}x{image.height}"
        )
