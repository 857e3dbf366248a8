"""Image file decoding, encoding, and batch feature extraction."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import ImageDecodeError
from ..features import ExtractionConfig, FeatureVector, RgbImage, extract_features

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")

THREADS_ENV_VAR = "ARTFEAT_THREADS"


def decode_image(path: str | Path) -> RgbImage:
    """Decode a PNG or JPEG file into a unit-interval RGB raster."""
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("RGB"), dtype=np.float64)
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise ImageDecodeError(f"{path}: {exc}") from exc
    return RgbImage(arr / 255.0)


def encode_png(img: RgbImage, path: str | Path) -> None:
    """Write an RGB raster as an 8-bit PNG (lossless, deterministic bytes)."""
    quantized = np.round(img.pixels * 255.0).astype(np.uint8)
    Image.fromarray(quantized, mode="RGB").save(path, format="PNG")


def extract_from_file(path: str | Path, cfg: ExtractionConfig = ExtractionConfig()) -> FeatureVector:
    return extract_features(decode_image(path), cfg)


def resolve_thread_count(requested: Optional[int] = None) -> int:
    """Worker count for batch extraction, capped by the ARTFEAT_THREADS env var."""
    cap = os.environ.get(THREADS_ENV_VAR)
    limit = int(cap) if cap else (os.cpu_count() or 1)
    n = requested if requested is not None else limit
    return max(1, min(n, limit))


def list_image_files(directory: str | Path) -> list[Path]:
    """Image files directly inside a directory, sorted by name."""
    root = Path(directory)
    return sorted(
        p for p in root.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )


def extract_batch(
    paths: list[Path],
    cfg: ExtractionConfig = ExtractionConfig(),
    threads: Optional[int] = None,
) -> tuple[dict[str, FeatureVector], list[tuple[str, str]]]:
    """Extract features for many files; pure per file, so fan-out is safe.

    Returns (features keyed by file stem, failures as (name, reason) pairs),
    both in sorted-by-name order regardless of thread scheduling.
    """
    ordered = sorted(paths, key=lambda p: p.name)

    def one(path: Path):
        try:
            return path.stem, extract_from_file(path, cfg), None
        except ImageDecodeError as exc:
            return path.stem, None, str(exc)

    workers = resolve_thread_count(threads)
    if workers == 1 or len(ordered) <= 1:
        results = [one(p) for p in ordered]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, ordered))

    features: dict[str, FeatureVector] = {}
    failures: list[tuple[str, str]] = []
    for stem, fv, reason in results:
        if fv is not None:
            features[stem] = fv
        else:
            failures.append((stem, reason))
    return features, failures
