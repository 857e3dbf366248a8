"""Synthetic corpora with planted regression coefficients.

Log prices are generated as a known linear combination of transformed
attributes plus Gaussian noise, so a downstream fit has a ground truth to
recover: with zero noise the fitted coefficients must equal the planted ones.

Two feature modes:
* tabular -- effort measures drawn directly from declared ranges;
* image   -- a small synthetic painting is rendered per record and the
  measures are extracted from its (quantized, PNG-exact) pixels, exercising
  the extraction pipeline end to end.
"""
from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from ..errors import InvalidPlantSpecError
from ..features import ExtractionConfig, FeatureVector, RgbImage, extract_features
from ..transforms import age_years, log_feature, scaled_surface
from .images import encode_png
from .records import AuctionRecord, Corpus

PLANT_CONTINUOUS = ("Lline", "Lcolor", "Surface", "Age")
PLANT_BINARY = ("Signature", "Dated")
PLANT_BLOCKS = ("material", "city", "salesroom", "salesyear", "painter")

TABULAR_CONFIG_HASH = "synthetic-tabular"

STAMP_SIZE = 12     # black/white calibration corner: guarantees edge pixels
RECT_MARGIN = 14    # rectangles stay clear of the stamp
RECT_MIN_SIDE = 8


@dataclass(frozen=True)
class AttributeRanges:
    """Sampling ranges for synthetic attributes (defaults bracket the
    observed auction sample: effort measures, areas from 16 cm^2 up to a
    163,500 cm^2 monumental canvas, creation 1881-1973, sales 2000-2018)."""

    line_range: tuple[float, float] = (0.040, 0.156)
    color_range: tuple[float, float] = (0.006, 0.441)
    surface_cm2_range: tuple[float, float] = (16.0, 163500.0)
    creation_years: tuple[int, int] = (1881, 1973)
    sale_years: tuple[int, int] = (2000, 2018)
    signature_share: float = 0.564
    dated_share: float = 0.617
    materials: tuple[tuple[str, float], ...] = (
        ("oil", 0.40), ("watercolor", 0.16), ("gouache", 0.12),
        ("drawing", 0.14), ("print", 0.12), ("others", 0.06),
    )
    cities: tuple[tuple[str, float], ...] = (
        ("new york", 0.38), ("london", 0.32), ("paris", 0.12),
        ("hong kong", 0.10), ("others", 0.08),
    )
    salesrooms: tuple[tuple[str, float], ...] = (
        ("christies", 0.42), ("sothebys", 0.40), ("phillips", 0.08),
        ("bonhams", 0.06), ("others", 0.04),
    )

    def __post_init__(self):
        for table in (self.materials, self.cities, self.salesrooms):
            total = math.fsum(p for _, p in table)
            if abs(total - 1.0) > 1e-9:
                raise InvalidPlantSpecError(f"category shares must sum to 1, got {total}")


def _validate_plant_key(key: str) -> None:
    if key == "const" or key in PLANT_CONTINUOUS or key in PLANT_BINARY:
        return
    if key.endswith("^2"):
        base = key[:-2]
        if base in PLANT_CONTINUOUS:
            return
        raise InvalidPlantSpecError(f"only continuous terms can be squared: {key!r}")
    if "*" in key:
        parts = key.split("*")
        if len(parts) != 2 or parts[0] == parts[1]:
            raise InvalidPlantSpecError(f"interaction must join two distinct terms: {key!r}")
        for part in parts:
            if part not in PLANT_CONTINUOUS and part not in PLANT_BINARY:
                raise InvalidPlantSpecError(f"unknown interaction factor {part!r} in {key!r}")
        return
    if key.endswith("]") and "[" in key:
        block, _, category = key[:-1].partition("[")
        if block not in PLANT_BLOCKS:
            raise InvalidPlantSpecError(f"unknown dummy block {block!r} in {key!r}")
        if not category:
            raise InvalidPlantSpecError(f"empty category in {key!r}")
        return
    raise InvalidPlantSpecError(f"unknown plant term {key!r}")


@dataclass(frozen=True)
class PlantSpec:
    """Term-name -> coefficient mapping defining the true price process.

    Term names match the regression design grammar: "const", base terms
    (Lline, Lcolor, Surface, Age, Signature, Dated), squares like
    "Surface^2", interactions like "Lcolor*Surface", and dummy-category
    effects like "city[paris]".
    """

    coefficients: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", dict(self.coefficients))
        if not self.coefficients:
            raise InvalidPlantSpecError("plant spec needs at least one coefficient")
        for key, value in self.coefficients.items():
            _validate_plant_key(key)
            if not math.isfinite(value):
                raise InvalidPlantSpecError(f"coefficient for {key!r} must be finite")


def _term_value(key: str, base: Mapping[str, float], categories: Mapping[str, str]) -> float:
    if key == "const":
        return 1.0
    if key in base:
        return base[key]
    if key.endswith("^2"):
        return base[key[:-2]] ** 2
    if "*" in key:
        a, b = key.split("*")
        return base[a] * base[b]
    block, _, category = key[:-1].partition("[")
    return 1.0 if categories[block] == category else 0.0


def _pick(rng: np.random.Generator, table: tuple[tuple[str, float], ...]) -> str:
    x = rng.random()
    acc = 0.0
    for name, share in table:
        acc += share
        if x < acc:
            return name
    return table[-1][0]


def render_synthetic_image(rng: np.random.Generator, size: int = 96) -> np.ndarray:
    """A deterministic toy painting as a uint8 (size, size, 3) array.

    Saturated background plus 1-4 saturated rectangles at hue offsets in
    [0.15, 0.85], and a black/white corner stamp with a red block. The stamp
    guarantees edge pixels, the rectangles a second distinct hue, so both
    effort measures are strictly positive.
    """
    if size < 2 * RECT_MARGIN + RECT_MIN_SIDE:
        raise InvalidPlantSpecError(f"image size must be >= {2 * RECT_MARGIN + RECT_MIN_SIDE}")

    def hue_rgb(h: float) -> np.ndarray:
        return np.round(np.array(colorsys.hsv_to_rgb(h % 1.0, 1.0, 1.0)) * 255.0).astype(np.uint8)

    bg_hue = rng.random()
    img = np.empty((size, size, 3), dtype=np.uint8)
    img[:, :] = hue_rgb(bg_hue)

    for _ in range(int(rng.integers(1, 5))):
        offset = 0.15 + 0.7 * rng.random()
        r0 = int(rng.integers(RECT_MARGIN, size - RECT_MIN_SIDE))
        c0 = int(rng.integers(RECT_MARGIN, size - RECT_MIN_SIDE))
        h = int(rng.integers(RECT_MIN_SIDE, size - r0 + 1))
        w = int(rng.integers(RECT_MIN_SIDE, size - c0 + 1))
        img[r0:r0 + h, c0:c0 + w] = hue_rgb(bg_hue + offset)

    img[:STAMP_SIZE, :STAMP_SIZE // 2] = (0, 0, 0)
    img[:STAMP_SIZE, STAMP_SIZE // 2:STAMP_SIZE] = (255, 255, 255)
    img[:4, :4] = (255, 0, 0)
    return img


def generate_synthetic(
    n: int,
    plant: PlantSpec,
    noise_sd: float,
    seed: int,
    *,
    image_dir: Optional[str | Path] = None,
    render_images: bool = False,
    cfg: ExtractionConfig = ExtractionConfig(),
    ranges: AttributeRanges = AttributeRanges(),
    surface_scale: float = 1000.0,
    image_size: int = 96,
    painter: str = "picasso",
) -> Corpus:
    """Draw n records with log price = planted combination + N(0, sd) noise.

    Fully reproducible from the seed. With render_images (implied by
    image_dir), features are extracted from rendered rasters after 8-bit
    quantization, so re-extracting from the saved PNGs reproduces them
    bit-identically.
    """
    if noise_sd < 0:
        raise InvalidPlantSpecError(f"noise sd must be >= 0, got {noise_sd}")
    if n <= len(plant.coefficients) + 10:
        raise InvalidPlantSpecError(
            f"n={n} too small for {len(plant.coefficients)} planted terms (need > terms + 10)"
        )
    render_images = render_images or image_dir is not None
    if image_dir is not None:
        image_dir = Path(image_dir)
        image_dir.mkdir(parents=True, exist_ok=True)

    rng = np.random.default_rng(seed)
    rows = []
    features: dict[str, FeatureVector] = {}
    log_prices = np.empty(n)
    for i in range(n):
        rid = f"syn-{i:05d}"
        creation = int(rng.integers(ranges.creation_years[0], ranges.creation_years[1] + 1))
        sale = int(rng.integers(ranges.sale_years[0], ranges.sale_years[1] + 1))
        lo, hi = ranges.surface_cm2_range
        surface = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
        signature = bool(rng.random() < ranges.signature_share)
        dated = bool(rng.random() < ranges.dated_share)
        material = _pick(rng, ranges.materials)
        city = _pick(rng, ranges.cities)
        salesroom = _pick(rng, ranges.salesrooms)

        image_path = None
        if render_images:
            raster = render_synthetic_image(rng, image_size)
            fv = extract_features(RgbImage(raster / 255.0), cfg)
            if image_dir is not None:
                image_path = f"{rid}.png"
                encode_png(RgbImage(raster / 255.0), image_dir / image_path)
        else:
            fv = FeatureVector(
                line_variance=float(rng.uniform(*ranges.line_range)),
                color_variance=float(rng.uniform(*ranges.color_range)),
                defined_hue_fraction=1.0,
                extraction_config_hash=TABULAR_CONFIG_HASH,
            )
        features[rid] = fv

        base = {
            "Lline": log_feature(fv.line_variance),
            "Lcolor": log_feature(fv.color_variance),
            "Surface": scaled_surface(surface, surface_scale),
            "Age": float(age_years(sale, creation)),
            "Signature": float(signature),
            "Dated": float(dated),
        }
        categories = {
            "material": material,
            "city": city,
            "salesroom": salesroom,
            "salesyear": str(sale),
            "painter": painter,
        }
        log_prices[i] = math.fsum(
            coef * _term_value(key, base, categories)
            for key, coef in plant.coefficients.items()
        )
        rows.append((rid, creation, sale, surface, signature, dated,
                     material, city, salesroom, image_path))

    if noise_sd > 0:
        log_prices += rng.normal(0.0, noise_sd, n)

    records = tuple(
        AuctionRecord.make(
            id=rid,
            painter=painter,
            price_usd=float(np.exp(log_prices[i])),
            image_path=image_path,
            creation_year=creation,
            sale_year=sale,
            surface_cm2=surface,
            signature=signature,
            dated=dated,
            material=material,
            city=city,
            salesroom=salesroom,
        )
        for i, (rid, creation, sale, surface, signature, dated,
                material, city, salesroom, image_path) in enumerate(rows)
    )
    return Corpus(records, features, provenance=f"synthetic(seed={seed}, n={n})")
