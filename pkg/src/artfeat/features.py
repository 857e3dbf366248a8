"""Painting-effort measures computed from a decoded RGB raster.

Two scalar measures are extracted per image:

* line variance  -- population variance of a binarized Sobel edge map of the
  grayscale image (equals p*(1-p) for edge fraction p, so it lies in [0, 1/4]);
* color variance -- population variance of per-pixel hue values, normalized
  into [0, 1), with achromatic pixels (max channel == min channel) excluded.

All operations are pure and deterministic: the same image and configuration
always produce bit-identical results.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, ImageTooSmallError, NoChromaticPixelsError

GRAY_WEIGHTS = (0.3, 0.59, 0.11)

HUE_MODES = ("standard", "paper_literal")

# Largest attainable Sobel gradient magnitude for inputs confined to [0, 1]:
# sqrt(20), reached by a corner-contrast pattern (the expression is linear in
# each pixel, so the maximum over [0,1]^9 sits at a binary vertex; exhaustive
# enumeration of the 512 vertices gives max gx^2 + gy^2 = 20).
SOBEL_MAX_MAGNITUDE = math.sqrt(20.0)


# ---------------------------------------------------------------------------
# raster types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RgbImage:
    """Decoded raster: float64 array of shape (height, width, 3) in [0, 1]."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 3 or px.shape[2] != 3:
            raise DomainError(f"expected a (height, width, 3) pixel array, got shape {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise DomainError("image must be at least 1x1")
        if not np.isfinite(px).all() or px.min() < 0.0 or px.max() > 1.0:
            raise DomainError("channel values must lie in [0, 1]")
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Single-channel raster with values in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise DomainError(f"expected a (height, width) array, got shape {v.shape}")
        if not np.isfinite(v).all() or v.min() < 0.0 or v.max() > 1.0:
            raise DomainError("grayscale values must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class EdgeMap:
    """Binary raster: 1 marks an edge pixel, 0 the background."""

    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits)
        if b.ndim != 2 or b.shape[0] < 1 or b.shape[1] < 1:
            raise DomainError(f"expected a (height, width) array, got shape {b.shape}")
        if not np.isin(b, (0, 1)).all():
            raise DomainError("edge map entries must be exactly 0 or 1")
        object.__setattr__(self, "bits", b.astype(np.uint8))

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]


@dataclass(frozen=True, eq=False)
class HueMap:
    """Per-pixel normalized hues in [0, 1); NaN marks an achromatic pixel."""

    hues: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.hues, dtype=np.float64)
        if h.ndim != 2 or h.shape[0] < 1 or h.shape[1] < 1:
            raise DomainError(f"expected a (height, width) array, got shape {h.shape}")
        defined = h[~np.isnan(h)]
        if defined.size and (defined.min() < 0.0 or defined.max() >= 1.0):
            raise DomainError("defined hues must lie in [0, 1)")
        object.__setattr__(self, "hues", h)

    @property
    def height(self) -> int:
        return self.hues.shape[0]

    @property
    def width(self) -> int:
        return self.hues.shape[1]

    @property
    def defined_mask(self) -> np.ndarray:
        return ~np.isnan(self.hues)


@dataclass(frozen=True)
class FeatureVector:
    """The two effort measures plus extraction metadata for one image."""

    line_variance: float
    color_variance: float
    defined_hue_fraction: float
    extraction_config_hash: str

    def __post_init__(self):
        if not 0.0 <= self.line_variance <= 0.25 + 1e-12:
            raise DomainError(f"line_variance {self.line_variance} outside [0, 0.25]")
        if self.color_variance < 0.0:
            raise DomainError(f"color_variance {self.color_variance} must be >= 0")
        if not 0.0 <= self.defined_hue_fraction <= 1.0:
            raise DomainError(f"defined_hue_fraction {self.defined_hue_fraction} outside [0, 1]")


@dataclass(frozen=True)
class ExtractionConfig:
    """Knobs of the extraction pipeline.

    resize_max_side : longest side after area-average downsampling, or None
        to keep the native resolution (images smaller than the limit are
        never upsampled).
    edge_threshold : normalized gradient magnitude above which a pixel is an
        edge; strictly between 0 and 1.
    hue_mode : "standard" puts pure blue at 240 degrees; "paper_literal"
        keeps an alternate blue branch (60*(B-R)/(max-min) + 120) for audits.
    hue_scale : factor mapping degrees to the unit interval (default 1/360).
    """

    resize_max_side: Optional[int] = 512
    edge_threshold: float = 0.25
    hue_mode: str = "standard"
    hue_scale: float = 1.0 / 360.0

    def __post_init__(self):
        if self.resize_max_side is not None and self.resize_max_side < 8:
            raise DomainError("resize_max_side must be >= 8 when enabled")
        if not 0.0 < self.edge_threshold < 1.0:
            raise DomainError("edge_threshold must be strictly between 0 and 1")
        if self.hue_mode not in HUE_MODES:
            raise DomainError(f"hue_mode must be one of {HUE_MODES}")
        if not self.hue_scale > 0.0:
            raise DomainError("hue_scale must be positive")

    def config_hash(self) -> str:
        """Stable identifier of all fields; floats keyed by their repr."""
        payload = json.dumps(
            {
                "resize_max_side": self.resize_max_side,
                "edge_threshold": repr(self.edge_threshold),
                "hue_mode": self.hue_mode,
                "hue_scale": repr(self.hue_scale),
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode("ascii")).hexdigest()[:16]


# ---------------------------------------------------------------------------
# pipeline operations
# ---------------------------------------------------------------------------

def to_grayscale(img: RgbImage) -> GrayImage:
    """Weighted-channel grayscale: 0.3*R + 0.59*G + 0.11*B.

    The evaluation order R*0.3 + (G*0.59 + B*0.11) keeps constant images
    constant at the anchor values 0.5 and 1.0 in IEEE double arithmetic.
    """
    px = img.pixels
    vals = px[..., 0] * 0.3 + (px[..., 1] * 0.59 + px[..., 2] * 0.11)
    np.clip(vals, 0.0, 1.0, out=vals)
    return GrayImage(vals)


def detect_edges(gray: GrayImage, cfg: ExtractionConfig = ExtractionConfig()) -> EdgeMap:
    """Binarize the normalized 3x3 Sobel gradient magnitude.

    Pixels outside the raster are sampled clamp-to-edge so the output keeps
    the input dimensions. A bit is 1 exactly where
    magnitude / SOBEL_MAX_MAGNITUDE > cfg.edge_threshold.
    """
    if gray.width < 3 or gray.height < 3:
        raise ImageTooSmallError(
            f"edge detection needs at least 3x3 pixels, got {gray.width}x{gray.height}"
        )
    v = np.pad(gray.values, 1, mode="edge")
    gx = (v[:-2, 2:] - v[:-2, :-2]) + 2.0 * (v[1:-1, 2:] - v[1:-1, :-2]) + (v[2:, 2:] - v[2:, :-2])
    gy = (v[2:, :-2] - v[:-2, :-2]) + 2.0 * (v[2:, 1:-1] - v[:-2, 1:-1]) + (v[2:, 2:] - v[:-2, 2:])
    magnitude = np.sqrt(gx * gx + gy * gy)
    bits = magnitude / SOBEL_MAX_MAGNITUDE > cfg.edge_threshold
    return EdgeMap(bits.astype(np.uint8))


def line_variance(edges: EdgeMap) -> float:
    """Population variance (divide by N) of the edge bits.

    Grouping the sum of squared deviations by bit value makes the reduction
    exact in the count and independent of pixel order.
    """
    n = edges.bits.size
    ones = int(edges.bits.sum(dtype=np.int64))
    mu = ones / n
    return (ones * (1.0 - mu) ** 2 + (n - ones) * mu * mu) / n


def hue_value(
    r: float,
    g: float,
    b: float,
    mode: str = "standard",
    hue_scale: float = 1.0 / 360.0,
) -> Optional[float]:
    """Normalized hue of one pixel, or None when the pixel is achromatic.

    The hue is first computed in degrees (red 0, green 120; blue 240 in
    standard mode, and 60*(B-R)/(max-min) + 120 in paper_literal mode), then
    mapped to [0, 1) as (degrees / (1/hue_scale)) mod 1. Dividing by the
    cycle length rounds the canonical anchors exactly (120 deg -> 1/3,
    240 deg -> 2/3); multiplying by the scale instead lands one ulp away.
    """
    if mode not in HUE_MODES:
        raise DomainError(f"hue mode must be one of {HUE_MODES}")
    for name, value in (("r", r), ("g", g), ("b", b)):
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"channel {name}={value} outside [0, 1]")
    mx = max(r, g, b)
    mn = min(r, g, b)
    if mx == mn:
        return None
    delta = mx - mn
    if r == mx:
        degrees = 60.0 * (g - b) / delta + (0.0 if g >= b else 360.0)
    elif g == mx:
        degrees = 60.0 * (b - r) / delta + 120.0
    elif mode == "standard":
        degrees = 60.0 * (r - g) / delta + 240.0
    else:
        degrees = 60.0 * (b - r) / delta + 120.0
    return (degrees / (1.0 / hue_scale)) % 1.0


def hue_map(img: RgbImage, cfg: ExtractionConfig = ExtractionConfig()) -> HueMap:
    """Vectorized hue_value over every pixel; NaN marks achromatic pixels.

    Branch selection mirrors the scalar precedence (R, then G, then B), so
    the result is bit-identical to a per-pixel hue_value loop.
    """
    px = img.pixels
    r, g, b = px[..., 0], px[..., 1], px[..., 2]
    mx = np.maximum(r, np.maximum(g, b))
    mn = np.minimum(r, np.minimum(g, b))
    chromatic = mx > mn
    delta = np.where(chromatic, mx - mn, 1.0)

    max_r = r == mx
    max_g = (g == mx) & ~max_r
    max_b = ~max_r & ~max_g

    deg_r = 60.0 * (g - b) / delta + np.where(g >= b, 0.0, 360.0)
    deg_g = 60.0 * (b - r) / delta + 120.0
    if cfg.hue_mode == "standard":
        deg_b = 60.0 * (r - g) / delta + 240.0
    else:
        deg_b = 60.0 * (b - r) / delta + 120.0

    degrees = np.select(
        [max_r & chromatic, max_g & chromatic, max_b & chromatic],
        [deg_r, deg_g, deg_b],
        default=np.nan,
    )
    hues = (degrees / (1.0 / cfg.hue_scale)) % 1.0
    return HueMap(hues)


def color_variance(hues: HueMap) -> tuple[float, float]:
    """Population variance of the defined hues plus the defined fraction.

    Only defined (non-NaN) entries enter the variance; N is their count.
    The defined values are sorted before the two-pass reduction, so any
    permutation of the same pixels (e.g. a rotation) is bit-identical.
    """
    flat = hues.hues.ravel()
    defined = flat[~np.isnan(flat)]
    if defined.size == 0:
        raise NoChromaticPixelsError("every pixel is achromatic; hue variance is undefined")
    vals = np.sort(defined)
    n = vals.size
    mean = float(np.sum(vals) / n)
    var = float(np.sum((vals - mean) ** 2) / n)
    return var, n / flat.size


def downsample_max_side(img: RgbImage, max_side: int) -> RgbImage:
    """Area-average the image so its longest side equals max_side.

    Images already within the limit pass through untouched; upsampling is
    never performed. The box filter uses exact fractional pixel coverage and
    only elementwise arithmetic, so results do not depend on BLAS threading.
    """
    h, w = img.height, img.width
    if max(h, w) <= max_side:
        return img
    if w >= h:
        new_w = max_side
        new_h = max(1, round(h * max_side / w))
    else:
        new_h = max_side
        new_w = max(1, round(w * max_side / h))
    out = _resample_axis(img.pixels, new_h, axis=0)
    out = _resample_axis(out, new_w, axis=1)
    np.clip(out, 0.0, 1.0, out=out)
    return RgbImage(out)


def _box_taps(in_size: int, out_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Source indices and coverage weights of each output cell along one axis."""
    i = np.arange(out_size)
    starts = i * in_size / out_size
    ends = (i + 1) * in_size / out_size
    first = np.floor(starts).astype(np.int64)
    taps = int(np.max(np.ceil(ends).astype(np.int64) - first))
    idx = first[:, None] + np.arange(taps)[None, :]
    idx = np.minimum(idx, in_size - 1)
    k = first[:, None] + np.arange(taps)[None, :]
    overlap = np.minimum(ends[:, None], k + 1.0) - np.maximum(starts[:, None], k.astype(np.float64))
    weights = np.maximum(overlap, 0.0) / (in_size / out_size)
    return idx, weights


def _resample_axis(arr: np.ndarray, out_size: int, axis: int) -> np.ndarray:
    if arr.shape[axis] == out_size:
        return arr
    moved = np.moveaxis(arr, axis, 0)
    idx, weights = _box_taps(moved.shape[0], out_size)
    shape = (out_size,) + moved.shape[1:]
    out = np.zeros(shape, dtype=np.float64)
    extra = (1,) * (moved.ndim - 1)
    for t in range(idx.shape[1]):
        out += weights[:, t].reshape((-1,) + extra) * moved[idx[:, t]]
    return np.moveaxis(out, 0, axis)


def extract_features(img: RgbImage, cfg: ExtractionConfig = ExtractionConfig()) -> FeatureVector:
    """Run the full pipeline: resize, grayscale + edges + line variance,
    hues + color variance."""
    if cfg.resize_max_side is not None:
        img = downsample_max_side(img, cfg.resize_max_side)
    gray = to_grayscale(img)
    edges = detect_edges(gray, cfg)
    a = line_variance(edges)
    b, defined_fraction = color_variance(hue_map(img, cfg))
    return FeatureVector(
        line_variance=a,
        color_variance=b,
        defined_hue_fraction=defined_fraction,
        extraction_config_hash=cfg.config_hash(),
    )
