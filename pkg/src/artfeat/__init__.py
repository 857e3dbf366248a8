"""artfeat: painting-effort measures from images and hedonic price regressions.

The package quantifies two aspects of a painting's execution from its
digital image (the variance of its detected lines, and the variance of its
pixel hues) and estimates hedonic auction-price regressions that include
these measures alongside physical and sale attributes, with
heteroskedasticity-robust standard errors.
"""
from . import corpus, hedonic
from .errors import ArtfeatError
from .features import (
    EdgeMap,
    ExtractionConfig,
    FeatureVector,
    GrayImage,
    HueMap,
    RgbImage,
    color_variance,
    detect_edges,
    downsample_max_side,
    extract_features,
    hue_map,
    hue_value,
    line_variance,
    to_grayscale,
)
from .manifest import TOOL_VERSION, RunManifest

__version__ = TOOL_VERSION

__all__ = [
    "ArtfeatError",
    "EdgeMap",
    "ExtractionConfig",
    "FeatureVector",
    "GrayImage",
    "HueMap",
    "RgbImage",
    "RunManifest",
    "color_variance",
    "corpus",
    "detect_edges",
    "downsample_max_side",
    "extract_features",
    "hedonic",
    "hue_map",
    "hue_value",
    "line_variance",
    "to_grayscale",
]
