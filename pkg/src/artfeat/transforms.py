"""Scalar transforms shared by summaries and regression design building."""
from __future__ import annotations

import math

# Both effort measures live in (0, 1), so they are inflated by 1000 before
# taking logs; the scaled values land in a numerically comfortable range.
FEATURE_INFLATION = 1000.0

DEFAULT_SURFACE_SCALE = 1000.0


def log_price(price_usd: float) -> float:
    """Natural log of a positive sale price."""
    return math.log(price_usd)


def log_feature(value: float) -> float:
    """Natural log of an effort measure after inflating by 1000."""
    return math.log(FEATURE_INFLATION * value)


def age_years(sale_year: int, creation_year: int) -> int:
    """Years elapsed between creation and sale."""
    return sale_year - creation_year


def scaled_surface(surface_cm2: float, scale: float = DEFAULT_SURFACE_SCALE) -> float:
    """Painted area divided by the declared unit scale (default: thousands of cm^2)."""
    return surface_cm2 / scale
