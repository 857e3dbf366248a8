"""Career-period classifier for Picasso creation years."""
from __future__ import annotations

from ..errors import OutOfRangeError

# Inclusive year spans; contiguous, so every year in [1881, 1973] maps to
# exactly one period.
PERIOD_SPANS: dict[int, tuple[int, int]] = {
    1: (1881, 1901),
    2: (1902, 1906),
    3: (1907, 1915),
    4: (1916, 1924),
    5: (1925, 1936),
    6: (1937, 1943),
    7: (1944, 1953),
    8: (1954, 1973),
}

YEAR_MIN = PERIOD_SPANS[1][0]
YEAR_MAX = PERIOD_SPANS[8][1]


def picasso_period(creation_year: int) -> int:
    """Map a creation year to its career period, 1 through 8."""
    if not YEAR_MIN <= creation_year <= YEAR_MAX:
        raise OutOfRangeError(
            f"creation year {creation_year} outside the covered range "
            f"[{YEAR_MIN}, {YEAR_MAX}]"
        )
    for period, (lo, hi) in PERIOD_SPANS.items():
        if lo <= creation_year <= hi:
            return period
    raise AssertionError("unreachable: spans tile the range")
