"""Descriptive summary statistics over a corpus."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from ..errors import NonPositiveValueError, UnknownVariableError
from ..transforms import age_years, log_feature, log_price, scaled_surface
from .records import Corpus

DUMMY_BLOCKS = ("material", "city", "salesroom", "salesyear", "painter")

# Mirrors the usual descriptive-table layout: responses and effort measures
# first, then attributes, then per-category shares of the control blocks.
DEFAULT_VARIABLES = (
    "Lprice", "Lline", "Lcolor", "line_variance", "color_variance",
    "Surface", "Age", "Signature", "Dated",
    "material", "city", "salesroom",
)


@dataclass(frozen=True)
class SummaryRow:
    name: str
    n: int
    mean: float
    sd: float
    minimum: float
    maximum: float


def _summarize(name: str, values: Sequence[float]) -> SummaryRow:
    n = len(values)
    mean = math.fsum(values) / n
    # sample (divide by N-1) standard deviation, the descriptive convention
    sd = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1)) if n > 1 else 0.0
    return SummaryRow(name, n, mean, sd, min(values), max(values))


def _positive(record_id: str, field_name: str, value: float) -> float:
    if not value > 0:
        raise NonPositiveValueError(record_id, field_name)
    return value


def _category_of(record, block: str) -> str:
    if block == "salesyear":
        return str(record.sale_year)
    return getattr(record, block)


def _column(corpus: Corpus, name: str, surface_scale: float) -> list[float]:
    records = corpus.records
    joined = corpus.joined()
    if name == "Lprice":
        return [log_price(r.price_usd) for r in records]
    if name == "price_usd":
        return [r.price_usd for r in records]
    if name == "Lline":
        return [log_feature(_positive(r.id, "line_variance", fv.line_variance)) for r, fv in joined]
    if name == "Lcolor":
        return [log_feature(_positive(r.id, "color_variance", fv.color_variance)) for r, fv in joined]
    if name == "line_variance":
        return [fv.line_variance for _, fv in joined]
    if name == "color_variance":
        return [fv.color_variance for _, fv in joined]
    if name == "defined_hue_fraction":
        return [fv.defined_hue_fraction for _, fv in joined]
    if name == "Surface":
        return [scaled_surface(r.surface_cm2, surface_scale) for r in records]
    if name == "surface_cm2":
        return [r.surface_cm2 for r in records]
    if name == "Age":
        return [float(age_years(r.sale_year, r.creation_year)) for r in records]
    if name == "Signature":
        return [float(r.signature) for r in records]
    if name == "Dated":
        return [float(r.dated) for r in records]
    if name in ("creation_year", "sale_year"):
        return [float(getattr(r, name)) for r in records]
    raise UnknownVariableError(f"unknown summary variable {name!r}")


def summary_statistics(
    corpus: Corpus,
    variables: Sequence[str] = DEFAULT_VARIABLES,
    *,
    surface_scale: float = 1000.0,
) -> list[SummaryRow]:
    """One (N, mean, sd, min, max) row per variable.

    A dummy-block name expands into one row per observed category whose
    values are the 0/1 indicator, so the mean is the category's share.
    Feature-derived variables cover only records that have features.
    """
    if len(corpus) == 0:
        raise UnknownVariableError("cannot summarize an empty corpus")
    rows: list[SummaryRow] = []
    for name in variables:
        if name in DUMMY_BLOCKS:
            cats = sorted({_category_of(r, name) for r in corpus.records})
            for cat in cats:
                indicator = [float(_category_of(r, name) == cat) for r in corpus.records]
                rows.append(_summarize(f"{name}[{cat}]", indicator))
        else:
            values = _column(corpus, name, surface_scale)
            if not values:
                raise UnknownVariableError(
                    f"variable {name!r} needs features, but the corpus has none joined"
                )
            rows.append(_summarize(name, values))
    return rows
