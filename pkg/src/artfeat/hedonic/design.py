"""Transforms corpus records into regression design matrices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from ..errors import CollinearColumnsError, NonPositiveValueError, SpecError
from ..features import FeatureVector
from ..transforms import age_years, log_feature, log_price, scaled_surface
from ..corpus.periods import picasso_period
from ..corpus.records import AuctionRecord, Corpus, canonicalize_category
from .spec import ModelSpec
from .terms import KIND_BASE, KIND_DUMMY, KIND_INTERACTION, KIND_SQUARE

INTERCEPT = "const"


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Named design columns plus the response, ready for least squares."""

    names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray
    ids: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "names", tuple(self.names))
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise SpecError(f"inconsistent design shapes X{X.shape}, y{y.shape}")
        if len(self.names) != X.shape[1]:
            raise SpecError(f"{len(self.names)} names for {X.shape[1]} columns")
        if self.ids and len(self.ids) != X.shape[0]:
            raise SpecError(f"{len(self.ids)} ids for {X.shape[0]} rows")
        if self.n <= self.k:
            raise SpecError(f"need more observations than columns, got n={self.n}, k={self.k}")
        if not (X[:, 0] == 1.0).all() or self.names[0] != INTERCEPT:
            raise SpecError("first design column must be the all-ones intercept")
        for j, name in enumerate(self.names):
            if not X[:, j].any():
                raise CollinearColumnsError((name,), "column is identically zero")
        for a in range(X.shape[1]):
            for b in range(a + 1, X.shape[1]):
                if np.array_equal(X[:, a], X[:, b]):
                    raise CollinearColumnsError(
                        (self.names[a], self.names[b]), "columns are identical"
                    )

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def k(self) -> int:
        return self.X.shape[1]


def transform_inputs(
    rows_or_corpus,
    *,
    surface_scale: float = 1000.0,
) -> dict[str, np.ndarray]:
    """Response and base regressor columns from joined (record, features) rows.

    Accepts a Corpus (its joined rows are used) or a sequence of
    (record, features) pairs. Lprice = ln(price); Lline/Lcolor =
    ln(1000 * measure); Age = sale year minus creation year; Surface =
    area / surface_scale. Raises NonPositiveValue naming the record when a
    log argument is not positive.
    """
    rows = rows_or_corpus.joined() if isinstance(rows_or_corpus, Corpus) else tuple(rows_or_corpus)
    for record, fv in rows:
        if not fv.line_variance > 0:
            raise NonPositiveValueError(record.id, "line_variance")
        if not fv.color_variance > 0:
            raise NonPositiveValueError(record.id, "color_variance")
    columns = {
        "Lprice": [log_price(r.price_usd) for r, _ in rows],
        "Lline": [log_feature(fv.line_variance) for _, fv in rows],
        "Lcolor": [log_feature(fv.color_variance) for _, fv in rows],
        "Surface": [scaled_surface(r.surface_cm2, surface_scale) for r, _ in rows],
        "Age": [float(age_years(r.sale_year, r.creation_year)) for r, _ in rows],
        "Signature": [float(r.signature) for r, _ in rows],
        "Dated": [float(r.dated) for r, _ in rows],
    }
    return {name: np.asarray(vals, dtype=np.float64) for name, vals in columns.items()}


def subsample_rows(
    corpus: Corpus, subsample: Mapping[str, object]
) -> tuple[tuple[AuctionRecord, FeatureVector], ...]:
    """Joined rows restricted by the spec's subsample filter."""
    rows = corpus.joined()
    period = subsample.get("period")
    if period is not None:
        rows = tuple((r, fv) for r, fv in rows if picasso_period(r.creation_year) == period)
    painter = subsample.get("painter")
    if painter is not None:
        key = canonicalize_category(str(painter))
        rows = tuple((r, fv) for r, fv in rows if r.painter == key)
    return rows


def _category(record: AuctionRecord, block: str, keep: Optional[tuple[str, ...]]) -> str:
    cat = str(record.sale_year) if block == "salesyear" else getattr(record, block)
    if keep is not None and cat not in keep:
        return "others"
    return cat


def _factor_values(name: str, base: dict[str, np.ndarray]) -> np.ndarray:
    if name in base:
        return base[name]
    # the only non-base factor kind is a square, e.g. "Lline^2"
    return base[name[:-2]] * base[name[:-2]]


def build_design(spec: ModelSpec, corpus: Corpus) -> DesignMatrix:
    """Encode a spec against a corpus: intercept first, then the spec's
    terms in order, with each dummy block one-hot encoded minus its
    reference category (columns in sorted category order)."""
    rows = subsample_rows(corpus, spec.subsample)
    if not rows:
        raise SpecError("empty subsample: no joined records match the filter")
    base = transform_inputs(rows, surface_scale=spec.surface_scale)
    n = len(rows)
    names: list[str] = [INTERCEPT]
    columns: list[np.ndarray] = [np.ones(n)]
    warnings: list[str] = []

    for term in spec.terms:
        if term.kind == KIND_BASE:
            names.append(term.name)
            columns.append(base[term.name])
        elif term.kind == KIND_SQUARE:
            names.append(term.name)
            columns.append(base[term.factors[0]] * base[term.factors[0]])
        elif term.kind == KIND_INTERACTION:
            names.append(term.name)
            columns.append(
                _factor_values(term.factors[0], base) * _factor_values(term.factors[1], base)
            )
        elif term.kind == KIND_DUMMY:
            block = term.name
            keep = spec.keep_categories.get(block)
            if keep is not None:
                keep = tuple(canonicalize_category(c) for c in keep)
            cats = [_category(r, block, keep) for r, _ in rows]
            observed = sorted(set(cats))
            reference = canonicalize_category(
                spec.reference_categories.get(block, observed[0])
            )
            if reference not in observed:
                raise SpecError(
                    f"reference category {reference!r} for block {block!r} not observed; "
                    f"observed: {', '.join(observed)}"
                )
            if len(observed) == 1:
                warnings.append(
                    f"dummy block {block!r} has a single category {observed[0]!r}; "
                    "no columns emitted"
                )
            for cat in observed:
                if cat == reference:
                    continue
                indicator = np.asarray([float(c == cat) for c in cats])
                count = int(indicator.sum())
                if count == 1:
                    warnings.append(
                        f"dummy column {block}[{cat}] has a single observation; "
                        "its robust SE is unreliable"
                    )
                names.append(f"{block}[{cat}]")
                columns.append(indicator)

    return DesignMatrix(
        names=tuple(names),
        X=np.column_stack(columns),
        y=base["Lprice"],
        ids=tuple(r.id for r, _ in rows),
        warnings=tuple(warnings),
    )
