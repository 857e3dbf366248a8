"""CSV loading/saving for records and features, with exclusion accounting.

File formats (UTF-8, comma-separated, one header row):

records CSV   id, painter, price_usd, image_path, creation_year, sale_year,
              surface_cm2, signature, dated, material, city, salesroom
features CSV  id, line_variance, color_variance, defined_hue_fraction,
              extraction_config_hash

Floats are written with repr(), so load -> save -> load round-trips
bit-identically. Booleans are written as 1/0.
"""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

from ..errors import ImageDecodeError, RowError, SchemaError
from ..features import ExtractionConfig, FeatureVector
from .images import extract_from_file, resolve_thread_count
from .records import AuctionRecord, Corpus, canonicalize_category

RECORD_COLUMNS = (
    "id", "painter", "price_usd", "image_path", "creation_year", "sale_year",
    "surface_cm2", "signature", "dated", "material", "city", "salesroom",
)
FEATURE_COLUMNS = (
    "id", "line_variance", "color_variance", "defined_hue_fraction",
    "extraction_config_hash",
)

DEFAULT_SALE_YEAR_RANGE = (2000, 2018)


@dataclass
class ExclusionReport:
    """Where every input row went: rows read = kept + excluded + rejected."""

    total_rows: int = 0
    kept: int = 0
    excluded_missing_price: int = 0
    excluded_missing_features: int = 0
    excluded_sale_year: int = 0
    excluded_city: int = 0
    rejected: list[RowError] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def excluded_by_rule(self) -> int:
        return (
            self.excluded_missing_price
            + self.excluded_missing_features
            + self.excluded_sale_year
            + self.excluded_city
        )

    def balanced(self) -> bool:
        return self.total_rows == self.kept + self.excluded_by_rule + len(self.rejected)

    def render(self) -> str:
        lines = [
            f"rows read: {self.total_rows}",
            f"kept: {self.kept}",
            f"excluded: missing price: {self.excluded_missing_price}",
            f"excluded: missing image/features: {self.excluded_missing_features}",
            f"excluded: sale year outside declared range: {self.excluded_sale_year}",
            f"excluded: filtered city: {self.excluded_city}",
            f"rejected (malformed): {len(self.rejected)}",
        ]
        lines += [f"  {err}" for err in self.rejected]
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def _check_header(found: Optional[Iterable[str]], expected: tuple[str, ...], path) -> None:
    if found is None:
        raise SchemaError(f"{path}: empty file, expected header {', '.join(expected)}")
    found = tuple(found)
    missing = [c for c in expected if c not in found]
    unknown = [c for c in found if c not in expected]
    if missing:
        raise SchemaError(f"{path}: missing column(s): {', '.join(missing)}")
    if unknown:
        raise SchemaError(f"{path}: unknown column(s): {', '.join(unknown)}")


def _parse_float(raw: str, row: int, name: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise RowError(row, name, f"not a number: {raw!r}") from None


def _parse_int(raw: str, row: int, name: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise RowError(row, name, f"not an integer: {raw!r}") from None


def _parse_bool(raw: str, row: int, name: str) -> bool:
    folded = raw.strip().casefold()
    if folded in ("1", "true"):
        return True
    if folded in ("0", "false"):
        return False
    raise RowError(row, name, f"not a boolean (use 1/0/true/false): {raw!r}")


def parse_record(fields: Mapping[str, str], row: int) -> AuctionRecord:
    """Build a record from one CSV row; raises RowError naming the bad field."""
    rid = fields["id"].strip()
    if not rid:
        raise RowError(row, "id", "empty id")
    price = _parse_float(fields["price_usd"], row, "price_usd")
    surface = _parse_float(fields["surface_cm2"], row, "surface_cm2")
    creation = _parse_int(fields["creation_year"], row, "creation_year")
    sale = _parse_int(fields["sale_year"], row, "sale_year")
    if not price > 0:
        raise RowError(row, "price_usd", f"must be > 0, got {price!r}")
    if not surface > 0:
        raise RowError(row, "surface_cm2", f"must be > 0, got {surface!r}")
    if sale < creation:
        raise RowError(row, "sale_year", f"sale year {sale} precedes creation year {creation}")
    image_path = fields["image_path"].strip() or None
    return AuctionRecord.make(
        id=rid,
        painter=fields["painter"],
        price_usd=price,
        image_path=image_path,
        creation_year=creation,
        sale_year=sale,
        surface_cm2=surface,
        signature=_parse_bool(fields["signature"], row, "signature"),
        dated=_parse_bool(fields["dated"], row, "dated"),
        material=fields["material"],
        city=fields["city"],
        salesroom=fields["salesroom"],
    )


def load_records_csv(
    path: str | Path,
    *,
    sale_year_range: Optional[tuple[int, int]] = DEFAULT_SALE_YEAR_RANGE,
    exclude_cities: tuple[str, ...] = (),
    on_row_error: str = "collect",
) -> tuple[list[AuctionRecord], ExclusionReport]:
    """Read and validate a records CSV.

    Malformed rows are rejected individually (collected in the report, or
    raised immediately when on_row_error="raise"); header problems abort
    with SchemaError. Rows failing a declared filter (missing price, sale
    year outside sale_year_range, excluded city) are excluded and counted.
    Row numbers in errors are 1-based file line numbers.
    """
    if on_row_error not in ("collect", "raise"):
        raise ValueError("on_row_error must be 'collect' or 'raise'")
    city_filter = {canonicalize_category(c) for c in exclude_cities}
    report = ExclusionReport()
    records: list[AuctionRecord] = []
    seen_ids: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(header, RECORD_COLUMNS, path)
        index = {name: header.index(name) for name in RECORD_COLUMNS}
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            report.total_rows += 1
            try:
                if len(row) != len(header):
                    raise RowError(line_no, "row", f"expected {len(header)} fields, got {len(row)}")
                fields = {name: row[index[name]] for name in RECORD_COLUMNS}
                if not fields["price_usd"].strip():
                    report.excluded_missing_price += 1
                    continue
                record = parse_record(fields, line_no)
                if record.id in seen_ids:
                    raise RowError(line_no, "id", f"duplicate id {record.id!r}")
                if sale_year_range is not None and not (
                    sale_year_range[0] <= record.sale_year <= sale_year_range[1]
                ):
                    report.excluded_sale_year += 1
                    continue
                if record.city in city_filter:
                    report.excluded_city += 1
                    continue
            except RowError as err:
                if on_row_error == "raise":
                    raise
                report.rejected.append(err)
                continue
            seen_ids.add(record.id)
            records.append(record)
            report.kept += 1
    return records, report


def save_records_csv(records: Iterable[AuctionRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_COLUMNS)
        for r in records:
            writer.writerow([
                r.id,
                r.painter,
                repr(r.price_usd),
                r.image_path or "",
                r.creation_year,
                r.sale_year,
                repr(r.surface_cm2),
                int(r.signature),
                int(r.dated),
                r.material,
                r.city,
                r.salesroom,
            ])


def load_features_csv(path: str | Path) -> dict[str, FeatureVector]:
    """Read a features CSV; all rows must share one extraction config hash."""
    features: dict[str, FeatureVector] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(header, FEATURE_COLUMNS, path)
        index = {name: header.index(name) for name in FEATURE_COLUMNS}
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            rid = row[index["id"]].strip()
            if rid in features:
                raise SchemaError(f"{path}: duplicate feature id {rid!r}")
            features[rid] = FeatureVector(
                line_variance=_parse_float(row[index["line_variance"]], line_no, "line_variance"),
                color_variance=_parse_float(row[index["color_variance"]], line_no, "color_variance"),
                defined_hue_fraction=_parse_float(
                    row[index["defined_hue_fraction"]], line_no, "defined_hue_fraction"
                ),
                extraction_config_hash=row[index["extraction_config_hash"]].strip(),
            )
    hashes = {fv.extraction_config_hash for fv in features.values()}
    if len(hashes) > 1:
        raise SchemaError(f"{path}: features mix extraction config hashes: {sorted(hashes)}")
    return features


def save_features_csv(features: Mapping[str, FeatureVector], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FEATURE_COLUMNS)
        for rid in sorted(features):
            fv = features[rid]
            writer.writerow([
                rid,
                repr(fv.line_variance),
                repr(fv.color_variance),
                repr(fv.defined_hue_fraction),
                fv.extraction_config_hash,
            ])


def _extract_by_path(
    paths_by_id: Mapping[str, Path],
    cfg: ExtractionConfig,
    threads: Optional[int],
) -> tuple[dict[str, FeatureVector], list[str]]:
    """Extract features per record id; returns (id -> features, failure reasons)."""
    ids = sorted(paths_by_id)

    def one(rid: str):
        try:
            return rid, extract_from_file(paths_by_id[rid], cfg), None
        except ImageDecodeError as exc:
            return rid, None, str(exc)

    workers = resolve_thread_count(threads)
    if workers == 1 or len(ids) <= 1:
        results = [one(rid) for rid in ids]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, ids))
    features = {rid: fv for rid, fv, _ in results if fv is not None}
    failures = [reason for _, fv, reason in results if fv is None]
    return features, failures


def load_corpus(
    records_csv: str | Path,
    features_source: Optional[str | Path] = None,
    *,
    cfg: ExtractionConfig = ExtractionConfig(),
    sale_year_range: Optional[tuple[int, int]] = DEFAULT_SALE_YEAR_RANGE,
    exclude_cities: tuple[str, ...] = (),
    on_row_error: str = "collect",
    provenance: str = "",
    threads: Optional[int] = None,
) -> tuple[Corpus, ExclusionReport]:
    """Load records and join features from a CSV file or an image directory.

    Records without a matching feature row (or with a missing/undecodable
    image, when extracting from a directory) are excluded and counted.
    """
    records, report = load_records_csv(
        records_csv,
        sale_year_range=sale_year_range,
        exclude_cities=exclude_cities,
        on_row_error=on_row_error,
    )
    provenance = provenance or str(records_csv)
    if features_source is None:
        corpus = Corpus(tuple(records), {}, provenance)
        return corpus, report

    source = Path(features_source)
    features: dict[str, FeatureVector]
    if source.is_dir():
        for r in records:
            if not r.image_path:
                report.notes.append(f"record {r.id!r}: no image_path")
        by_path, failures = _extract_by_path(
            {r.id: source / r.image_path for r in records if r.image_path}, cfg, threads
        )
        report.notes.extend(f"image failed to decode: {reason}" for reason in failures)
        features = by_path
    elif source.is_file():
        features = load_features_csv(source)
    else:
        raise SchemaError(f"features source {source} is neither a file nor a directory")

    kept_records = []
    for r in records:
        if r.id in features:
            kept_records.append(r)
        else:
            report.excluded_missing_features += 1
            report.kept -= 1
    corpus = Corpus(
        tuple(kept_records),
        {r.id: features[r.id] for r in kept_records},
        provenance,
    )
    return corpus, report
