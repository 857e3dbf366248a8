"""Auction-record corpora: loading, validation, summaries, periods, synthesis."""
from .images import decode_image, encode_png, extract_batch, extract_from_file, list_image_files
from .io import (
    DEFAULT_SALE_YEAR_RANGE,
    FEATURE_COLUMNS,
    RECORD_COLUMNS,
    ExclusionReport,
    load_corpus,
    load_features_csv,
    load_records_csv,
    parse_record,
    save_features_csv,
    save_records_csv,
)
from .periods import PERIOD_SPANS, YEAR_MAX, YEAR_MIN, picasso_period
from .records import AuctionRecord, Corpus, canonicalize_category
from .stats import DEFAULT_VARIABLES, SummaryRow, summary_statistics
from .synthetic import (
    AttributeRanges,
    PlantSpec,
    generate_synthetic,
    render_synthetic_image,
)

__all__ = [
    "AttributeRanges",
    "AuctionRecord",
    "Corpus",
    "DEFAULT_SALE_YEAR_RANGE",
    "DEFAULT_VARIABLES",
    "ExclusionReport",
    "FEATURE_COLUMNS",
    "PERIOD_SPANS",
    "PlantSpec",
    "RECORD_COLUMNS",
    "SummaryRow",
    "YEAR_MAX",
    "YEAR_MIN",
    "canonicalize_category",
    "decode_image",
    "encode_png",
    "extract_batch",
    "extract_from_file",
    "generate_synthetic",
    "list_image_files",
    "load_corpus",
    "load_features_csv",
    "load_records_csv",
    "parse_record",
    "picasso_period",
    "render_synthetic_image",
    "save_features_csv",
    "save_records_csv",
    "summary_statistics",
]
