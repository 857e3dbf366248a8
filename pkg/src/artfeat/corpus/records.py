"""Auction record and corpus containers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from ..errors import SchemaError
from ..features import FeatureVector

KNOWN_PAINTERS = frozenset({"picasso", "renoir", "qi"})


def canonicalize_category(raw: str) -> str:
    """Fold a category label to its canonical key.

    Case-folded, punctuation dropped, whitespace collapsed, so variants such
    as "Christie's" and "christies" share one key.
    """
    kept = "".join(ch if ch.isalnum() or ch.isspace() else "" for ch in raw.casefold())
    return " ".join(kept.split())


@dataclass(frozen=True)
class AuctionRecord:
    """One auction sale: identity, price, dating, physical and sale attributes.

    Category fields (painter, material, city, salesroom) are stored in
    canonical form; construct via `make` to canonicalize raw labels.
    """

    id: str
    painter: str
    price_usd: float
    creation_year: int
    sale_year: int
    surface_cm2: float
    signature: bool
    dated: bool
    material: str
    city: str
    salesroom: str
    image_path: Optional[str] = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("id must be non-empty")
        if not self.price_usd > 0:
            raise ValueError(f"price_usd must be > 0, got {self.price_usd}")
        if not self.surface_cm2 > 0:
            raise ValueError(f"surface_cm2 must be > 0, got {self.surface_cm2}")
        if self.sale_year < self.creation_year:
            raise ValueError(
                f"sale_year {self.sale_year} precedes creation_year {self.creation_year}"
            )

    @classmethod
    def make(cls, **fields) -> "AuctionRecord":
        for name in ("painter", "material", "city", "salesroom"):
            fields[name] = canonicalize_category(fields[name])
        return cls(**fields)


@dataclass(frozen=True)
class Corpus:
    """An immutable set of records plus their image features.

    `features` maps record id to its FeatureVector; every stored vector must
    share one extraction config hash so mixed-config corpora are rejected.
    """

    records: tuple[AuctionRecord, ...]
    features: Mapping[str, FeatureVector] = field(default_factory=dict)
    provenance: str = ""
    extraction_config_hash: str = ""

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        object.__setattr__(self, "features", dict(self.features))
        ids = [r.id for r in self.records]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise SchemaError(f"duplicate record id {dup!r}")
        hashes = {fv.extraction_config_hash for fv in self.features.values()}
        if len(hashes) > 1:
            raise SchemaError(f"features mix extraction config hashes: {sorted(hashes)}")
        if hashes and not self.extraction_config_hash:
            object.__setattr__(self, "extraction_config_hash", next(iter(hashes)))
        if hashes and self.extraction_config_hash not in hashes:
            raise SchemaError(
                f"corpus hash {self.extraction_config_hash!r} does not match its features"
            )

    def __len__(self) -> int:
        return len(self.records)

    def record(self, record_id: str) -> AuctionRecord:
        for r in self.records:
            if r.id == record_id:
                return r
        raise KeyError(record_id)

    def joined(self) -> tuple[tuple[AuctionRecord, FeatureVector], ...]:
        """Records that have a feature vector, in corpus order."""
        return tuple((r, self.features[r.id]) for r in self.records if r.id in self.features)

    def with_features(self, features: Mapping[str, FeatureVector]) -> "Corpus":
        return Corpus(self.records, features, self.provenance)
