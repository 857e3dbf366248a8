"""Model specification: regressors, robust-SE kind, references, subsample."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from ..errors import SpecError
from ..transforms import DEFAULT_SURFACE_SCALE
from .terms import DUMMY_BLOCKS, KIND_DUMMY, Term, check_no_duplicates, parse_term

ROBUST_KINDS = ("HC0", "HC1")

RESPONSE_TAGS = ("Lprice",)

SUBSAMPLE_KEYS = ("period", "painter")


@dataclass(frozen=True)
class ModelSpec:
    """One regression specification.

    regressors are term strings (see terms.py); reference_categories picks
    the dropped category per dummy block (default: lexicographically
    smallest observed); keep_categories folds any category not listed for a
    block into "others" before encoding; subsample restricts the fit, e.g.
    {"period": 3} or {"painter": "renoir"}.
    """

    regressors: tuple[str, ...]
    response: str = "Lprice"
    robust_kind: str = "HC1"
    reference_categories: Mapping[str, str] = field(default_factory=dict)
    keep_categories: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    subsample: Mapping[str, object] = field(default_factory=dict)
    surface_scale: float = DEFAULT_SURFACE_SCALE

    def __post_init__(self):
        object.__setattr__(self, "regressors", tuple(self.regressors))
        object.__setattr__(self, "reference_categories", dict(self.reference_categories))
        object.__setattr__(
            self,
            "keep_categories",
            {k: tuple(v) for k, v in dict(self.keep_categories).items()},
        )
        object.__setattr__(self, "subsample", dict(self.subsample))
        if self.response not in RESPONSE_TAGS:
            raise SpecError(f"unknown response {self.response!r}; supported: {RESPONSE_TAGS}")
        if self.robust_kind not in ROBUST_KINDS:
            raise SpecError(f"robust kind must be one of {ROBUST_KINDS}, got {self.robust_kind!r}")
        if not self.surface_scale > 0:
            raise SpecError("surface_scale must be positive")
        if not self.regressors:
            raise SpecError("spec needs at least one regressor")
        terms = [parse_term(t) for t in self.regressors]
        check_no_duplicates(terms)
        blocks = {t.name for t in terms if t.kind == KIND_DUMMY}
        for mapping_name, mapping in (
            ("reference_categories", self.reference_categories),
            ("keep_categories", self.keep_categories),
        ):
            for block in mapping:
                if block not in DUMMY_BLOCKS:
                    raise SpecError(f"{mapping_name}: {block!r} is not a dummy block")
                if block not in blocks:
                    raise SpecError(f"{mapping_name}: block {block!r} is not in the regressors")
        for key, value in self.subsample.items():
            if key not in SUBSAMPLE_KEYS:
                raise SpecError(f"unknown subsample key {key!r}; supported: {SUBSAMPLE_KEYS}")
            if key == "period" and value not in range(1, 9):
                raise SpecError(f"subsample period must be 1..8, got {value!r}")
            if key == "painter" and not isinstance(value, str):
                raise SpecError("subsample painter must be a string")

    @property
    def terms(self) -> tuple[Term, ...]:
        return tuple(parse_term(t) for t in self.regressors)

    def to_json_dict(self) -> dict:
        out: dict = {"response": self.response, "regressors": list(self.regressors)}
        if self.robust_kind != "HC1":
            out["robust_kind"] = self.robust_kind
        if self.reference_categories:
            out["reference_categories"] = dict(self.reference_categories)
        if self.keep_categories:
            out["keep_categories"] = {k: list(v) for k, v in self.keep_categories.items()}
        if self.subsample:
            out["subsample"] = dict(self.subsample)
        if self.surface_scale != DEFAULT_SURFACE_SCALE:
            out["surface_scale"] = self.surface_scale
        return out

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ModelSpec":
        if not isinstance(data, Mapping):
            raise SpecError(f"model spec must be a JSON object, got {type(data).__name__}")
        known = {
            "response", "regressors", "robust_kind", "reference_categories",
            "keep_categories", "subsample", "surface_scale",
        }
        unknown = set(data) - known
        if unknown:
            raise SpecError(f"unknown model spec key(s): {', '.join(sorted(unknown))}")
        if "regressors" not in data:
            raise SpecError("model spec needs a 'regressors' list")
        return cls(
            regressors=tuple(data["regressors"]),
            response=data.get("response", "Lprice"),
            robust_kind=data.get("robust_kind", "HC1"),
            reference_categories=data.get("reference_categories", {}),
            keep_categories=data.get("keep_categories", {}),
            subsample=data.get("subsample", {}),
            surface_scale=data.get("surface_scale", DEFAULT_SURFACE_SCALE),
        )


def load_spec_file(path: str | Path) -> list[tuple[str, ModelSpec]]:
    """Read a spec JSON file: either one spec object or {"suite": [...]}.

    Suite entries are {"name": ..., "spec": {...}}; a single spec is named
    "model". Returns (name, spec) pairs in file order.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from exc
    if isinstance(data, Mapping) and "suite" in data:
        extras = set(data) - {"suite"}
        if extras:
            raise SpecError(f"{path}: unknown key(s) next to 'suite': {', '.join(sorted(extras))}")
        entries = data["suite"]
        if not isinstance(entries, list) or not entries:
            raise SpecError(f"{path}: 'suite' must be a non-empty list")
        out = []
        for i, entry in enumerate(entries):
            if not isinstance(entry, Mapping) or "name" not in entry or "spec" not in entry:
                raise SpecError(f"{path}: suite entry {i} needs 'name' and 'spec'")
            out.append((str(entry["name"]), ModelSpec.from_json_dict(entry["spec"])))
        names = [n for n, _ in out]
        if len(set(names)) != len(names):
            raise SpecError(f"{path}: duplicate suite entry names")
        return out
    return [("model", ModelSpec.from_json_dict(data))]
