"""Run manifests: what a command was asked to do and what it read.

Every command that writes outputs drops exactly one manifest.json in its
output directory. Two runs reproduce each other's outputs bit-identically
exactly when their manifests agree on everything but the timestamp, so the
timestamp is excluded from the reproducibility key.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Mapping, Optional

MANIFEST_NAME = "manifest.json"

try:
    TOOL_VERSION = version("artfeat")
except PackageNotFoundError:
    TOOL_VERSION = "0+unknown"


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    command: str
    options: Mapping[str, object]
    input_hashes: Mapping[str, str]
    seed: Optional[int] = None
    version: str = TOOL_VERSION
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def __post_init__(self):
        object.__setattr__(self, "options", dict(self.options))
        object.__setattr__(self, "input_hashes", dict(self.input_hashes))

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "options": dict(self.options),
            "input_hashes": dict(self.input_hashes),
            "seed": self.seed,
            "version": self.version,
            "timestamp": self.timestamp,
        }

    def reproducibility_key(self) -> dict:
        """Everything that determines the outputs (timestamp excluded)."""
        key = self.to_json_dict()
        del key["timestamp"]
        return key

    def write(self, out_dir: str | Path) -> Path:
        out = Path(out_dir) / MANIFEST_NAME
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return out

    @classmethod
    def read(cls, path: str | Path) -> "RunManifest":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(
            command=data["command"],
            options=data["options"],
            input_hashes=data["input_hashes"],
            seed=data.get("seed"),
            version=data.get("version", "0+unknown"),
            timestamp=data.get("timestamp", ""),
        )


def hash_inputs(paths: Mapping[str, str | Path]) -> dict[str, str]:
    """sha256 of each named input file, keyed by role name."""
    return {name: sha256_file(path) for name, path in paths.items()}
