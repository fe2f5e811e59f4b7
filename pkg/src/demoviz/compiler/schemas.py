"""Pinned target-grammar schemas and document validation.

The official Vega-Lite v4 and Vega v5 JSON schemas are vendored as package
data; the DEMOVIZ_SCHEMA_DIR environment variable points the loader at an
alternate directory. Validators are cached per process and only ever read.
"""

from __future__ import annotations

import hashlib
import json
import os
from functools import lru_cache
from pathlib import Path

import jsonschema

VEGA_LITE = "vega_lite"
VEGA = "vega"

SCHEMA_FILES = {
    VEGA_LITE: "vega-lite-v4.json",
    VEGA: "vega-v5.json",
}

SCHEMA_URLS = {
    VEGA_LITE: "https://vega.github.io/schema/vega-lite/v4.json",
    VEGA: "https://vega.github.io/schema/vega/v5.json",
}

SCHEMA_DIR_ENV = "DEMOVIZ_SCHEMA_DIR"


def schema_dir() -> Path:
    override = os.environ.get(SCHEMA_DIR_ENV)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent.parent / "schemas"


def schema_path(target: str) -> Path:
    if target not in SCHEMA_FILES:
        raise ValueError(f"unknown compile target {target!r}")
    return schema_dir() / SCHEMA_FILES[target]


@lru_cache(maxsize=None)
def _load(path_str: str) -> jsonschema.Draft7Validator:
    with open(path_str, encoding="utf-8") as fh:
        schema = json.load(fh)
    return jsonschema.Draft7Validator(schema)


def validator(target: str) -> jsonschema.Draft7Validator:
    return _load(str(schema_path(target)))


def validation_errors(document: dict, target: str, limit: int = 5) -> list[str]:
    """Best-effort human-readable schema errors (empty when valid)."""
    v = validator(target)
    if v.is_valid(document):
        return []
    errors = sorted(v.iter_errors(document), key=jsonschema.exceptions.relevance)
    out = []
    for err in errors[:limit]:
        where = "$" + "".join(f"[{p!r}]" for p in err.absolute_path)
        out.append(f"{where}: {err.message[:200]}")
    return out


def is_valid(document: dict, target: str) -> bool:
    return validator(target).is_valid(document)


def _values_emptied(document: dict) -> dict:
    """Copy with inline data rows dropped.

    Row contents are unconstrained by both target schemas, but walking
    large values arrays dominates validation time; the compilers check
    their own output against this structural copy. Full-document
    validation stays the test oracle.
    """
    doc = dict(document)
    if isinstance(doc.get("data"), list):  # Vega
        doc["data"] = [
            {**entry, "values": []} if "values" in entry else entry
            for entry in doc["data"]
        ]
    if isinstance(doc.get("datasets"), dict):  # Vega-Lite
        doc["datasets"] = {k: [] for k in doc["datasets"]}
    return doc


def structural_errors(document: dict, target: str, limit: int = 5) -> list[str]:
    """Schema errors for the document with data rows stripped (fast path)."""
    return validation_errors(_values_emptied(document), target, limit)


@lru_cache(maxsize=None)
def fingerprints() -> dict[str, str]:
    """SHA-256 digests of the pinned schemas, for health reporting."""
    out = {}
    for target, fname in SCHEMA_FILES.items():
        digest = hashlib.sha256(schema_path(target).read_bytes()).hexdigest()
        out[target] = f"{fname}:{digest[:16]}"
    return out
