"""Compilation of charts plus interactions into Vega-Lite or Vega documents."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..jsonio import canonical_json
from .schemas import SCHEMA_URLS, VEGA, VEGA_LITE, fingerprints, is_valid, validation_errors
from .vegalite import compile_vegalite, is_expressible_vegalite
from .vega import compile_vega, lower_selection


@dataclass(frozen=True)
class CompiledSpec:
    target: str  # "vega_lite" | "vega"
    document: dict[str, Any]
    expressibility: list[dict[str, Any]] = field(default_factory=list)

    @property
    def text(self) -> str:
        return canonical_json(self.document)

    def to_dict(self) -> dict[str, Any]:
        return {
            "target": self.target,
            "document": self.document,
            "expressibility": self.expressibility,
        }


__all__ = [
    "VEGA",
    "VEGA_LITE",
    "SCHEMA_URLS",
    "CompiledSpec",
    "compile_vega",
    "compile_vegalite",
    "fingerprints",
    "is_expressible_vegalite",
    "is_valid",
    "lower_selection",
    "validation_errors",
]
