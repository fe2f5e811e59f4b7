"""Canonical JSON serialization.

Every document the engine emits (compiled specs, suggestion sets, reports)
goes through :func:`canonical_json` so that repeated runs are byte-identical
and golden files stay stable: sorted keys, 2-space indent, trailing newline.
"""

from __future__ import annotations

import json
from typing import Any


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def canonical_bytes(doc: Any) -> bytes:
    return canonical_json(doc).encode("utf-8")
