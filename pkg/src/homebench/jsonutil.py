"""Canonical JSON helpers shared by every serialized artifact.

All on-disk and on-wire JSON in this project goes through canonical_json so
that identical values always produce identical bytes (sorted keys, no
whitespace, ASCII-safe).
"""

from __future__ import annotations

import hashlib
import json
from typing import Any


class SchemaError(ValueError):
    """A document failed schema validation; carries the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj: Any) -> str:
    """Short stable digest of a JSON-serializable value."""
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()[:16]


def expect(doc: dict, key: str, kind, path: str):
    """Fetch doc[key], raising SchemaError naming the field if missing or mistyped."""
    if key not in doc:
        raise SchemaError(f"{path}.{key}", "missing field")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return value
