"""Canonical JSON output: sorted keys, 2-space indent, integral floats as ints."""

from __future__ import annotations

import json
import math
from typing import Any


def canonical_value(value: Any) -> Any:
    """Normalize numbers so equal values always print the same way."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number {value!r} cannot be serialized")
        if value.is_integer():
            return int(value)
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, dict):
        return {str(k): canonical_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonical_value(v) for v in value]
    if hasattr(value, "to_dict"):
        return canonical_value(value.to_dict())
    raise TypeError(f"cannot serialize {type(value).__name__}")


def canonical_json(value: Any) -> str:
    return json.dumps(canonical_value(value), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def canonical_serialize(spec: Any) -> str:
    """Deterministic text of a VisSpec (or any JSON-like value)."""
    return canonical_json(spec)


def canonical_bytes(spec: Any) -> bytes:
    return canonical_serialize(spec).encode("utf-8")
