"""Appearance of newly created elements.

Fallback chain: mimic the existing series; else copy the most common style
among elements in a similar role; else use the dialect defaults.
"""

from __future__ import annotations

import json
from collections import Counter
from typing import Any, Iterable

from ..roles import SIMILAR_ROLES
from ..vis.elements import enumerate_elements
from ..vis.model import DEFAULT_STYLES, VisSpec


def _key(style: dict) -> str:
    return json.dumps(style, sort_keys=True, ensure_ascii=False)


def mimic_series(styles: Iterable[dict]) -> dict | None:
    """Most common style of a series (ties: first seen); None for an empty series."""
    styles = list(styles)
    if not styles:
        return None
    counts = Counter(_key(s) for s in styles)
    top = max(counts.values())
    for s in styles:
        if counts[_key(s)] == top:
            return dict(s)
    return None


def generic_role(role: str) -> str:
    head, _, tail = role.partition(".")
    if head in ("hAxis", "vAxis"):
        return "axis" + ("." + tail if tail else "")
    return role


def similar_role_fallback(role: str, spec: VisSpec, exclude: Iterable[str] = ()) -> tuple[dict, str]:
    """(style, principle) for an element of ``role`` without series siblings.

    ``principle`` is "P4" when a similar-role element supplied the style and
    "P6" when the dialect default was used.
    """
    skip = set(exclude)
    elements = [e for e in enumerate_elements(spec) if e.path not in skip]
    for similar in SIMILAR_ROLES.get(role, ()):
        styles = [e.style for e in elements if e.role == similar]
        found = mimic_series(styles)
        if found is not None:
            return found, "P4"
    return dict(DEFAULT_STYLES.get(generic_role(role), {})), "P6"


def inherit_style(role: str, series: Iterable[dict], spec: VisSpec) -> tuple[dict, str]:
    """Style for a new element: P3 series mimicry, then P4, then P6."""
    found = mimic_series(series)
    if found is not None:
        return found, "P3"
    return similar_role_fallback(role, spec)


def style_delta(style: dict, base: dict) -> dict[str, Any]:
    """Entries of ``style`` that differ from ``base``."""
    return {k: v for k, v in style.items() if k not in base or base[k] != v}
