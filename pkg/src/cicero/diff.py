"""Structural diff of two vis specs, keyed by element path."""

from __future__ import annotations

import json
from typing import Any

from .vis.elements import Element, enumerate_elements
from .vis.model import VisSpec
from .vis.serialize import canonical_bytes, canonical_value


def element_properties(e: Element) -> dict[str, Any]:
    """Flat property map of one element, used for comparison."""
    props = e.props
    out: dict[str, Any] = {"role": e.role}
    for k, v in props.get("style", {}).items():
        out[f"style.{k}"] = v
    for k, v in props.get("attrs", {}).items():
        out[f"attrs.{k}"] = v
    for ch, enc in (props.get("encoding") or {}).items():
        out[f"encoding.{ch}"] = enc
    for k in ("text", "values", "mark", "segments"):
        if k in props:
            out[k] = props[k]
    if e.role == "data":
        out["record"] = dict(e.owner)
    elif e.role == "layer":
        out["filters"] = list(e.owner.filters)
    return {k: canonical_value(v) for k, v in out.items()}


def _leaves(value: Any, prefix: str = "") -> dict[str, Any]:
    if isinstance(value, dict):
        out: dict[str, Any] = {}
        for k in sorted(value):
            out.update(_leaves(value[k], f"{prefix}/{k}"))
        return out or {prefix: {}}
    if isinstance(value, list):
        out = {}
        for i, v in enumerate(value):
            out.update(_leaves(v, f"{prefix}/{i}"))
        return out or {prefix: []}
    return {prefix: value}


def _row_changes(a: list[Element], b: list[Element]) -> tuple[list[str], list[str]]:
    """Data rows are matched by content, so deleting one row does not shift the rest."""
    pool: dict[str, list[str]] = {}
    for e in b:
        pool.setdefault(json.dumps(canonical_value(e.owner), sort_keys=True), []).append(e.path)
    removed = []
    for e in a:
        hits = pool.get(json.dumps(canonical_value(e.owner), sort_keys=True))
        if hits:
            hits.pop(0)
        else:
            removed.append(e.path)
    return [p for paths in pool.values() for p in paths], removed


def diff_specs(a: VisSpec, b: VisSpec) -> dict[str, Any]:
    """``{added, removed, changed}``; empty lists when the specs are identical."""
    els_a, els_b = enumerate_elements(a), enumerate_elements(b)
    ea = {e.path: element_properties(e) for e in els_a if e.role != "data"}
    eb = {e.path: element_properties(e) for e in els_b if e.role != "data"}
    rows_added, rows_removed = _row_changes([e for e in els_a if e.role == "data"], [e for e in els_b if e.role == "data"])
    added = sorted([p for p in eb if p not in ea] + rows_added)
    removed = sorted([p for p in ea if p not in eb] + rows_removed)
    changed = []
    for path in sorted(p for p in ea if p in eb):
        pa, pb = ea[path], eb[path]
        for prop in sorted(set(pa) | set(pb)):
            old, new = pa.get(prop), pb.get(prop)
            if json.dumps(old, sort_keys=True) != json.dumps(new, sort_keys=True):
                changed.append({"path": path, "property": prop, "old": old, "new": new})
    if not (added or removed or changed) and canonical_bytes(a) != canonical_bytes(b):
        # differences the element view does not surface (override bookkeeping, placements of hidden parts)
        la, lb = _leaves(canonical_value(a.to_dict())), _leaves(canonical_value(b.to_dict()))
        for ptr in sorted(set(la) | set(lb)):
            if la.get(ptr) != lb.get(ptr):
                changed.append({"path": "spec", "property": ptr, "old": la.get(ptr), "new": lb.get(ptr)})
    return {"added": added, "removed": removed, "changed": changed}


def is_empty(d: dict[str, Any]) -> bool:
    return not (d["added"] or d["removed"] or d["changed"])
