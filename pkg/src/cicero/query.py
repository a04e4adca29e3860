"""Specifier resolution: structure, data and attribute queries over elements.

Every populated slot of a specifier is an independent filter and the result
is their conjunction.  ``index`` is applied within each group of siblings
(elements with the same parent that answer to the specifier role), before
and independently of the other filters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from .errors import IndexOutOfRange, NoSuchSubordinate, SchemaError, TypeMismatch
from .grammar import Specifier, parse_specifier
from .predicate import eval_data_predicate, is_operator_map, match_term
from .roles import ROLE_TOKENS, child_role, is_known_role, normalize_role
from .vis.elements import Element, ElementRef, enumerate_elements, same_value
from .vis.model import CHANNELS, VisSpec

__all__ = [
    "Selection",
    "eval_data_predicate",
    "match_index",
    "match_values",
    "resolve",
    "resolve_option_scope",
    "split_option",
    "children_of",
    "specifier_from",
]


@dataclass
class Selection:
    elements: list[Element]
    specifier: Specifier | None = None

    @property
    def refs(self) -> list[ElementRef]:
        return [e.ref for e in self.elements]

    @property
    def paths(self) -> list[str]:
        return [e.path for e in self.elements]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __bool__(self) -> bool:
        return bool(self.elements)


def specifier_from(value: Specifier | dict) -> Specifier:
    if isinstance(value, Specifier):
        return value
    issues: list[str] = []
    spec = parse_specifier(value, "specifier", issues)
    if issues:
        raise SchemaError(issues[0], issues)
    return spec


def match_index(elements: list, index: int | str) -> list:
    """Elements picked by a 0-based position or first/last/even/odd."""
    if index == "first":
        return elements[:1]
    if index == "last":
        return elements[-1:]
    if index == "even":
        return elements[0::2]
    if index == "odd":
        return elements[1::2]
    if isinstance(index, bool) or not isinstance(index, int):
        raise TypeMismatch(f"invalid index {index!r}")
    if index < 0 or index >= len(elements):
        raise IndexOutOfRange(f"index {index} out of range for {len(elements)} element(s)")
    return [elements[index]]


def _datatype_of(spec: VisSpec, e: Element) -> str | None:
    fields = e.props.get("fields") or []
    return spec.data.datatype(fields[0]) if len(fields) == 1 else None


def match_values(element: Element, values: list | str, spec: VisSpec | None = None) -> bool:
    """Does a value-bearing element (or an axis/legend holding values) match ``values``?"""
    dtype = _datatype_of(spec, element) if spec is not None else None
    if "value" in element.props:
        if values in ("even", "odd"):
            return element.props["value_pos"] % 2 == (0 if values == "even" else 1)
        return any(same_value(element.props["value"], v, dtype) for v in values)
    series = element.props.get("values")
    if series is None:
        return False
    if values in ("even", "odd"):
        return len(series) > (0 if values == "even" else 1)
    return any(same_value(s, v, dtype) for s in series for v in values)


def _subset(expected: Any, actual: Any) -> bool:
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            return False
        return all(k in actual and _subset(v, actual[k]) for k, v in expected.items())
    if isinstance(expected, list):
        return isinstance(actual, list) and len(expected) == len(actual) and all(
            _subset(a, b) for a, b in zip(expected, actual)
        )
    return same_value(actual, expected)


def _match(term: Any, actual: Any) -> bool:
    try:
        if is_operator_map(term) or not isinstance(term, dict):
            return match_term(term, actual)
        return _subset(term, actual)
    except TypeMismatch:
        return False


def _match_attribute(e: Element, key: str, expected: Any) -> bool:
    props = e.props
    encoding = props.get("encoding")
    if key == "text":
        return "text" in props and _match(expected, props["text"])
    if encoding is not None and key in CHANNELS and isinstance(expected, dict):
        return key in encoding and _subset(expected, encoding[key])
    if encoding is not None and key == "aggregate":
        aggs = [op["aggregate"] for enc in encoding.values() for op in enc.get("operations", []) if "aggregate" in op]
        return any(_match(expected, a) for a in aggs)
    if encoding is not None and key == "bin":
        has_bin = any("bin" in op for enc in encoding.values() for op in enc.get("operations", []))
        return has_bin == bool(expected)
    if encoding is not None and key == "scale":
        return any(_subset(expected, enc.get("scale", {})) for enc in encoding.values())
    attrs = props.get("attrs", {})
    if key in attrs:
        return _match(expected, attrs[key])
    style = props.get("style", {})
    if key in style:
        return _match(expected, style[key])
    return False


def _passes(spec: VisSpec, s: Specifier, e: Element) -> bool:
    props = e.props
    if s.mark is not None and props.get("mark") != s.mark:
        return False
    if s.id is not None and props.get("id") != s.id:
        return False
    if s.data is not None:
        dtypes = spec.data.datatypes
        rows = props.get("rows")
        if rows is not None:
            if not any(eval_data_predicate(s.data, r, dtypes) for r in rows):
                return False
        elif "record" in props:
            if not eval_data_predicate(s.data, props["record"], dtypes):
                return False
        else:
            return False
    fields = props.get("fields") or []
    if s.field is not None:
        wanted = [s.field] if isinstance(s.field, str) else s.field
        if not any(f in fields for f in wanted):
            return False
    if s.values is not None and not match_values(e, s.values, spec):
        return False
    if s.datatype is not None and not any(spec.data.datatype(f) == s.datatype for f in fields):
        return False
    if s.channel is not None:
        wanted = [s.channel] if isinstance(s.channel, str) else s.channel
        if not any(c in (props.get("channels") or []) for c in wanted):
            return False
    if s.operation and not all(op in (props.get("operations") or []) for op in s.operation):
        return False
    if s.interaction and not all(i in (props.get("interactions") or []) for i in s.interaction):
        return False
    for k, v in s.attributes.items():
        if not _match_attribute(e, k, v):
            return False
    return True


def _apply_index(candidates: list[Element], index: int | str) -> list[Element]:
    groups: dict[str, list[Element]] = {}
    for e in candidates:
        groups.setdefault(e.parent, []).append(e)
    keep: set[str] = set()
    for members in groups.values():
        try:
            keep.update(m.path for m in match_index(members, index))
        except IndexOutOfRange:
            continue
    return [e for e in candidates if e.path in keep]


def resolve(specifier: Specifier | dict, spec: VisSpec, elements: list[Element] | None = None) -> Selection:
    """Elements of ``spec`` satisfying every populated slot of ``specifier``."""
    s = specifier_from(specifier)
    role = normalize_role(s.role)
    if elements is None:
        elements = enumerate_elements(spec)
    candidates = [e for e in elements if role in e.roles]
    if s.index is not None:
        candidates = _apply_index(candidates, s.index)
    return Selection([e for e in candidates if _passes(spec, s, e)], s)


# --------------------------------------------------------------------------
# option scope


def split_option(role: str, option: dict) -> tuple[dict, dict[str, dict]]:
    """Separate attribute keys from role-scoped sub-options.

    Returns ``(attributes, {child_role: sub_option})``.  A key that names a
    role but is not a subordinate of ``role`` raises NoSuchSubordinate.
    """
    attrs: dict[str, Any] = {}
    children: dict[str, dict] = {}
    option = dict(option)
    if "role" in option:
        token = option.pop("role")
        sub = {k: v for k, v in option.items()}
        target = child_role(role, token) if isinstance(token, str) else None
        if target is None:
            raise NoSuchSubordinate(f"{token!r} is not a subordinate of {role!r}")
        children[target] = sub
        return attrs, children
    for k, v in option.items():
        if isinstance(v, dict) and (k in ROLE_TOKENS or (is_known_role(k) and k not in CHANNELS)):
            target = child_role(role, k)
            if target is None:
                raise NoSuchSubordinate(f"{k!r} is not a subordinate of {role!r}")
            children[target] = v
        else:
            attrs[k] = v
    return attrs, children


def children_of(element: Element, role: str, elements: Iterable[Element]) -> list[Element]:
    """Subordinate elements of ``element`` answering to ``role``."""
    if element.role == "view":
        return [e for e in elements if role in e.roles and e.path != "view"]
    if element.role == "layer.mark":
        label_path = element.path.replace("/marks/", "/labels/", 1)
        return [e for e in elements if e.path == label_path and role in e.roles]
    return [e for e in elements if e.parent == element.path and role in e.roles]


def resolve_option_scope(
    option: dict, selection: Selection, spec: VisSpec, elements: list[Element] | None = None
) -> list[tuple[Element, dict]]:
    """Pair each targeted element with the attributes the option writes on it."""
    if not selection:
        return []
    if elements is None:
        elements = enumerate_elements(spec)
    out: list[tuple[Element, dict]] = []
    for e in selection:
        attrs, children = split_option(e.role, option)
        if attrs:
            out.append((e, attrs))
        for child, sub in children.items():
            for c in children_of(e, child, elements):
                sub_attrs, grand = split_option(c.role, sub)
                if sub_attrs:
                    out.append((c, sub_attrs))
                for g_role, g_sub in grand.items():
                    for g in children_of(c, g_role, elements):
                        out.append((g, g_sub))
    return out

