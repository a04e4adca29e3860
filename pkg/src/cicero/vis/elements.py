"""Addressable elements of a VisSpec.

``enumerate_elements`` walks a spec in document order and yields one
``Element`` per addressable thing (view, marks, axis labels, data rows...).
Each element carries the properties the query engine matches against and a
handle (``owner``) back into the model so actions can edit it in place.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as _field
from decimal import Decimal
from typing import Any, Iterator

from ..predicate import match_term, normalize_temporal
from .model import (
    DEFAULT_STYLES,
    POSITION_CHANNELS,
    SERIES_MARKS,
    Annotation,
    AxisDef,
    Layer,
    LegendDef,
    MarkOverride,
    Placement,
    ValueOverride,
    VisSpec,
    axis_domain,
    field_values,
    layer_rows,
)

DISCRETE_TYPES = ("nominal", "ordinal", "temporal")


@dataclass(frozen=True)
class ElementRef:
    role: str
    path: str

    def __str__(self) -> str:
        return self.path


@dataclass
class Element:
    ref: ElementRef
    parent: str
    roles: tuple[str, ...]
    owner: Any = None
    key: Any = None
    props: dict[str, Any] = _field(default_factory=dict)

    @property
    def role(self) -> str:
        return self.ref.role

    @property
    def path(self) -> str:
        return self.ref.path

    @property
    def style(self) -> dict[str, Any]:
        return self.props.get("style", {})


@dataclass
class Mark:
    key: dict[str, Any]
    rows: list[dict]
    common: dict[str, Any]

    @property
    def key_text(self) -> str:
        return mark_key_text(self.key)


# --------------------------------------------------------------------------
# value helpers


def display(value: Any) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def value_token(value: Any) -> str:
    """Path-safe stable encoding of a data value."""
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    return json.dumps(value, ensure_ascii=False, sort_keys=True)


def mark_key_text(key: dict[str, Any]) -> str:
    if not key:
        return "*"
    return "&".join(f"{k}={value_token(key[k])}" for k in sorted(key))


def same_value(a: Any, b: Any, datatype: str | None = None) -> bool:
    return match_term(b, a, datatype) if not isinstance(b, (dict, list)) else a == b


def key_matches(key: dict[str, Any], values: dict[str, Any], datatypes: dict[str, str]) -> bool:
    """True when every pair of ``key`` agrees with ``values``."""
    for f, v in key.items():
        if f not in values:
            return False
        if not same_value(values[f], v, datatypes.get(f)):
            return False
    return True


# --------------------------------------------------------------------------
# ticks


def nice_ticks(lo: float, hi: float, count: int) -> list:
    """Round tick values covering [lo, hi], about ``count`` of them."""
    if count <= 0 or not (math.isfinite(lo) and math.isfinite(hi)):
        return []
    if lo == hi:
        return [lo]
    if lo > hi:
        lo, hi = hi, lo
    step = (hi - lo) / count
    power = math.floor(math.log10(step))
    error = step / 10**power
    if error >= math.sqrt(50):
        factor = 10
    elif error >= math.sqrt(10):
        factor = 5
    elif error >= math.sqrt(2):
        factor = 2
    else:
        factor = 1
    inc = Decimal(factor) * Decimal(10) ** power
    dlo, dhi = Decimal(repr(lo)), Decimal(repr(hi))
    start = math.ceil(dlo / inc)
    stop = math.floor(dhi / inc)
    out = []
    for i in range(start, stop + 1):
        v = Decimal(i) * inc
        out.append(int(v) if v == v.to_integral_value() else float(v))
    return out


def tick_count(length: float) -> int:
    return max(2, min(10, int(round(length / 40))))


def axis_length(spec: VisSpec, axis: AxisDef) -> float:
    return spec.width if axis.orient in ("horizontal", "column") else spec.height


def data_extent(spec: VisSpec, field_name: str) -> tuple[Any, Any] | None:
    vals = [v for v in field_values(spec, field_name) if v is not None]
    if not vals:
        return None
    dtype = spec.data.datatype(field_name)
    key = (lambda v: normalize_temporal(v)) if dtype == "temporal" else (lambda v: v)
    try:
        return min(vals, key=key), max(vals, key=key)
    except TypeError:
        return None


def _sorted_discrete(values: list, dtype: str | None) -> list:
    if dtype == "temporal":
        return sorted(values, key=lambda v: normalize_temporal(v))
    return values


def axis_values(spec: VisSpec, axis: AxisDef) -> list:
    """Tick values of an axis: explicit values, else derived from the domain."""
    if axis.values is not None:
        return list(axis.values)
    dtype = spec.data.datatype(axis.field)
    dom, continuous = axis_domain(spec, axis)
    if dtype == "quantitative":
        if dom is None:
            ext = data_extent(spec, axis.field)
            if ext is None:
                return []
            dom = list(ext)
        if len(dom) == 2 and all(isinstance(v, (int, float)) for v in dom):
            return nice_ticks(dom[0], dom[1], tick_count(axis_length(spec, axis)))
        return list(dom)
    if dtype == "temporal" and dom is None:
        return _sorted_discrete(field_values(spec, axis.field), dtype)
    if dom is not None and continuous and dtype == "temporal":
        lo, hi = (normalize_temporal(v) for v in dom)
        return [v for v in _sorted_discrete(field_values(spec, axis.field), dtype) if lo <= normalize_temporal(v) <= hi]
    return list(dom or [])


def legend_values(spec: VisSpec, legend: LegendDef) -> list:
    dtype = spec.data.datatype(legend.field)
    dom = None
    for layer in spec.layers:
        enc = layer.encoding.get(legend.channel)
        if enc is not None and enc.field == legend.field and enc.scale.domain is not None:
            dom = enc.scale.domain
            break
    if dtype == "quantitative":
        if dom is None:
            ext = data_extent(spec, legend.field)
            dom = list(ext) if ext else None
        if dom is None:
            return []
        return nice_ticks(dom[0], dom[-1], 4)
    if dom is not None:
        return list(dom)
    return _sorted_discrete(field_values(spec, legend.field), dtype)


# --------------------------------------------------------------------------
# marks


def is_discrete(spec: VisSpec, field_name: str) -> bool:
    return spec.data.datatype(field_name) in DISCRETE_TYPES


def mark_key_fields(spec: VisSpec, layer: Layer) -> list[str]:
    out: list[str] = []

    def add(f: str | None) -> None:
        if f and f not in out:
            out.append(f)

    if layer.mark in SERIES_MARKS:
        for ch, enc in layer.encoding.items():
            if ch not in POSITION_CHANNELS and is_discrete(spec, enc.field):
                add(enc.field)
    else:
        for enc in layer.encoding.values():
            if is_discrete(spec, enc.field):
                add(enc.field)
    add(spec.row)
    add(spec.column)
    if not out and layer.mark not in SERIES_MARKS:
        for enc in layer.encoding.values():
            add(enc.field)
    return out


def common_values(rows: list[dict]) -> dict[str, Any]:
    if not rows:
        return {}
    first = rows[0]
    return {k: v for k, v in first.items() if all(r.get(k) == v for r in rows[1:])}


def layer_marks(spec: VisSpec, layer: Layer) -> list[Mark]:
    """Marks drawn by a layer, grouped by the layer's key fields."""
    rows = layer_rows(spec, layer)
    fields = mark_key_fields(spec, layer)
    groups: dict[str, list] = {}
    keys: dict[str, dict] = {}
    for r in rows:
        key = {f: r.get(f) for f in fields}
        text = mark_key_text(key)
        if text not in groups:
            groups[text] = []
            keys[text] = key
        groups[text].append(r)
    return [Mark(keys[t], groups[t], common_values(groups[t])) for t in groups]


def override_style(overrides: list[MarkOverride], values: dict[str, Any], datatypes: dict[str, str]) -> dict:
    out: dict[str, Any] = {}
    for o in overrides:
        if key_matches(o.key, values, datatypes):
            out.update(o.style)
    return out


def mark_style(spec: VisSpec, layer: Layer, mark: Mark) -> dict[str, Any]:
    style = dict(DEFAULT_STYLES["layer.mark"])
    style.update(layer.style)
    style.update(override_style(layer.overrides, mark.common, spec.data.datatypes))
    return style


def mark_label_style(spec: VisSpec, layer: Layer, mark: Mark) -> dict[str, Any]:
    style = dict(DEFAULT_STYLES["layer.mark.label"])
    if layer.label is not None:
        style.update(layer.label.style)
        style.update(override_style(layer.label.overrides, mark.common, spec.data.datatypes))
    return style


def mark_label_text(layer: Layer, mark: Mark) -> str:
    if layer.label is None:
        return ""
    f = layer.label.field
    if f in mark.common:
        return display(mark.common[f])
    return display(mark.rows[0].get(f)) if mark.rows else ""


def value_override(entries: list[ValueOverride], value: Any, datatype: str | None = None) -> ValueOverride | None:
    for o in entries:
        if same_value(value, o.value, datatype):
            return o
    return None


def value_style(base: dict, entries: list[ValueOverride], value: Any, datatype: str | None, default_role: str) -> dict:
    style = dict(DEFAULT_STYLES.get(default_role, {}))
    style.update(base)
    o = value_override(entries, value, datatype)
    if o is not None:
        style.update(o.style)
    return style


def segments_text(segments) -> str:
    return " ".join(s.text for s in segments)


def is_visible(style: dict) -> bool:
    return style.get("visible", True) is not False


def placement_attrs(p: Placement) -> dict[str, Any]:
    out: dict[str, Any] = {"position": p.mode, "dx": p.dx, "dy": p.dy}
    if p.x is not None:
        out["x"] = p.x
    if p.y is not None:
        out["y"] = p.y
    return out


def axis_role(axis: AxisDef) -> str:
    return {"horizontal": "hAxis", "vertical": "vAxis"}.get(axis.orient, "axis")


def _with_aliases(role: str, extra: tuple[str, ...] = ()) -> tuple[str, ...]:
    from ..roles import generalizations

    out = [role]
    for r in generalizations(role) + extra:
        if r not in out:
            out.append(r)
    return tuple(out)


# --------------------------------------------------------------------------
# enumeration


def annotation_rows(spec: VisSpec, ann: Annotation) -> list[dict] | None:
    if ann.anchor.type == "independent" or ann.anchor.field is None:
        return None
    dtype = spec.data.datatype(ann.anchor.field)
    rows = spec.data.rows
    if ann.anchor.layer is not None:
        layer = spec.layer(ann.anchor.layer)
        rows = layer_rows(spec, layer) if layer is not None else []
    return [
        r
        for r in rows
        if any(same_value(r.get(ann.anchor.field), item, dtype) for item in ann.anchor.items)
    ]


def annotation_aliases(spec: VisSpec, ann: Annotation) -> tuple[str, ...]:
    if ann.anchor.type == "on-mark":
        return ("annotation", "layer.mark.label", "label", "text")
    if ann.anchor.type == "on-axis":
        extra = []
        for a in spec.axes:
            if a.field == ann.anchor.field:
                r = axis_role(a)
                if r != "axis":
                    extra.append(f"{r}.label")
        return ("annotation", "axis.label", *extra, "label", "text")
    return ("annotation", "emphasis", "text")


def _layer_props(spec: VisSpec, layer: Layer) -> dict[str, Any]:
    fields = layer.fields()
    for f in (spec.row, spec.column):
        if f and f not in fields:
            fields.append(f)
    return {
        "id": layer.id,
        "mark": layer.mark,
        "fields": fields,
        "channels": list(layer.encoding),
        "operations": layer.operation_types(),
        "encoding": {ch: enc.to_dict() for ch, enc in layer.encoding.items()},
    }


def enumerate_elements(spec: VisSpec) -> list[Element]:
    """Every addressable element of ``spec`` exactly once, in document order."""
    return list(_walk(spec))


def _walk(spec: VisSpec) -> Iterator[Element]:
    all_interactions = [i.kind for i in spec.interactions]

    yield Element(
        ElementRef("view", "view"),
        "",
        ("view",),
        owner=spec,
        props={
            "attrs": {"width": spec.width, "height": spec.height},
            "interactions": all_interactions,
            "style": {},
        },
    )
    yield Element(
        ElementRef("view.layout", "view/layout"),
        "view",
        ("view.layout",),
        owner=spec,
        props={"fields": [f for f in (spec.row, spec.column) if f], "style": {}},
    )
    for which in ("row", "column"):
        fname = getattr(spec, which)
        if fname:
            yield Element(
                ElementRef(f"view.{which}", f"view/{which}"),
                "view",
                (f"view.{which}",),
                owner=spec,
                props={"fields": [fname], "channels": [which], "style": {}},
            )

    for layer in spec.layers:
        lpath = f"layers/{layer.id}"
        base = _layer_props(spec, layer)
        lrows = layer_rows(spec, layer)
        yield Element(
            ElementRef("layer", lpath),
            "view",
            ("layer",),
            owner=layer,
            props={**base, "rows": lrows, "style": dict(layer.style), "attrs": {"mark": layer.mark}},
        )
        marks = layer_marks(spec, layer)
        for mark in marks:
            yield Element(
                ElementRef("layer.mark", f"{lpath}/marks/{mark.key_text}"),
                lpath,
                ("layer.mark",),
                owner=layer,
                key=mark,
                props={**base, "rows": mark.rows, "style": mark_style(spec, layer, mark)},
            )
        if layer.label is not None:
            for mark in marks:
                style = mark_label_style(spec, layer, mark)
                if not is_visible(style):
                    continue
                yield Element(
                    ElementRef("layer.mark.label", f"{lpath}/labels/{mark.key_text}"),
                    lpath,
                    _with_aliases("layer.mark.label"),
                    owner=layer,
                    key=mark,
                    props={
                        "id": layer.id,
                        "mark": layer.mark,
                        "fields": [layer.label.field],
                        "channels": ["text"],
                        "rows": mark.rows,
                        "text": mark_label_text(layer, mark),
                        "style": style,
                        "attrs": placement_attrs(layer.label.placement),
                    },
                )

    for axis in spec.axes:
        yield from _axis_elements(spec, axis)

    for legend in spec.legends:
        yield from _legend_elements(spec, legend)

    for t in spec.texts:
        style = dict(DEFAULT_STYLES.get(t.role, {}))
        style.update(t.style)
        yield Element(
            ElementRef(t.role, f"texts/{t.role}/{t.index}"),
            "view",
            _with_aliases(t.role),
            owner=t,
            props={"text": segments_text(t.segments), "style": style, "attrs": placement_attrs(t.position)},
        )

    for ann in spec.annotations:
        aliases = annotation_aliases(spec, ann)
        style = dict(DEFAULT_STYLES["annotation"])
        style.update(ann.style)
        fields = [ann.anchor.field] if ann.anchor.field else []
        yield Element(
            ElementRef("annotation", f"annotations/{ann.id}"),
            "view",
            aliases,
            owner=ann,
            props={
                "id": ann.id,
                "fields": fields,
                "rows": annotation_rows(spec, ann),
                "text": segments_text(ann.segments),
                "style": style,
                "attrs": {
                    **placement_attrs(ann.placement),
                    "numbered": ann.numbered,
                    "anchor": ann.anchor.type,
                },
            },
        )

    names = spec.data.field_names
    for i, row in enumerate(spec.data.rows):
        yield Element(
            ElementRef("data", f"data/{i}"),
            "data",
            ("data",),
            owner=row,
            key=i,
            props={"fields": list(names), "rows": [row], "style": {}},
        )

    for i, inter in enumerate(spec.interactions):
        yield Element(
            ElementRef("interaction", f"interactions/{i}"),
            "view",
            ("interaction",),
            owner=inter,
            key=i,
            props={"interactions": [inter.kind], "attrs": dict(inter.params), "style": {}},
        )



def _axis_elements(spec: VisSpec, axis: AxisDef) -> Iterator[Element]:
    role = axis_role(axis)
    apath = f"axes/{axis.id}"
    dtype = spec.data.datatype(axis.field)
    common = {"fields": [axis.field], "channels": [axis.channel], "id": axis.id}
    yield Element(
        ElementRef(role, apath),
        "view",
        _with_aliases(role),
        owner=axis,
        props={
            **common,
            "values": axis_values(spec, axis),
            "style": dict(axis.style),
            "attrs": {
                "orient": axis.orient,
                "side": axis.side,
                "grid": axis.grid,
                "title": axis.title,
                "position": axis.labelPlacement.mode,
            },
        },
    )
    values = axis_values(spec, axis)
    for pos, v in enumerate(values):
        style = value_style(axis.labelStyle, axis.labels, v, dtype, "axis.label")
        if not is_visible(style):
            continue
        o = value_override(axis.labels, v, dtype)
        text = segments_text(o.segments) if o is not None and o.segments is not None else display(v)
        yield Element(
            ElementRef(f"{role}.label", f"{apath}/label/{value_token(v)}"),
            apath,
            _with_aliases(f"{role}.label"),
            owner=axis,
            key=v,
            props={
                **common,
                "value": v,
                "value_pos": pos,
                "record": {axis.field: v},
                "text": text,
                "segments": len(o.segments) if o is not None and o.segments is not None else 1,
                "style": style,
                "attrs": placement_attrs(axis.labelPlacement),
            },
        )
    dstyle = {**DEFAULT_STYLES["axis.domain"], **axis.domainStyle}
    if is_visible(dstyle):
        yield Element(
            ElementRef(f"{role}.domain", f"{apath}/domain"),
            apath,
            _with_aliases(f"{role}.domain"),
            owner=axis,
            props={**common, "style": dstyle},
        )
    if axis.grid:
        gstyle = {**DEFAULT_STYLES["axis.grid"], **axis.gridStyle}
        yield Element(
            ElementRef(f"{role}.grid", f"{apath}/grid"),
            apath,
            _with_aliases(f"{role}.grid"),
            owner=axis,
            props={**common, "values": values, "style": gstyle},
        )


def _legend_elements(spec: VisSpec, legend: LegendDef) -> Iterator[Element]:
    gpath = f"legends/{legend.id}"
    dtype = spec.data.datatype(legend.field)
    values = legend_values(spec, legend)
    common = {"fields": [legend.field], "channels": [legend.channel], "id": legend.id}
    yield Element(
        ElementRef("legend", gpath),
        "view",
        ("legend",),
        owner=legend,
        props={
            **common,
            "values": values,
            "style": dict(legend.style),
            "attrs": {"orient": legend.orient, "title": legend.title},
        },
    )
    for part, base, entries in (
        ("label", legend.labelStyle, legend.labels),
        ("mark", legend.symbolStyle, legend.symbols),
    ):
        role = f"legend.{part}"
        for pos, v in enumerate(values):
            style = value_style(base, entries, v, dtype, role)
            if not is_visible(style):
                continue
            o = value_override(entries, v, dtype)
            props = {
                **common,
                "value": v,
                "value_pos": pos,
                "record": {legend.field: v},
                "style": style,
            }
            if part == "label":
                props["text"] = segments_text(o.segments) if o is not None and o.segments is not None else display(v)
            yield Element(
                ElementRef(role, f"{gpath}/{part}/{value_token(v)}"),
                gpath,
                _with_aliases(role),
                owner=legend,
                key=v,
                props=props,
            )


def elements_by_path(spec: VisSpec) -> dict[str, Element]:
    return {e.path: e for e in enumerate_elements(spec)}


__all__ = [
    "Element",
    "ElementRef",
    "Mark",
    "enumerate_elements",
    "elements_by_path",
    "layer_marks",
    "axis_values",
    "legend_values",
    "nice_ticks",
    "display",
]
