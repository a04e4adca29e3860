"""The visualization spec dialect: typed model, parsing and validation.

Documents are JSON objects with the top-level keys listed in ``TOP_LEVEL_KEYS``.
Parsing is strict: unknown keys anywhere are schema errors, every field
reference must exist in ``data.schema``.  All problems found in one pass are
reported together.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as _field
from typing import Any, Iterable

from ..errors import FieldReferenceError, SchemaError, SpecSyntaxError
from ..predicate import (
    ORDERED_TYPES,
    eval_data_predicate,
    normalize_temporal,
    predicate_fields,
    predicate_issues,
)

DATATYPES = ("nominal", "ordinal", "quantitative", "temporal")
MARK_TYPES = ("point", "circle", "rect", "bar", "line", "area", "text")
CHANNELS = ("x", "y", "color", "size", "opacity", "shape", "detail", "text", "arc")
POSITION_CHANNELS = ("x", "y")
SCALE_TYPES = ("linear", "band", "ordinal", "time")
AGGREGATES = ("sum", "mean", "count", "min", "max")
OPERATION_TYPES = ("filter", "aggregate", "bin")
ORIENTS = ("horizontal", "vertical", "row", "column")
SIDES = {
    "horizontal": ("bottom", "top"),
    "vertical": ("left", "right"),
    "row": ("left", "right"),
    "column": ("top", "bottom"),
}
TEXT_ROLES = ("title", "subtitle", "caption")
ANCHOR_TYPES = ("on-mark", "on-axis", "independent")
PLACEMENT_MODES = ("auto", "absolute", "relative", "external", "internal", "fixed", "serial", "parallel")
INTERACTION_KINDS = ("zoom", "context", "tooltip", "filter")
SERIES_MARKS = ("line", "area")

TOP_LEVEL_KEYS = (
    "width",
    "height",
    "data",
    "layers",
    "row",
    "column",
    "axes",
    "legends",
    "texts",
    "annotations",
    "interactions",
)

# dialect defaults, used when a new element has nothing to mimic
DEFAULT_STYLES: dict[str, dict[str, Any]] = {
    "axis.label": {"fontSize": 10},
    "axis.domain": {"stroke": "#888888", "strokeWidth": 1},
    "axis.grid": {"stroke": "#dddddd", "strokeWidth": 1},
    "legend.label": {"fontSize": 10},
    "legend.mark": {"size": 64},
    "layer.mark": {},
    "layer.mark.label": {"fontSize": 10},
    "title": {"fontSize": 16, "fontWeight": "bold"},
    "subtitle": {"fontSize": 13},
    "caption": {"fontSize": 11},
    "annotation": {"fontSize": 11},
}
DEFAULT_FONT_SIZE = 11


@dataclass
class FieldDef:
    name: str
    type: str

    def to_dict(self) -> dict:
        return {"field": self.name, "type": self.type}


@dataclass
class DataTable:
    schema: list[FieldDef] = _field(default_factory=list)
    rows: list[dict[str, Any]] = _field(default_factory=list)

    def datatype(self, name: str) -> str | None:
        for f in self.schema:
            if f.name == name:
                return f.type
        return None

    def has_field(self, name: str) -> bool:
        return self.datatype(name) is not None

    @property
    def field_names(self) -> list[str]:
        return [f.name for f in self.schema]

    @property
    def datatypes(self) -> dict[str, str]:
        return {f.name: f.type for f in self.schema}

    def to_dict(self) -> dict:
        return {"schema": [f.to_dict() for f in self.schema], "rows": [dict(r) for r in self.rows]}


@dataclass
class ScaleDef:
    type: str | None = None
    domain: list | None = None
    range: list | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        if self.type is not None:
            out["type"] = self.type
        if self.domain is not None:
            out["domain"] = list(self.domain)
        if self.range is not None:
            out["range"] = list(self.range)
        return out


@dataclass
class EncodingDef:
    field: str
    scale: ScaleDef = _field(default_factory=ScaleDef)
    operations: list[dict] = _field(default_factory=list)

    def operation_types(self) -> list[str]:
        return [next(iter(op)) for op in self.operations]

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"field": self.field}
        scale = self.scale.to_dict()
        if scale:
            out["scale"] = scale
        if self.operations:
            out["operations"] = [dict(op) for op in self.operations]
        return out


@dataclass
class Placement:
    mode: str = "auto"
    x: float | None = None
    y: float | None = None
    dx: float = 0
    dy: float = 0

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"mode": self.mode, "dx": self.dx, "dy": self.dy}
        if self.x is not None:
            out["x"] = self.x
        if self.y is not None:
            out["y"] = self.y
        return out


@dataclass
class Segment:
    text: str
    style: dict[str, Any] = _field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"text": self.text, "style": dict(self.style)}


@dataclass
class MarkOverride:
    """Style applied to the marks whose data match ``key``."""

    key: dict[str, Any]
    style: dict[str, Any] = _field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"key": dict(self.key), "style": dict(self.style)}


@dataclass
class ValueOverride:
    """Per-value entry of an axis or legend: style and optional custom text lines."""

    value: Any
    style: dict[str, Any] = _field(default_factory=dict)
    segments: list[Segment] | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"value": self.value, "style": dict(self.style)}
        if self.segments is not None:
            out["segments"] = [s.to_dict() for s in self.segments]
        return out


@dataclass
class MarkLabelDef:
    field: str
    style: dict[str, Any] = _field(default_factory=dict)
    placement: Placement = _field(default_factory=Placement)
    overrides: list[MarkOverride] = _field(default_factory=list)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "field": self.field,
            "style": dict(self.style),
            "placement": self.placement.to_dict(),
        }
        if self.overrides:
            out["overrides"] = [o.to_dict() for o in self.overrides]
        return out


@dataclass
class Layer:
    id: str
    mark: str
    encoding: dict[str, EncodingDef] = _field(default_factory=dict)
    style: dict[str, Any] = _field(default_factory=dict)
    overrides: list[MarkOverride] = _field(default_factory=list)
    filters: list[Any] = _field(default_factory=list)
    label: MarkLabelDef | None = None

    def fields(self) -> list[str]:
        out: list[str] = []
        for enc in self.encoding.values():
            if enc.field not in out:
                out.append(enc.field)
        return out

    def channel_of(self, field_name: str) -> list[str]:
        return [ch for ch, enc in self.encoding.items() if enc.field == field_name]

    def operation_types(self) -> list[str]:
        out: list[str] = []
        for enc in self.encoding.values():
            for t in enc.operation_types():
                if t not in out:
                    out.append(t)
        if self.filters and "filter" not in out:
            out.append("filter")
        return out

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "id": self.id,
            "mark": self.mark,
            "encoding": {ch: enc.to_dict() for ch, enc in self.encoding.items()},
            "style": dict(self.style),
        }
        if self.overrides:
            out["overrides"] = [o.to_dict() for o in self.overrides]
        if self.filters:
            out["filters"] = list(self.filters)
        if self.label is not None:
            out["label"] = self.label.to_dict()
        return out


@dataclass
class AxisDef:
    id: str
    orient: str
    field: str
    side: str
    values: list | None = None
    labels: list[ValueOverride] = _field(default_factory=list)
    labelStyle: dict[str, Any] = _field(default_factory=dict)
    labelPlacement: Placement = _field(default_factory=Placement)
    grid: bool = False
    gridStyle: dict[str, Any] = _field(default_factory=dict)
    domainStyle: dict[str, Any] = _field(default_factory=dict)
    title: str | None = None
    style: dict[str, Any] = _field(default_factory=dict)

    @property
    def channel(self) -> str:
        return {"horizontal": "x", "vertical": "y"}.get(self.orient, self.orient)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "id": self.id,
            "orient": self.orient,
            "field": self.field,
            "side": self.side,
            "labelStyle": dict(self.labelStyle),
            "labelPlacement": self.labelPlacement.to_dict(),
            "grid": self.grid,
            "gridStyle": dict(self.gridStyle),
            "domainStyle": dict(self.domainStyle),
            "style": dict(self.style),
        }
        if self.values is not None:
            out["values"] = list(self.values)
        if self.labels:
            out["labels"] = [o.to_dict() for o in self.labels]
        if self.title is not None:
            out["title"] = self.title
        return out


@dataclass
class LegendDef:
    id: str
    channel: str
    field: str
    orient: str = "right"
    title: str | None = None
    labelStyle: dict[str, Any] = _field(default_factory=dict)
    symbolStyle: dict[str, Any] = _field(default_factory=dict)
    labels: list[ValueOverride] = _field(default_factory=list)
    symbols: list[ValueOverride] = _field(default_factory=list)
    style: dict[str, Any] = _field(default_factory=dict)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "id": self.id,
            "channel": self.channel,
            "field": self.field,
            "orient": self.orient,
            "labelStyle": dict(self.labelStyle),
            "symbolStyle": dict(self.symbolStyle),
            "style": dict(self.style),
        }
        if self.title is not None:
            out["title"] = self.title
        if self.labels:
            out["labels"] = [o.to_dict() for o in self.labels]
        if self.symbols:
            out["symbols"] = [o.to_dict() for o in self.symbols]
        return out


@dataclass
class TextBlock:
    role: str
    index: int
    segments: list[Segment] = _field(default_factory=list)
    style: dict[str, Any] = _field(default_factory=dict)
    position: Placement = _field(default_factory=Placement)

    def to_dict(self) -> dict:
        return {
            "role": self.role,
            "index": self.index,
            "segments": [s.to_dict() for s in self.segments],
            "style": dict(self.style),
            "position": self.position.to_dict(),
        }


@dataclass
class Anchor:
    type: str = "independent"
    field: str | None = None
    items: list = _field(default_factory=list)
    layer: str | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"type": self.type}
        if self.field is not None:
            out["field"] = self.field
        if self.type != "independent":
            out["items"] = list(self.items)
        if self.layer is not None:
            out["layer"] = self.layer
        return out


@dataclass
class Annotation:
    id: str
    anchor: Anchor = _field(default_factory=Anchor)
    segments: list[Segment] = _field(default_factory=list)
    style: dict[str, Any] = _field(default_factory=dict)
    placement: Placement = _field(default_factory=Placement)
    numbered: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor.to_dict(),
            "segments": [s.to_dict() for s in self.segments],
            "style": dict(self.style),
            "placement": self.placement.to_dict(),
            "numbered": self.numbered,
        }


@dataclass
class InteractionDef:
    kind: str
    params: dict[str, Any] = _field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params)}


@dataclass
class VisSpec:
    width: float
    height: float
    data: DataTable = _field(default_factory=DataTable)
    layers: list[Layer] = _field(default_factory=list)
    row: str | None = None
    column: str | None = None
    axes: list[AxisDef] = _field(default_factory=list)
    legends: list[LegendDef] = _field(default_factory=list)
    texts: list[TextBlock] = _field(default_factory=list)
    annotations: list[Annotation] = _field(default_factory=list)
    interactions: list[InteractionDef] = _field(default_factory=list)

    def layer(self, layer_id: str) -> Layer | None:
        return next((l for l in self.layers if l.id == layer_id), None)

    def axis(self, axis_id: str) -> AxisDef | None:
        return next((a for a in self.axes if a.id == axis_id), None)

    def legend(self, legend_id: str) -> LegendDef | None:
        return next((g for g in self.legends if g.id == legend_id), None)

    def annotation(self, ann_id: str) -> Annotation | None:
        return next((a for a in self.annotations if a.id == ann_id), None)

    def texts_of(self, role: str) -> list[TextBlock]:
        return [t for t in self.texts if t.role == role]

    def reindex_texts(self) -> None:
        counts: dict[str, int] = {}
        for t in self.texts:
            t.index = counts.get(t.role, 0)
            counts[t.role] = t.index + 1

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "width": self.width,
            "height": self.height,
            "data": self.data.to_dict(),
            "layers": [l.to_dict() for l in self.layers],
            "axes": [a.to_dict() for a in self.axes],
            "legends": [g.to_dict() for g in self.legends],
            "texts": [t.to_dict() for t in self.texts],
            "annotations": [a.to_dict() for a in self.annotations],
            "interactions": [i.to_dict() for i in self.interactions],
        }
        if self.row is not None:
            out["row"] = self.row
        if self.column is not None:
            out["column"] = self.column
        return out


# --------------------------------------------------------------------------
# helpers shared by validation, enumeration and layout


def strip_px(value: Any) -> Any:
    """``"350px"`` and ``"350 px"`` become 350; other values pass through."""
    if isinstance(value, str):
        s = value.strip()
        if s.endswith("px"):
            num = s[:-2].strip()
            try:
                f = float(num)
            except ValueError:
                return value
            return int(f) if f.is_integer() else f
    return value


def is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def layer_rows(spec: VisSpec, layer: Layer) -> list[dict]:
    """Rows drawn by ``layer``: data rows passing its filters and filter operations."""
    dtypes = spec.data.datatypes
    preds = list(layer.filters)
    for enc in layer.encoding.values():
        for op in enc.operations:
            if "filter" in op and isinstance(op["filter"], (dict, list)):
                preds.append(op["filter"])
    return [r for r in spec.data.rows if all(eval_data_predicate(p, r, dtypes) for p in preds)]


def _domain_key(value: Any, datatype: str | None) -> Any:
    if datatype == "temporal":
        return normalize_temporal(value)
    return value


def axis_layers(spec: VisSpec, axis: AxisDef) -> list[tuple[Layer, str]]:
    """Layers (with channel) whose encodings feed ``axis``."""
    out = []
    for layer in spec.layers:
        enc = layer.encoding.get(axis.channel)
        if enc is not None and enc.field == axis.field:
            out.append((layer, axis.channel))
    return out


def explicit_domain(spec: VisSpec, field_name: str, channel: str | None = None) -> list | None:
    """Union of explicit scale domains declared for ``field_name`` (optionally on one channel)."""
    dtype = spec.data.datatype(field_name)
    domains = []
    for layer in spec.layers:
        for ch, enc in layer.encoding.items():
            if enc.field != field_name or (channel is not None and ch != channel):
                continue
            if enc.scale.domain is not None:
                domains.append(enc.scale.domain)
    if not domains:
        return None
    if dtype in ("quantitative", "temporal") and all(len(d) == 2 for d in domains):
        lo = min((d[0] for d in domains), key=lambda v: _domain_key(v, dtype))
        hi = max((d[1] for d in domains), key=lambda v: _domain_key(v, dtype))
        return [lo, hi]
    merged: list = []
    for d in domains:
        for v in d:
            if v not in merged:
                merged.append(v)
    return merged


def field_values(spec: VisSpec, field_name: str) -> list:
    """Distinct non-null values of a field in first-appearance order."""
    seen: list = []
    for r in spec.data.rows:
        v = r.get(field_name)
        if v is not None and v not in seen:
            seen.append(v)
    return seen


def value_in_domain(value: Any, domain: list, datatype: str | None, continuous: bool) -> bool:
    if continuous and len(domain) == 2:
        v, lo, hi = (_domain_key(x, datatype) for x in (value, domain[0], domain[1]))
        try:
            return lo <= v <= hi
        except TypeError:
            return False
    return any(_domain_key(value, datatype) == _domain_key(d, datatype) for d in domain)


def axis_domain(spec: VisSpec, axis: AxisDef) -> tuple[list | None, bool]:
    """The domain that bounds ``axis`` values, and whether it is continuous.

    Continuous domains are only known when declared explicitly; discrete
    domains fall back to the values present in the data.
    """
    dtype = spec.data.datatype(axis.field)
    continuous = dtype in ("quantitative", "temporal")
    channel = axis.channel if axis.orient in ("horizontal", "vertical") else None
    dom = explicit_domain(spec, axis.field, channel)
    if dom is not None:
        return dom, continuous and len(dom) == 2
    if continuous:
        return None, True
    return field_values(spec, axis.field), False


def default_axis_id(orient: str, field_name: str, side: str | None = None) -> str:
    base = f"{orient}:{field_name}"
    if side is not None and side != SIDES[orient][0]:
        base += f":{side}"
    return base


def derive_axes(layers: Iterable[Layer], row: str | None, column: str | None) -> list[AxisDef]:
    """Axes implied by position encodings and trellis fields."""
    axes: list[AxisDef] = []
    seen: set[tuple[str, str]] = set()

    def add(orient: str, field_name: str) -> None:
        if (orient, field_name) in seen:
            return
        seen.add((orient, field_name))
        axes.append(
            AxisDef(
                id=default_axis_id(orient, field_name),
                orient=orient,
                field=field_name,
                side=SIDES[orient][0],
            )
        )

    for layer in layers:
        if "x" in layer.encoding:
            add("horizontal", layer.encoding["x"].field)
    for layer in layers:
        if "y" in layer.encoding:
            add("vertical", layer.encoding["y"].field)
    if row:
        add("row", row)
    if column:
        add("column", column)
    return axes


# --------------------------------------------------------------------------
# parsing


class _Reader:
    """Builds model objects from JSON values, collecting every problem."""

    def __init__(self) -> None:
        self.issues: list[str] = []

    def issue(self, msg: str) -> None:
        self.issues.append(msg)

    def obj(self, value: Any, where: str, allowed: Iterable[str], required: Iterable[str] = ()) -> dict:
        if not isinstance(value, dict):
            self.issue(f"{where}: expected an object")
            return {}
        allowed = set(allowed)
        for k in value:
            if k not in allowed:
                self.issue(f"{where}: unknown key {k!r}")
        for k in required:
            if k not in value:
                self.issue(f"{where}: missing required key {k!r}")
        return value

    def lst(self, value: Any, where: str) -> list:
        if value is None:
            return []
        if not isinstance(value, list):
            self.issue(f"{where}: expected a list")
            return []
        return value

    def enum(self, value: Any, where: str, options: Iterable[str], default: str | None = None) -> str | None:
        options = tuple(options)
        if value is None:
            return default
        if value not in options:
            self.issue(f"{where}: {value!r} is not one of {list(options)}")
            return default
        return value

    def string(self, value: Any, where: str, default: str | None = None) -> str | None:
        if value is None:
            return default
        if not isinstance(value, str):
            self.issue(f"{where}: expected a string")
            return default
        return value

    def number(self, value: Any, where: str, default: Any = None) -> Any:
        if value is None:
            return default
        value = strip_px(value)
        if not is_number(value):
            self.issue(f"{where}: expected a number")
            return default
        return value

    def boolean(self, value: Any, where: str, default: bool = False) -> bool:
        if value is None:
            return default
        if not isinstance(value, bool):
            self.issue(f"{where}: expected a boolean")
            return default
        return value

    def style(self, value: Any, where: str) -> dict:
        if value is None:
            return {}
        if not isinstance(value, dict):
            self.issue(f"{where}: expected an object")
            return {}
        return {k: strip_px(v) for k, v in value.items()}

    # ---- composite types

    def data(self, value: Any) -> DataTable:
        d = self.obj(value, "data", ("schema", "rows"), ("schema",))
        schema = []
        names: set[str] = set()
        for i, f in enumerate(self.lst(d.get("schema"), "data.schema")):
            fo = self.obj(f, f"data.schema[{i}]", ("field", "type"), ("field", "type"))
            name = self.string(fo.get("field"), f"data.schema[{i}].field")
            dtype = self.enum(fo.get("type"), f"data.schema[{i}].type", DATATYPES)
            if name is None or dtype is None:
                continue
            if name in names:
                self.issue(f"data.schema: duplicate field {name!r}")
                continue
            names.add(name)
            schema.append(FieldDef(name, dtype))
        rows = []
        for i, r in enumerate(self.lst(d.get("rows"), "data.rows")):
            if not isinstance(r, dict):
                self.issue(f"data.rows[{i}]: expected an object")
                continue
            keys = set(r)
            if keys != names:
                missing = sorted(names - keys)
                extra = sorted(keys - names)
                if missing:
                    self.issue(f"data.rows[{i}]: missing field(s) {missing}")
                if extra:
                    self.issue(f"data.rows[{i}]: field(s) {extra} not in schema")
            for f in schema:
                v = r.get(f.name)
                if v is None:
                    continue
                if f.type == "quantitative" and not is_number(v):
                    self.issue(f"data.rows[{i}].{f.name}: quantitative value must be a number")
                elif f.type == "temporal" and not (is_number(v) or isinstance(v, str)):
                    self.issue(f"data.rows[{i}].{f.name}: temporal value must be an ISO-8601 string or a year")
            rows.append(dict(r))
        return DataTable(schema, rows)

    def scale(self, value: Any, where: str) -> ScaleDef:
        s = self.obj(value, where, ("type", "domain", "range"))
        dom = s.get("domain")
        if dom is not None and not isinstance(dom, list):
            self.issue(f"{where}.domain: expected a list")
            dom = None
        rng = s.get("range")
        if rng is not None and not isinstance(rng, list):
            self.issue(f"{where}.range: expected a list")
            rng = None
        return ScaleDef(self.enum(s.get("type"), f"{where}.type", SCALE_TYPES), dom, rng)

    def operations(self, value: Any, where: str) -> list[dict]:
        out = []
        for i, op in enumerate(self.lst(value, where)):
            w = f"{where}[{i}]"
            if not isinstance(op, dict) or len(op) != 1:
                self.issue(f"{w}: expected an object with exactly one of {list(OPERATION_TYPES)}")
                continue
            (kind, arg), = op.items()
            if kind not in OPERATION_TYPES:
                self.issue(f"{w}: unknown operation {kind!r}")
                continue
            if kind == "aggregate" and arg not in AGGREGATES:
                self.issue(f"{w}: aggregate {arg!r} is not one of {list(AGGREGATES)}")
                continue
            if kind == "filter":
                for msg in predicate_issues(arg, f"{w}.filter"):
                    self.issue(msg)
            out.append({kind: arg})
        return out

    def encoding(self, value: Any, where: str) -> EncodingDef:
        e = self.obj(value, where, ("field", "scale", "operations"), ("field",))
        return EncodingDef(
            field=self.string(e.get("field"), f"{where}.field", "") or "",
            scale=self.scale(e.get("scale", {}), f"{where}.scale"),
            operations=self.operations(e.get("operations"), f"{where}.operations"),
        )

    def placement(self, value: Any, where: str) -> Placement:
        p = self.obj(value if value is not None else {}, where, ("mode", "x", "y", "dx", "dy"))
        return Placement(
            mode=self.enum(p.get("mode"), f"{where}.mode", PLACEMENT_MODES, "auto") or "auto",
            x=self.number(p.get("x"), f"{where}.x"),
            y=self.number(p.get("y"), f"{where}.y"),
            dx=self.number(p.get("dx"), f"{where}.dx", 0),
            dy=self.number(p.get("dy"), f"{where}.dy", 0),
        )

    def segments(self, value: Any, where: str) -> list[Segment]:
        out = []
        for i, s in enumerate(self.lst(value, where)):
            if isinstance(s, str):
                out.append(Segment(s, {}))
                continue
            so = self.obj(s, f"{where}[{i}]", ("text", "style"), ("text",))
            out.append(
                Segment(
                    self.string(so.get("text"), f"{where}[{i}].text", "") or "",
                    self.style(so.get("style"), f"{where}[{i}].style"),
                )
            )
        return out

    def mark_overrides(self, value: Any, where: str) -> list[MarkOverride]:
        out = []
        for i, o in enumerate(self.lst(value, where)):
            oo = self.obj(o, f"{where}[{i}]", ("key", "style"), ("key",))
            key = oo.get("key", {})
            if not isinstance(key, dict):
                self.issue(f"{where}[{i}].key: expected an object")
                key = {}
            out.append(MarkOverride(dict(key), self.style(oo.get("style"), f"{where}[{i}].style")))
        return out

    def value_overrides(self, value: Any, where: str) -> list[ValueOverride]:
        out = []
        for i, o in enumerate(self.lst(value, where)):
            oo = self.obj(o, f"{where}[{i}]", ("value", "style", "segments"), ("value",))
            segs = oo.get("segments")
            out.append(
                ValueOverride(
                    oo.get("value"),
                    self.style(oo.get("style"), f"{where}[{i}].style"),
                    self.segments(segs, f"{where}[{i}].segments") if segs is not None else None,
                )
            )
        return out

    def layer(self, value: Any, i: int) -> Layer:
        where = f"layers[{i}]"
        lo = self.obj(
            value, where, ("id", "mark", "encoding", "style", "overrides", "filters", "label"), ("mark",)
        )
        enc = {}
        enc_obj = lo.get("encoding", {})
        if not isinstance(enc_obj, dict):
            self.issue(f"{where}.encoding: expected an object")
            enc_obj = {}
        for ch, e in enc_obj.items():
            if ch not in CHANNELS:
                self.issue(f"{where}.encoding: unknown channel {ch!r}")
                continue
            enc[ch] = self.encoding(e, f"{where}.encoding.{ch}")
        filters = lo.get("filters", [])
        if not isinstance(filters, list):
            self.issue(f"{where}.filters: expected a list")
            filters = []
        for j, p in enumerate(filters):
            for msg in predicate_issues(p, f"{where}.filters[{j}]"):
                self.issue(msg)
        label = None
        if lo.get("label") is not None:
            lw = f"{where}.label"
            lb = self.obj(lo["label"], lw, ("field", "style", "placement", "overrides"), ("field",))
            label = MarkLabelDef(
                field=self.string(lb.get("field"), f"{lw}.field", "") or "",
                style=self.style(lb.get("style"), f"{lw}.style"),
                placement=self.placement(lb.get("placement"), f"{lw}.placement"),
                overrides=self.mark_overrides(lb.get("overrides"), f"{lw}.overrides"),
            )
        return Layer(
            id=self.string(lo.get("id"), f"{where}.id", f"layer{i}") or f"layer{i}",
            mark=self.enum(lo.get("mark"), f"{where}.mark", MARK_TYPES, "point") or "point",
            encoding=enc,
            style=self.style(lo.get("style"), f"{where}.style"),
            overrides=self.mark_overrides(lo.get("overrides"), f"{where}.overrides"),
            filters=list(filters),
            label=label,
        )

    def axis(self, value: Any, i: int) -> AxisDef:
        where = f"axes[{i}]"
        ao = self.obj(
            value,
            where,
            (
                "id",
                "orient",
                "field",
                "side",
                "values",
                "labels",
                "labelStyle",
                "labelPlacement",
                "grid",
                "gridStyle",
                "domainStyle",
                "title",
                "style",
            ),
            ("orient", "field"),
        )
        orient = self.enum(ao.get("orient"), f"{where}.orient", ORIENTS, "horizontal") or "horizontal"
        side = self.enum(ao.get("side"), f"{where}.side", SIDES[orient], SIDES[orient][0]) or SIDES[orient][0]
        fname = self.string(ao.get("field"), f"{where}.field", "") or ""
        values = ao.get("values")
        if values is not None and not isinstance(values, list):
            self.issue(f"{where}.values: expected a list")
            values = None
        return AxisDef(
            id=self.string(ao.get("id"), f"{where}.id") or default_axis_id(orient, fname, side),
            orient=orient,
            field=fname,
            side=side,
            values=[strip_px(v) for v in values] if values is not None else None,
            labels=self.value_overrides(ao.get("labels"), f"{where}.labels"),
            labelStyle=self.style(ao.get("labelStyle"), f"{where}.labelStyle"),
            labelPlacement=self.placement(ao.get("labelPlacement"), f"{where}.labelPlacement"),
            grid=self.boolean(ao.get("grid"), f"{where}.grid"),
            gridStyle=self.style(ao.get("gridStyle"), f"{where}.gridStyle"),
            domainStyle=self.style(ao.get("domainStyle"), f"{where}.domainStyle"),
            title=self.string(ao.get("title"), f"{where}.title"),
            style=self.style(ao.get("style"), f"{where}.style"),
        )

    def legend(self, value: Any, i: int) -> LegendDef:
        where = f"legends[{i}]"
        go = self.obj(
            value,
            where,
            ("id", "channel", "field", "orient", "title", "labelStyle", "symbolStyle", "labels", "symbols", "style"),
            ("channel", "field"),
        )
        channel = self.enum(go.get("channel"), f"{where}.channel", CHANNELS, "color") or "color"
        fname = self.string(go.get("field"), f"{where}.field", "") or ""
        return LegendDef(
            id=self.string(go.get("id"), f"{where}.id") or f"{channel}:{fname}",
            channel=channel,
            field=fname,
            orient=self.string(go.get("orient"), f"{where}.orient", "right") or "right",
            title=self.string(go.get("title"), f"{where}.title"),
            labelStyle=self.style(go.get("labelStyle"), f"{where}.labelStyle"),
            symbolStyle=self.style(go.get("symbolStyle"), f"{where}.symbolStyle"),
            labels=self.value_overrides(go.get("labels"), f"{where}.labels"),
            symbols=self.value_overrides(go.get("symbols"), f"{where}.symbols"),
            style=self.style(go.get("style"), f"{where}.style"),
        )

    def text(self, value: Any, i: int) -> TextBlock:
        where = f"texts[{i}]"
        to = self.obj(value, where, ("role", "index", "segments", "style", "position"), ("role", "segments"))
        idx = to.get("index")
        if idx is not None and (not isinstance(idx, int) or isinstance(idx, bool) or idx < 0):
            self.issue(f"{where}.index: expected a non-negative integer")
            idx = None
        return TextBlock(
            role=self.enum(to.get("role"), f"{where}.role", TEXT_ROLES, "title") or "title",
            index=idx if idx is not None else -1,
            segments=self.segments(to.get("segments"), f"{where}.segments"),
            style=self.style(to.get("style"), f"{where}.style"),
            position=self.placement(to.get("position"), f"{where}.position"),
        )

    def annotation(self, value: Any, i: int) -> Annotation:
        where = f"annotations[{i}]"
        ao = self.obj(
            value, where, ("id", "anchor", "segments", "style", "placement", "numbered"), ("segments",)
        )
        an = self.obj(ao.get("anchor", {}), f"{where}.anchor", ("type", "field", "items", "layer"))
        atype = self.enum(an.get("type"), f"{where}.anchor.type", ANCHOR_TYPES, "independent") or "independent"
        if atype != "independent":
            for k in ("field", "items"):
                if k not in an:
                    self.issue(f"{where}.anchor: {atype} anchor requires {k!r}")
        return Annotation(
            id=self.string(ao.get("id"), f"{where}.id", f"annotation{i}") or f"annotation{i}",
            anchor=Anchor(
                type=atype,
                field=self.string(an.get("field"), f"{where}.anchor.field"),
                items=list(self.lst(an.get("items"), f"{where}.anchor.items")),
                layer=self.string(an.get("layer"), f"{where}.anchor.layer"),
            ),
            segments=self.segments(ao.get("segments"), f"{where}.segments"),
            style=self.style(ao.get("style"), f"{where}.style"),
            placement=self.placement(ao.get("placement"), f"{where}.placement"),
            numbered=self.boolean(ao.get("numbered"), f"{where}.numbered"),
        )

    def interaction(self, value: Any, i: int) -> InteractionDef:
        where = f"interactions[{i}]"
        io = self.obj(value, where, ("kind", "params"), ("kind",))
        params = io.get("params", {})
        if not isinstance(params, dict):
            self.issue(f"{where}.params: expected an object")
            params = {}
        return InteractionDef(
            kind=self.enum(io.get("kind"), f"{where}.kind", INTERACTION_KINDS, "zoom") or "zoom",
            params=dict(params),
        )

    def vis(self, doc: Any) -> VisSpec:
        d = self.obj(doc, "spec", TOP_LEVEL_KEYS, ("width", "height", "data"))
        layers = [self.layer(l, i) for i, l in enumerate(self.lst(d.get("layers"), "layers"))]
        row = self.string(d.get("row"), "row")
        column = self.string(d.get("column"), "column")
        if "axes" in d:
            axes = [self.axis(a, i) for i, a in enumerate(self.lst(d.get("axes"), "axes"))]
        else:
            axes = derive_axes(layers, row, column)
        texts = [self.text(t, i) for i, t in enumerate(self.lst(d.get("texts"), "texts"))]
        spec = VisSpec(
            width=self.number(d.get("width"), "width", 0),
            height=self.number(d.get("height"), "height", 0),
            data=self.data(d.get("data", {})),
            layers=layers,
            row=row,
            column=column,
            axes=axes,
            legends=[self.legend(g, i) for i, g in enumerate(self.lst(d.get("legends"), "legends"))],
            texts=texts,
            annotations=[self.annotation(a, i) for i, a in enumerate(self.lst(d.get("annotations"), "annotations"))],
            interactions=[
                self.interaction(x, i) for i, x in enumerate(self.lst(d.get("interactions"), "interactions"))
            ],
        )
        # explicit text indexes must already be contiguous per role
        counts: dict[str, int] = {}
        for t in texts:
            expected = counts.get(t.role, 0)
            if t.index not in (-1, expected):
                self.issue(f"texts: {t.role} index {t.index} is not contiguous (expected {expected})")
            counts[t.role] = expected + 1
        spec.reindex_texts()
        return spec


def load_json(text: str | bytes) -> Any:
    try:
        return json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SpecSyntaxError(f"malformed JSON: {exc}") from None


def vis_from_dict(doc: Any) -> VisSpec:
    reader = _Reader()
    spec = reader.vis(doc)
    if reader.issues:
        issues = list(reader.issues)
        try:
            # semantic checks on the partially read spec, so one pass reports everything
            issues += [i for i in validate_vis_spec(spec) if i not in issues]
        except Exception:
            pass
        raise SchemaError(issues[0], issues)
    refs, issues = reference_issues(spec), validate_vis_spec(spec)
    if refs:
        err = FieldReferenceError(refs[0][0], refs[0][1])
        err.issues = [f"unknown field {f!r} referenced by {w}" for f, w in refs] + issues
        raise err
    if issues:
        raise SchemaError(issues[0], issues)
    return spec


def parse_vis_spec(text: str | bytes) -> VisSpec:
    """Parse a JSON document into a validated VisSpec."""
    return vis_from_dict(load_json(text))


def reference_issues(spec: VisSpec) -> list[tuple[str, str]]:
    """(field, location) for every field reference missing from the schema."""
    known = set(spec.data.field_names)
    out: list[tuple[str, str]] = []

    def check(name: str | None, where: str) -> None:
        if name is not None and name not in known:
            out.append((name, where))

    for i, layer in enumerate(spec.layers):
        for ch, enc in layer.encoding.items():
            check(enc.field, f"layers[{i}].encoding.{ch}")
            for op in enc.operations:
                if "filter" in op:
                    for f in sorted(predicate_fields(op["filter"])):
                        check(f, f"layers[{i}].encoding.{ch}.operations")
        for j, p in enumerate(layer.filters):
            for f in sorted(predicate_fields(p)):
                check(f, f"layers[{i}].filters[{j}]")
        for j, o in enumerate(layer.overrides):
            for f in o.key:
                check(f, f"layers[{i}].overrides[{j}].key")
        if layer.label is not None:
            check(layer.label.field, f"layers[{i}].label")
    check(spec.row, "row")
    check(spec.column, "column")
    for i, a in enumerate(spec.axes):
        check(a.field, f"axes[{i}]")
    for i, g in enumerate(spec.legends):
        check(g.field, f"legends[{i}]")
    for i, a in enumerate(spec.annotations):
        check(a.anchor.field, f"annotations[{i}].anchor")
    return out


def validate_vis_spec(spec: VisSpec) -> list[str]:
    """Semantic invariants beyond document shape; returns every violation."""
    issues: list[str] = []
    known = set(spec.data.field_names)
    if not (is_number(spec.width) and spec.width > 0):
        issues.append("width must be > 0")
    if not (is_number(spec.height) and spec.height > 0):
        issues.append("height must be > 0")
    for f, where in reference_issues(spec):
        issues.append(f"unknown field {f!r} referenced by {where}")

    ids = [l.id for l in spec.layers]
    for dup in sorted({x for x in ids if ids.count(x) > 1}):
        issues.append(f"layers: duplicate id {dup!r}")
    for layer in spec.layers:
        for ch, enc in layer.encoding.items():
            dom = enc.scale.domain
            stype = enc.scale.type
            dtype = spec.data.datatype(enc.field)
            if dom is not None and (stype in ("linear", "time") or (stype is None and dtype in ("quantitative", "temporal"))):
                if len(dom) != 2:
                    issues.append(f"layer {layer.id!r} {ch}: continuous domain needs two endpoints")
                else:
                    lo, hi = (_domain_key(v, dtype) for v in dom)
                    try:
                        if lo > hi:
                            issues.append(f"layer {layer.id!r} {ch}: domain endpoints out of order")
                    except TypeError:
                        issues.append(f"layer {layer.id!r} {ch}: domain endpoints are not comparable")

    seen: set[tuple[str, str, str]] = set()
    axis_ids = [a.id for a in spec.axes]
    for dup in sorted({x for x in axis_ids if axis_ids.count(x) > 1}):
        issues.append(f"axes: duplicate id {dup!r}")
    for a in spec.axes:
        key = (a.orient, a.field, a.side)
        if key in seen:
            issues.append(f"axes: more than one {a.orient} axis for field {a.field!r} on side {a.side!r}")
        seen.add(key)
        if a.side not in SIDES[a.orient]:
            issues.append(f"axis {a.id!r}: side {a.side!r} invalid for {a.orient}")
        if a.values is not None and a.field in known:
            dom, continuous = axis_domain(spec, a)
            if dom is not None:
                dtype = spec.data.datatype(a.field)
                for v in a.values:
                    if not value_in_domain(v, dom, dtype, continuous):
                        issues.append(f"axis {a.id!r}: value {v!r} is out of domain {dom!r}")

    legend_ids = [g.id for g in spec.legends]
    for dup in sorted({x for x in legend_ids if legend_ids.count(x) > 1}):
        issues.append(f"legends: duplicate id {dup!r}")

    counts: dict[str, int] = {}
    for t in spec.texts:
        if t.index != counts.get(t.role, 0):
            issues.append(f"texts: {t.role} indexes are not contiguous from 0")
        counts[t.role] = counts.get(t.role, 0) + 1

    ann_ids = [a.id for a in spec.annotations]
    for dup in sorted({x for x in ann_ids if ann_ids.count(x) > 1}):
        issues.append(f"annotations: duplicate id {dup!r}")
    for a in spec.annotations:
        if a.anchor.type != "independent":
            if a.anchor.field in known:
                present = field_values(spec, a.anchor.field)
                dtype = spec.data.datatype(a.anchor.field)
                for item in a.anchor.items:
                    if not value_in_domain(item, present, dtype, False):
                        issues.append(f"annotation {a.id!r}: item {item!r} not present in field {a.anchor.field!r}")
            if a.anchor.layer is not None and spec.layer(a.anchor.layer) is None:
                issues.append(f"annotation {a.id!r}: anchor layer {a.anchor.layer!r} does not exist")
    for where, p in _placements(spec):
        if p.mode in ("external",):
            continue
        if p.x is not None and not (0 <= p.x <= spec.width):
            issues.append(f"{where}: x={p.x} outside [0, {spec.width}]")
        if p.y is not None and not (0 <= p.y <= spec.height):
            issues.append(f"{where}: y={p.y} outside [0, {spec.height}]")
    return issues


def _placements(spec: VisSpec) -> Iterable[tuple[str, Placement]]:
    for a in spec.annotations:
        yield f"annotation {a.id!r}", a.placement
    for t in spec.texts:
        if t.position.mode in ("absolute", "internal"):
            yield f"{t.role}[{t.index}]", t.position


__all__ = [
    "ORDERED_TYPES",
    "VisSpec",
    "DataTable",
    "FieldDef",
    "Layer",
    "EncodingDef",
    "ScaleDef",
    "AxisDef",
    "LegendDef",
    "TextBlock",
    "Annotation",
    "Anchor",
    "Placement",
    "Segment",
    "MarkOverride",
    "ValueOverride",
    "MarkLabelDef",
    "InteractionDef",
    "parse_vis_spec",
    "vis_from_dict",
    "validate_vis_spec",
    "load_json",
]
