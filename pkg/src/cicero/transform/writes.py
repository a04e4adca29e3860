"""Attribute writes: routing an (element, attribute) pair to model storage.

Per-member styles (one mark of a layer, one label of an axis) are stored as
a shared base style plus overrides.  Writes to such members are buffered for
the duration of one rule and then normalized: the most common value becomes
the base and only deviating members keep an override.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Callable

from ..errors import TypeMismatch, UnsupportedAttribute
from ..grammar import By, Prod, relative
from ..roles import TEXT_ROLES
from ..vis.elements import (
    Element,
    axis_values,
    key_matches,
    layer_marks,
    legend_values,
    same_value,
    value_token,
)
from ..vis.model import (
    CHANNELS,
    MARK_TYPES,
    AxisDef,
    Layer,
    LegendDef,
    MarkOverride,
    Placement,
    Segment,
    ValueOverride,
    VisSpec,
    is_number,
    strip_px,
)

MISSING: Any = type("Missing", (), {"__repr__": lambda self: "MISSING"})()
POSITION_ATTRS = ("x", "y", "dx", "dy", "position")


def apply_relative(current: Any, rel: By | Prod) -> int | float:
    """``current + n`` or ``current * n`` computed exactly on decimal reprs."""
    current = strip_px(current)
    if not is_number(current):
        raise TypeMismatch(f"cannot apply {type(rel).__name__.lower()} to non-numeric value {current!r}")
    a, b = Decimal(repr(current)), Decimal(repr(rel.n))
    out = a + b if isinstance(rel, By) else a * b
    if out == out.to_integral_value():
        return int(out)
    return float(out)


# --------------------------------------------------------------------------
# style series


@dataclass
class StyleSeries:
    base: dict
    entries: list
    members: list[tuple[str, Any]]  # (member id, member payload)
    matches: Callable[[Any, Any], bool]
    exact: Callable[[Any, Any], bool]
    make_entry: Callable[[Any], Any]
    keep_empty: Callable[[Any], bool] = lambda e: False

    def effective(self, payload: Any, attr: str) -> Any:
        v = self.base.get(attr, MISSING)
        for e in self.entries:
            if attr in e.style and self.matches(e, payload):
                v = e.style[attr]
        return v

    def assign(self, attr: str, final: dict[str, Any]) -> None:
        """Store ``final`` (member id -> value) as base plus minimal overrides."""
        values = [final[mid] for mid, _ in self.members]
        if not values:
            return
        current = self.base.get(attr, MISSING)
        if any(v is MISSING for v in values):
            base = MISSING
        else:
            counts: Counter = Counter()
            first: dict[str, Any] = {}
            for v in values:
                k = repr(_canon(v))
                counts[k] += 1
                first.setdefault(k, v)
            top = max(counts.values())
            winners = [k for k in first if counts[k] == top]
            ck = repr(_canon(current)) if current is not MISSING else None
            base = first[ck] if ck in winners else first[winners[0]]
        if base is MISSING:
            self.base.pop(attr, None)
        else:
            self.base[attr] = base
        for e in self.entries:
            e.style.pop(attr, None)
        for (mid, payload), v in zip(self.members, values):
            if v is MISSING or (base is not MISSING and _same(v, base)):
                continue
            entry = next((e for e in self.entries if self.exact(e, payload)), None)
            if entry is None:
                entry = self.make_entry(payload)
                self.entries.append(entry)
            entry.style[attr] = v
        self.entries[:] = [e for e in self.entries if e.style or self.keep_empty(e)]


def _canon(v: Any) -> Any:
    if isinstance(v, float) and v.is_integer():
        return int(v)
    return v


def _same(a: Any, b: Any) -> bool:
    return type(a) is type(b) and a == b or (is_number(a) and is_number(b) and a == b)


def mark_series(spec: VisSpec, layer: Layer, labels: bool = False) -> StyleSeries:
    dtypes = spec.data.datatypes
    marks = layer_marks(spec, layer)
    if labels:
        if layer.label is None:
            raise UnsupportedAttribute(f"layer {layer.id!r} has no labels")
        base, entries = layer.label.style, layer.label.overrides
    else:
        base, entries = layer.style, layer.overrides
    return StyleSeries(
        base=base,
        entries=entries,
        members=[(m.key_text, m) for m in marks],
        matches=lambda e, m: key_matches(e.key, m.common, dtypes),
        exact=lambda e, m: e.key.keys() == m.key.keys() and key_matches(e.key, m.key, dtypes),
        make_entry=lambda m: MarkOverride(dict(m.key), {}),
    )


def value_series(spec: VisSpec, owner: AxisDef | LegendDef, part: str) -> StyleSeries:
    dtype = spec.data.datatype(owner.field)
    if isinstance(owner, AxisDef):
        values = axis_values(spec, owner)
        base, entries = owner.labelStyle, owner.labels
    elif part == "label":
        values = legend_values(spec, owner)
        base, entries = owner.labelStyle, owner.labels
    else:
        values = legend_values(spec, owner)
        base, entries = owner.symbolStyle, owner.symbols
    return StyleSeries(
        base=base,
        entries=entries,
        members=[(value_token(v), v) for v in values],
        matches=lambda e, v: same_value(v, e.value, dtype),
        exact=lambda e, v: same_value(v, e.value, dtype),
        make_entry=lambda v: ValueOverride(v, {}),
        keep_empty=lambda e: e.segments is not None,
    )


def series_for(spec: VisSpec, key: tuple[str, str]) -> StyleSeries:
    kind, ident = key
    if kind in ("marks", "labels"):
        layer = spec.layer(ident)
        return mark_series(spec, layer, labels=kind == "labels")
    if kind == "axis-labels":
        return value_series(spec, spec.axis(ident), "label")
    if kind == "legend-labels":
        return value_series(spec, spec.legend(ident), "label")
    return value_series(spec, spec.legend(ident), "mark")


# --------------------------------------------------------------------------
# slots


@dataclass
class Slot:
    get: Callable[[], Any]
    set: Callable[[Any, Any], None] | None = None
    series: tuple[str, str] | None = None
    member: str | None = None
    delete: Callable[[], None] | None = None


def _dict_slot(d: dict, attr: str) -> Slot:
    def put(v: Any, raw: Any) -> None:
        d[attr] = v

    return Slot(lambda: d.get(attr, MISSING), put, delete=lambda: d.pop(attr, None))


def _attr_slot(obj: Any, attr: str, check: Callable[[Any], None] | None = None) -> Slot:
    def put(v: Any, raw: Any) -> None:
        if check is not None:
            check(v)
        setattr(obj, attr, v)

    return Slot(lambda: getattr(obj, attr), put)


def _placement_slot(p: Placement, attr: str) -> Slot:
    name = "mode" if attr == "position" else attr

    def get() -> Any:
        v = getattr(p, name)
        return MISSING if v is None else v

    def put(v: Any, raw: Any) -> None:
        if (name in ("dx", "dy") or name in ("x", "y") and v is not None) and not is_number(v):
            raise TypeMismatch(f"{attr} must be a number, got {v!r}")
        setattr(p, name, v)

    return Slot(get, put)


def _text_style_slot(style: dict, segments: list[Segment], attr: str) -> Slot:
    """Block style plus every segment that sets the same attribute itself."""

    def put(v: Any, raw: Any) -> None:
        style[attr] = v
        rel = relative(raw)
        for seg in segments:
            if attr in seg.style:
                seg.style[attr] = apply_relative(seg.style[attr], rel) if rel else v

    def delete() -> None:
        style.pop(attr, None)
        for seg in segments:
            seg.style.pop(attr, None)

    return Slot(lambda: style.get(attr, MISSING), put, delete=delete)


def _segments_slot(get_segments: Callable[[], list[Segment]], set_segments: Callable[[list[Segment]], None]) -> Slot:
    def get() -> Any:
        return " ".join(s.text for s in get_segments())

    def put(v: Any, raw: Any) -> None:
        lines = v if isinstance(v, list) else [v]
        old = get_segments()
        new = []
        for i, line in enumerate(lines):
            style = dict(old[min(i, len(old) - 1)].style) if old else {}
            new.append(Segment(str(line), style))
        set_segments(new)

    return Slot(get, put)


def _scale_slot(spec: VisSpec, axis: AxisDef) -> Slot:
    encs = [
        layer.encoding[axis.channel]
        for layer in spec.layers
        if axis.channel in layer.encoding and layer.encoding[axis.channel].field == axis.field
    ]

    def get() -> Any:
        return encs[0].scale.to_dict() if encs else MISSING

    def put(v: Any, raw: Any) -> None:
        if not isinstance(v, dict):
            raise TypeMismatch("scale must be an object")
        for enc in encs:
            for k, val in v.items():
                if k not in ("type", "domain", "range"):
                    raise UnsupportedAttribute(f"unknown scale property {k!r}")
                setattr(enc.scale, k, list(val) if isinstance(val, list) else val)

    return Slot(get, put)


def _check_mark(v: Any) -> None:
    if v not in MARK_TYPES:
        raise TypeMismatch(f"mark must be one of {list(MARK_TYPES)}, got {v!r}")


def _encoding_slot(layer: Layer, channel: str) -> Slot:
    def get() -> Any:
        enc = layer.encoding.get(channel)
        return enc.to_dict() if enc is not None else MISSING

    def put(v: Any, raw: Any) -> None:
        enc = layer.encoding.get(channel)
        if enc is None:
            raise UnsupportedAttribute(f"layer {layer.id!r} has no {channel} encoding")
        for k, val in v.items():
            if k == "field":
                enc.field = val
            elif k == "scale" and isinstance(val, dict):
                for sk, sv in val.items():
                    setattr(enc.scale, sk, sv)
            elif k == "operations":
                enc.operations = list(val)
            else:
                raise UnsupportedAttribute(f"unknown encoding property {k!r}")

    return Slot(get, put)


def is_encoding_value(raw: Any) -> bool:
    """An encoding-shaped object, as opposed to a static value or relative update."""
    return isinstance(raw, dict) and relative(raw) is None and bool(set(raw) & {"field", "scale", "operations"})


def route(spec: VisSpec, e: Element, attr: str, encoding: bool = True) -> Slot:
    """Storage behind attribute ``attr`` of element ``e``.

    With ``encoding`` false a channel-named attribute (``size``, ``color``)
    means the static style, even where the layer also encodes that channel.
    """
    role, owner = e.role, e.owner
    if role == "view":
        if attr in ("width", "height"):
            def check(v: Any) -> None:
                if not is_number(v) or v <= 0:
                    raise TypeMismatch(f"{attr} must be a positive number, got {v!r}")

            return _attr_slot(spec, attr, check)
        raise UnsupportedAttribute(f"the view has no attribute {attr!r}")
    if role in ("view.layout", "view.row", "view.column"):
        raise UnsupportedAttribute(f"{role} has no attribute {attr!r}")
    if role == "layer":
        if attr == "mark":
            return _attr_slot(owner, "mark", _check_mark)
        if encoding and attr in CHANNELS and attr in owner.encoding:
            return _encoding_slot(owner, attr)
        return _dict_slot(owner.style, attr)
    if role == "layer.mark":
        if encoding and attr in CHANNELS and attr in owner.encoding:
            return _encoding_slot(owner, attr)
        series = ("marks", owner.id)
        return Slot(lambda: series_for(spec, series).effective(e.key, attr), series=series, member=e.key.key_text)
    if role == "layer.mark.label":
        if attr in POSITION_ATTRS:
            return _placement_slot(owner.label.placement, attr)
        series = ("labels", owner.id)
        return Slot(lambda: series_for(spec, series).effective(e.key, attr), series=series, member=e.key.key_text)
    if isinstance(owner, AxisDef):
        return _route_axis(spec, e, owner, attr)
    if isinstance(owner, LegendDef):
        return _route_legend(spec, e, owner, attr)
    if role in TEXT_ROLES:
        t = owner
        if attr in POSITION_ATTRS:
            return _placement_slot(t.position, attr)
        if attr == "text":
            return _segments_slot(lambda: t.segments, lambda s: setattr(t, "segments", s))
        return _text_style_slot(t.style, t.segments, attr)
    if role == "annotation":
        a = owner
        if attr in POSITION_ATTRS:
            return _placement_slot(a.placement, attr)
        if attr == "numbered":
            return _attr_slot(a, "numbered")
        if attr == "text":
            return _segments_slot(lambda: a.segments, lambda s: setattr(a, "segments", s))
        return _text_style_slot(a.style, a.segments, attr)
    if role == "data":
        if not spec.data.has_field(attr):
            raise UnsupportedAttribute(f"data has no field {attr!r}")
        return _dict_slot(owner, attr)
    if role == "interaction":
        return _dict_slot(owner.params, attr)
    raise UnsupportedAttribute(f"{role} has no attribute {attr!r}")


def _route_axis(spec: VisSpec, e: Element, axis: AxisDef, attr: str) -> Slot:
    part = e.role.partition(".")[2]
    if part == "":
        if attr == "values":
            return Slot(lambda: axis_values(spec, axis), lambda v, raw: setattr(axis, "values", list(v)))
        if attr == "grid":
            return _attr_slot(axis, "grid")
        if attr == "title":
            return Slot(lambda: axis.title if axis.title is not None else MISSING, lambda v, raw: setattr(axis, "title", v))
        if attr == "side":
            from ..vis.model import SIDES

            def check(v: Any) -> None:
                if v not in SIDES[axis.orient]:
                    raise TypeMismatch(f"side {v!r} invalid for a {axis.orient} axis")

            return _attr_slot(axis, "side", check)
        if attr == "scale":
            return _scale_slot(spec, axis)
        if attr in POSITION_ATTRS:
            return _placement_slot(axis.labelPlacement, attr)
        return _dict_slot(axis.style, attr)
    if part == "label":
        if attr in POSITION_ATTRS:
            return _placement_slot(axis.labelPlacement, attr)
        if attr == "text":
            return _value_text_slot(spec, axis, axis.labels, e.key)
        series = ("axis-labels", axis.id)
        return Slot(lambda: series_for(spec, series).effective(e.key, attr), series=series, member=value_token(e.key))
    if part == "domain":
        return _dict_slot(axis.domainStyle, attr)
    return _dict_slot(axis.gridStyle, attr)


def _value_text_slot(spec: VisSpec, owner: Any, entries: list[ValueOverride], value: Any) -> Slot:
    dtype = spec.data.datatype(owner.field)

    def entry() -> ValueOverride:
        for o in entries:
            if same_value(value, o.value, dtype):
                return o
        o = ValueOverride(value, {})
        entries.append(o)
        return o

    def get_segments() -> list[Segment]:
        for o in entries:
            if same_value(value, o.value, dtype) and o.segments is not None:
                return o.segments
        return [Segment(str(value), {})]

    return _segments_slot(get_segments, lambda s: setattr(entry(), "segments", s))


def _route_legend(spec: VisSpec, e: Element, legend: LegendDef, attr: str) -> Slot:
    if e.role == "legend":
        if attr in ("orient", "title"):
            return Slot(
                lambda: getattr(legend, attr) if getattr(legend, attr) is not None else MISSING,
                lambda v, raw: setattr(legend, attr, v),
            )
        return _dict_slot(legend.style, attr)
    if e.role == "legend.label":
        if attr == "text":
            return _value_text_slot(spec, legend, legend.labels, e.key)
        series = ("legend-labels", legend.id)
    else:
        series = ("legend-marks", legend.id)
    return Slot(lambda: series_for(spec, series).effective(e.key, attr), series=series, member=value_token(e.key))


# --------------------------------------------------------------------------
# claims and the per-rule writer


@dataclass
class Claim:
    important: bool
    specificity: int
    rule: int

    @property
    def rank(self) -> tuple[bool, int]:
        return (self.important, self.specificity)


@dataclass
class Writer:
    """Applies one rule's attribute writes under the claims table."""

    spec: VisSpec
    claims: dict[tuple[str, str], Claim]
    rule: int
    important: bool
    specificity: int
    writes: list[dict] = field(default_factory=list)
    suppressed: list[dict] = field(default_factory=list)
    pending: dict[tuple[tuple[str, str], str], dict[str, Any]] = field(default_factory=dict)

    def allowed(self, path: str, attr: str) -> bool:
        claim = self.claims.get((path, attr))
        return claim is None or claim.rank <= (self.important, self.specificity)

    def write(self, e: Element, attr: str, raw: Any) -> bool:
        claim = self.claims.get((e.path, attr))
        if claim is not None and claim.rank > (self.important, self.specificity):
            self.suppressed.append({"path": e.path, "attr": attr, "by": claim.rule})
            return False
        slot = route(self.spec, e, attr, encoding=is_encoding_value(raw))
        pend = self.pending.get((slot.series, attr)) if slot.series else None
        current = pend[slot.member] if pend is not None and slot.member in pend else slot.get()
        rel = relative(raw)
        if rel is not None:
            if current is MISSING:
                current = e.style.get(attr, MISSING)
            if current is MISSING:
                raise TypeMismatch(f"{e.path} has no {attr!r} to apply {type(rel).__name__.lower()} to")
            value = apply_relative(current, rel)
        else:
            value = strip_px(raw)
        if slot.series is not None:
            self.pending.setdefault((slot.series, attr), {})[slot.member] = value
        else:
            slot.set(value, raw)
        self.claims[(e.path, attr)] = Claim(self.important, self.specificity, self.rule)
        self.writes.append({"path": e.path, "attr": attr, "value": value})
        return True

    def delete(self, e: Element, attr: str) -> bool:
        """Drop ``attr`` from ``e`` so that the dialect default applies again."""
        claim = self.claims.get((e.path, attr))
        if claim is not None and claim.rank > (self.important, self.specificity):
            self.suppressed.append({"path": e.path, "attr": attr, "by": claim.rule})
            return False
        slot = route(self.spec, e, attr, encoding=False)
        if slot.series is not None:
            self.pending.setdefault((slot.series, attr), {})[slot.member] = MISSING
        elif slot.delete is not None:
            slot.delete()
        else:
            raise UnsupportedAttribute(f"{attr!r} of {e.path} cannot be removed")
        self.claims[(e.path, attr)] = Claim(self.important, self.specificity, self.rule)
        self.writes.append({"path": e.path, "attr": attr, "value": None})
        return True

    def flush(self) -> None:
        for (key, attr), values in self.pending.items():
            series = series_for(self.spec, key)
            final = {mid: values.get(mid, series.effective(payload, attr)) for mid, payload in series.members}
            series.assign(attr, final)
        self.pending.clear()
