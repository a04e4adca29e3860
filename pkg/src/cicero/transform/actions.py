"""The eight actions.

Each ``op_*`` takes the resolved selection, the raw option and the rule's
ActionContext, and edits ``ctx.spec`` in place.  Attribute writes go through
``ctx.writer`` so that the cascade (specificity, important) can veto them;
structural edits (creating, deleting, moving elements) are applied directly.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Callable

from ..errors import (
    InvalidReplacement,
    MissingOption,
    NoPairRelation,
    TypeMismatch,
    UnsupportedAttribute,
)
from ..grammar import Rule
from ..layout import (
    DEFAULT_RESOLUTION,
    LayoutFrame,
    annotation_size,
    default_placement,
    resolve_layout,
    text_size,
)
from ..predicate import normalize_temporal
from ..query import Selection, children_of, resolve_option_scope, split_option
from ..roles import AXIS_ROLES, TEXT_ROLES, normalize_role
from ..vis.elements import (
    Element,
    axis_values,
    enumerate_elements,
    layer_marks,
    mark_key_fields,
    mark_label_style,
    mark_label_text,
    same_value,
    value_style,
)
from ..vis.model import (
    CHANNELS,
    DEFAULT_STYLES,
    INTERACTION_KINDS,
    POSITION_CHANNELS,
    SIDES,
    Anchor,
    Annotation,
    AxisDef,
    InteractionDef,
    Layer,
    LegendDef,
    MarkLabelDef,
    Placement,
    Segment,
    TextBlock,
    ValueOverride,
    VisSpec,
    axis_domain,
    default_axis_id,
    is_number,
    strip_px,
    value_in_domain,
)
from .defaults import inherit_style, mimic_series, similar_role_fallback, style_delta
from .structure import (
    CHANNEL_ORIENT,
    TMP_CHANNEL,
    _unique_id,
    axis_to_legend,
    legend_to_axis,
    move_channels,
    prune_dangling,
    swap_facets,
    sync_guides,
)
from .writes import Writer, is_encoding_value

REPOSITION_KEYS = ("x", "y", "dx", "dy", "external", "internal", "fix", "fixed", "serial", "parallel", "number", "position")


@dataclass
class ActionContext:
    spec: VisSpec
    writer: Writer
    rule: Rule
    index: int
    elements: list[Element]
    resolution: float = DEFAULT_RESOLUTION
    diagnostics: list[str] = field(default_factory=list)
    _frame: LayoutFrame | None = None

    @property
    def frame(self) -> LayoutFrame:
        if self._frame is None:
            self._frame = resolve_layout(self.spec, self.resolution)
        return self._frame

    def refresh(self) -> None:
        self.elements = enumerate_elements(self.spec)
        self._frame = None

    def note(self, message: str) -> None:
        self.diagnostics.append(f"rule {self.index}: {message}")


# --------------------------------------------------------------------------
# shared helpers


def layers_of(selection: Selection, spec: VisSpec) -> list[Layer]:
    """Layers an element selection stands for, in spec order."""
    picked: set[int] = set()
    for e in selection:
        if e.role in ("view", "view.layout"):
            picked.update(id(l) for l in spec.layers)
        elif e.role in ("layer", "layer.mark", "layer.mark.label"):
            picked.add(id(e.owner))
        elif isinstance(e.owner, AxisDef):
            ch = e.owner.channel
            picked.update(id(l) for l in spec.layers if ch in l.encoding and l.encoding[ch].field == e.owner.field)
        elif isinstance(e.owner, LegendDef):
            ch = e.owner.channel
            picked.update(id(l) for l in spec.layers if ch in l.encoding and l.encoding[ch].field == e.owner.field)
    return [l for l in spec.layers if id(l) in picked]


def _marks_under(ctx: ActionContext, e: Element) -> list[Element]:
    return [m for m in ctx.elements if m.parent == e.path and m.role == "layer.mark"]


def set_attr(ctx: ActionContext, e: Element, attr: str, raw: Any) -> None:
    """One attribute write, expanding shorthand targets."""
    if e.role == "view" and attr == "size":
        if isinstance(raw, dict):
            w, h = raw.get("width"), raw.get("height")
        elif isinstance(raw, list) and len(raw) == 2:
            w, h = raw
        else:
            w = h = raw
        if w is not None:
            ctx.writer.write(e, "width", w)
        if h is not None:
            ctx.writer.write(e, "height", h)
        return
    if e.role == "layer" and attr != "mark" and not (attr in e.owner.encoding and is_encoding_value(raw)):
        marks = _marks_under(ctx, e)
        if marks:
            for m in marks:
                ctx.writer.write(m, attr, raw)
            return
    ctx.writer.write(e, attr, raw)


def _segments(value: Any) -> list[Segment]:
    if isinstance(value, str):
        return [Segment(value, {})]
    if isinstance(value, list):
        out = []
        for v in value:
            if isinstance(v, dict):
                out.append(Segment(str(v.get("text", "")), dict(v.get("style", {}))))
            else:
                out.append(Segment(str(v), {}))
        return out
    raise TypeMismatch(f"expected text or a list of text lines, got {value!r}")


def _sort_values(values: list, dtype: str | None) -> list:
    if dtype == "quantitative" and all(is_number(v) for v in values):
        return sorted(values)
    if dtype == "temporal":
        return sorted(values, key=normalize_temporal)
    return values


def _element_size(e: Element) -> tuple[float, float]:
    owner = e.owner
    if isinstance(owner, Annotation):
        return annotation_size(owner)
    if isinstance(owner, TextBlock):
        return text_size(owner.segments, {**DEFAULT_STYLES.get(owner.role, {}), **owner.style})
    raise UnsupportedAttribute(f"{e.path} cannot be placed freely")


def _placement_of(e: Element) -> Placement:
    owner = e.owner
    if isinstance(owner, Annotation):
        return owner.placement
    if isinstance(owner, TextBlock):
        return owner.position
    if isinstance(owner, AxisDef):
        return owner.labelPlacement
    if isinstance(owner, Layer) and owner.label is not None:
        return owner.label.placement
    raise UnsupportedAttribute(f"{e.path} has no placement")


# --------------------------------------------------------------------------
# modify


def op_modify(selection: Selection, option: Any, ctx: ActionContext) -> None:
    if not isinstance(option, dict):
        raise MissingOption("modify needs an option object")
    for e, attrs in resolve_option_scope(option, selection, ctx.spec, ctx.elements):
        for attr, raw in attrs.items():
            set_attr(ctx, e, attr, raw)


# --------------------------------------------------------------------------
# reposition


def op_reposition(selection: Selection, option: Any, ctx: ActionContext) -> None:
    if not isinstance(option, dict):
        raise MissingOption("reposition needs an option object")
    for e, attrs in resolve_option_scope(option, selection, ctx.spec, ctx.elements):
        for k in attrs:
            if k not in REPOSITION_KEYS:
                raise UnsupportedAttribute(f"reposition does not accept {k!r}")
        _reposition_one(ctx, e, attrs)


def _reposition_one(ctx: ActionContext, e: Element, attrs: dict) -> None:
    w = ctx.writer
    p = _placement_of(e)
    if attrs.get("external") is True or attrs.get("internal") is False:
        if p.mode != "external":
            size = _element_size(e)
            target = default_placement("externalized-annotation", ctx.frame, size)
            w.write(e, "position", "external")
            w.write(e, "x", target.x)
            w.write(e, "y", target.y)
    elif attrs.get("internal") is True or attrs.get("external") is False:
        if p.mode == "external" or p.mode == "auto" and isinstance(e.owner, TextBlock):
            _internalize(ctx, e)
    for key, mode in (("fix", "fixed"), ("fixed", "fixed"), ("serial", "serial"), ("parallel", "parallel")):
        if attrs.get(key) is True:
            w.write(e, "position", mode)
    if "position" in attrs:
        w.write(e, "position", attrs["position"])
    for k in ("x", "y"):
        if k in attrs:
            w.write(e, k, attrs[k])
    if ("x" in attrs or "y" in attrs) and p.mode in ("auto", "relative", "serial", "parallel"):
        if p.x is None or p.y is None:
            raise TypeMismatch(f"{e.path}: absolute placement needs both x and y")
        w.write(e, "position", "absolute")
    for k in ("dx", "dy"):
        if k in attrs:
            w.write(e, k, attrs[k])
    if "number" in attrs:
        if not isinstance(e.owner, Annotation):
            raise UnsupportedAttribute(f"{e.path} cannot be numbered")
        w.write(e, "numbered", bool(attrs["number"]))


def _internalize(ctx: ActionContext, e: Element) -> None:
    w = ctx.writer
    owner = e.owner
    if isinstance(owner, Annotation) and owner.anchor.type != "independent":
        w.write(e, "position", "auto")
        w.write(e, "x", None)
        w.write(e, "y", None)
        return
    target = default_placement("non-data-annotation", ctx.frame, _element_size(e), exclude=[e.path])
    w.write(e, "position", "internal")
    w.write(e, "x", target.x)
    w.write(e, "y", target.y)


# --------------------------------------------------------------------------
# transpose


def op_transpose(selection: Selection, option: Any, ctx: ActionContext) -> None:
    option = option or {}
    spec = ctx.spec
    layer_targets: list[Element] = []
    facets = False
    for e in selection:
        if e.role in ("view", "layer"):
            layer_targets.append(e)
        elif e.role in ("view.layout", "view.row", "view.column"):
            facets = True
        elif e.role.endswith(".label") or e.role in AXIS_ROLES or e.role == "annotation":
            _transpose_labels(ctx, e, option)
        else:
            raise NoPairRelation(f"{e.role} has no paired element to transpose with")
    if layer_targets:
        layers = layers_of(Selection(layer_targets), spec)
        move_channels(spec, [l for l in layers if "x" in l.encoding or "y" in l.encoding], {"x": "y", "y": "x"})
    if facets:
        swap_facets(spec)


def _transpose_labels(ctx: ActionContext, e: Element, option: dict) -> None:
    if option.get("serial") is True:
        mode = "serial"
    elif option.get("parallel") is True:
        mode = "parallel"
    else:
        current = _placement_of(e).mode
        mode = "parallel" if current == "serial" else "serial"
    ctx.writer.write(e, "position", mode)


# --------------------------------------------------------------------------
# replace and swap


def _endpoint(value: Any) -> tuple[str, str]:
    """("channel", name) or ("role", canonical role) for a to/from/swap entry."""
    if isinstance(value, str):
        if value in CHANNELS or value in (TMP_CHANNEL, "row", "column"):
            return ("channel", value)
        return ("role", normalize_role(value))
    if isinstance(value, dict):
        if "channel" in value:
            return ("channel", value["channel"])
        if "role" in value:
            return ("role", normalize_role(value["role"]))
    raise InvalidReplacement(f"cannot interpret {value!r} as a channel or role")


def op_replace(selection: Selection, option: Any, ctx: ActionContext) -> None:
    if not isinstance(option, dict) or "to" not in option:
        raise MissingOption("replace needs an option with 'to'")
    to = option["to"]
    if isinstance(to, dict) and "channel" in to and "role" not in to:
        if "from" in option:
            kind, a = _endpoint(option["from"])
        else:
            spec_channel = selection.specifier.channel if selection.specifier is not None else None
            kind, a = ("channel", spec_channel) if isinstance(spec_channel, str) else ("role", "")
        if kind != "channel":
            raise InvalidReplacement("a channel can only replace a channel")
        replace_channel(ctx.spec, layers_of(selection, ctx.spec), a, to["channel"])
        return
    if not isinstance(to, dict) or "role" not in to:
        raise InvalidReplacement("'to' must name a channel or a role")
    target = normalize_role(to["role"])
    for e in list(selection):
        _replace_role(ctx, e, target, to)


def replace_channel(spec: VisSpec, layers: list[Layer], a: str, b: str) -> None:
    if {a, b} <= {"row", "column"}:
        if a != b:
            if getattr(spec, b) is not None:
                raise InvalidReplacement(f"the {b} facet is already used")
            swap_facets(spec)
        return
    if a == b:
        return
    move_channels(spec, [l for l in layers if a in l.encoding], {a: b})


def _replace_role(ctx: ActionContext, e: Element, target: str, to: dict) -> None:
    spec = ctx.spec
    role = e.role
    if role == target or target in e.roles and target not in ("annotation",) + TEXT_ROLES:
        return
    owner = e.owner
    if isinstance(owner, AxisDef) and role in AXIS_ROLES and target == "legend":
        channel = to.get("channel", "color")
        if not any(channel in l.encoding and l.encoding[channel].field == owner.field for l in spec.layers):
            raise InvalidReplacement(f"no layer encodes {owner.field!r} on {channel!r}; a legend would explain nothing")
        spec.axes.remove(owner)
        if not any(g.channel == channel and g.field == owner.field for g in spec.legends):
            spec.legends.append(axis_to_legend(spec, owner, channel))
        return
    if isinstance(owner, LegendDef) and role == "legend" and target in AXIS_ROLES:
        channel = {"hAxis": "x", "vAxis": "y"}.get(target, to.get("channel"))
        if channel is None:
            channel = next(
                (ch for ch in POSITION_CHANNELS for l in spec.layers if ch in l.encoding and l.encoding[ch].field == owner.field),
                None,
            )
        if channel not in POSITION_CHANNELS or not any(
            channel in l.encoding and l.encoding[channel].field == owner.field for l in spec.layers
        ):
            raise InvalidReplacement(f"{owner.field!r} is not on a position channel")
        orient = CHANNEL_ORIENT[channel]
        spec.legends.remove(owner)
        if not any(a.orient == orient and a.field == owner.field for a in spec.axes):
            spec.axes.append(legend_to_axis(spec, owner, orient))
        return
    if role in ("view.row", "view.column") and target in ("view.row", "view.column"):
        replace_channel(spec, [], role[5:], target[5:])
        return
    if isinstance(owner, TextBlock) and target == "annotation":
        ann = Annotation(
            id=_unique_id(f"{owner.role}{owner.index}", [a.id for a in spec.annotations]),
            anchor=Anchor("independent"),
            segments=copy.deepcopy(owner.segments),
            style=dict(owner.style),
        )
        spec.texts.remove(owner)
        spec.reindex_texts()
        ctx._frame = None
        target_p = default_placement("non-data-annotation", ctx.frame, annotation_size(ann))
        ann.placement = target_p
        spec.annotations.append(ann)
        return
    if isinstance(owner, TextBlock) and target in TEXT_ROLES:
        spec.texts.remove(owner)
        spec.texts.append(TextBlock(target, 0, owner.segments, owner.style, Placement()))
        spec.reindex_texts()
        return
    if isinstance(owner, Annotation) and target in TEXT_ROLES:
        spec.annotations.remove(owner)
        spec.texts.append(TextBlock(target, 0, copy.deepcopy(owner.segments), dict(owner.style), Placement()))
        spec.reindex_texts()
        return
    raise InvalidReplacement(f"{role} cannot be re-expressed as {target}")


def _swap_pair(option: Any) -> tuple[Any, Any]:
    if isinstance(option, list) and len(option) == 2:
        return option[0], option[1]
    if isinstance(option, dict) and "from" in option and "to" in option:
        return option["from"], option["to"]
    raise MissingOption("swap needs two entries or from/to")


def op_swap(selection: Selection, option: Any, ctx: ActionContext) -> None:
    first, second = _swap_pair(option)
    (ka, a), (kb, b) = _endpoint(first), _endpoint(second)
    role_channel = {"hAxis": "x", "vAxis": "y", "view.row": "row", "view.column": "column"}
    if ka == "role":
        a = role_channel.get(a, a)
    if kb == "role":
        b = role_channel.get(b, b)
    if a == b:
        return
    if {a, b} == {"row", "column"}:
        swap_facets(ctx.spec)
        return
    if a not in CHANNELS + (TMP_CHANNEL,) or b not in CHANNELS + (TMP_CHANNEL,):
        raise InvalidReplacement(f"cannot swap {a!r} and {b!r}")
    layers = [l for l in layers_of(selection, ctx.spec) if a in l.encoding or b in l.encoding]
    move_channels(ctx.spec, layers, {a: b, b: a})


# --------------------------------------------------------------------------
# add


def op_add(selection: Selection, option: Any, ctx: ActionContext) -> None:
    if not isinstance(option, dict):
        raise MissingOption("add needs an option object")
    for e in list(selection):
        owner = e.owner
        if e.role == "view":
            _add_to_view(ctx, option)
        elif isinstance(owner, AxisDef) and e.role in AXIS_ROLES:
            _add_to_axis(ctx, e, owner, option)
        elif e.role == "layer":
            _add_to_layer(ctx, owner, option)
        elif isinstance(owner, (TextBlock, Annotation)):
            _add_to_text(ctx, owner, option)
        elif isinstance(owner, LegendDef) and e.role == "legend":
            for k, v in option.items():
                if k == "title":
                    owner.title = str(v)
                else:
                    raise UnsupportedAttribute(f"cannot add {k!r} to a legend")
        else:
            raise UnsupportedAttribute(f"cannot add to {e.role}")
        ctx.refresh()


def _midpoints(values: list, parity: str) -> list:
    nums = [Decimal(repr(v)) for v in values if is_number(v)]
    if len(nums) < 2:
        return []
    mids = [(a + b) / 2 for a, b in zip(nums, nums[1:])]
    if parity == "odd":
        mids.append(nums[-1] + (nums[-1] - nums[-2]) / 2)
    else:
        mids.insert(0, nums[0] - (nums[1] - nums[0]) / 2)
    return [int(m) if m == m.to_integral_value() else float(m) for m in mids]


def add_axis_values(ctx: ActionContext, axis: AxisDef, values: Any) -> list:
    """Merge ``values`` into the axis ticks; returns the values actually added."""
    spec = ctx.spec
    dtype = spec.data.datatype(axis.field)
    current = axis_values(spec, axis)
    if values in ("odd", "even"):
        values = _midpoints(current, values)
    if not isinstance(values, list):
        raise TypeMismatch("values must be a list, 'odd' or 'even'")
    dom, continuous = axis_domain(spec, axis)
    added: list = []
    for v in values:
        v = strip_px(v)
        if any(same_value(c, v, dtype) for c in current + added):
            ctx.note(f"axis {axis.id!r} already has value {v!r}")
            continue
        if dom is not None and not value_in_domain(v, dom, dtype, continuous):
            ctx.note(f"value {v!r} is outside the domain of axis {axis.id!r}; skipped")
            continue
        added.append(v)
    if not added:
        return []
    existing = [value_style(axis.labelStyle, axis.labels, v, dtype, "axis.label") for v in current]
    axis.values = _sort_values(current + added, dtype)
    mode = mimic_series(existing)
    if mode is None:
        role = {"horizontal": "hAxis.label", "vertical": "vAxis.label"}.get(axis.orient, "axis.label")
        if not axis.labelStyle:
            fallback, _ = similar_role_fallback(role, spec)
            axis.labelStyle.update(style_delta(fallback, DEFAULT_STYLES["axis.label"]))
        return added
    base = {**DEFAULT_STYLES["axis.label"], **axis.labelStyle}
    delta = style_delta(mode, base)
    if delta:
        for v in added:
            axis.labels.append(ValueOverride(v, dict(delta)))
    return added


def _label_groups(axis: AxisDef, dtype: str | None, values: list) -> dict[int, list[tuple[dict, list[dict]]]]:
    """Existing labels by text-line count: (label style, per-line styles)."""
    groups: dict[int, list[tuple[dict, list[dict]]]] = {}
    for v in values:
        o = next((x for x in axis.labels if same_value(v, x.value, dtype)), None)
        style = dict(o.style) if o is not None else {}
        if o is not None and o.segments is not None:
            segs = [dict(s.style) for s in o.segments]
        else:
            segs = [{}]
        groups.setdefault(len(segs), []).append((style, segs))
    return groups


def add_axis_labels(ctx: ActionContext, axis: AxisDef, entries: Any) -> None:
    """New values with custom multi-line text, styled after the labels with the closest line count."""
    if isinstance(entries, dict):
        entries = [entries]
    if not isinstance(entries, list):
        raise TypeMismatch("label must be an object or a list of objects")
    spec = ctx.spec
    dtype = spec.data.datatype(axis.field)
    for entry in entries:
        if not isinstance(entry, dict) or "value" not in entry:
            raise TypeMismatch("each added label needs a 'value'")
        v = entry["value"]
        lines = entry.get("text", str(v))
        lines = [lines] if isinstance(lines, str) else [str(x) for x in lines]
        current = axis_values(spec, axis)
        groups = _label_groups(axis, dtype, current)
        if not any(same_value(c, v, dtype) for c in current):
            if not add_axis_values(ctx, axis, [v]):
                continue
            axis.labels[:] = [o for o in axis.labels if not same_value(v, o.value, dtype) or o.segments is not None]
        n = len(lines)
        style: dict = {}
        seg_styles: list[dict] = [{} for _ in lines]
        if groups:
            closest = min(groups, key=lambda k: (abs(k - n), k))
            members = groups[closest]
            keyed = [{"style": s, "segments": segs} for s, segs in members]
            picked = mimic_series(keyed)
            style = dict(picked["style"])
            segs = picked["segments"]
            seg_styles = [dict(segs[min(i, len(segs) - 1)]) for i in range(n)]
        o = next((x for x in axis.labels if same_value(v, x.value, dtype)), None)
        if o is None:
            o = ValueOverride(v, {})
            axis.labels.append(o)
        o.style = style
        o.segments = [Segment(t, s) for t, s in zip(lines, seg_styles)]


def _add_to_axis(ctx: ActionContext, e: Element, axis: AxisDef, option: dict) -> None:
    spec = ctx.spec
    for k, v in option.items():
        if k == "values":
            add_axis_values(ctx, axis, v)
        elif k == "label" and v is True:
            hidden = axis.labelStyle.get("visible") is False or not any(
                x.parent == e.path and x.role.endswith(".label") for x in ctx.elements
            )
            if not hidden:
                ctx.note(f"axis {axis.id!r} already shows labels")
                continue
            fallback, _ = similar_role_fallback(f"{e.role}.label", spec, exclude=())
            axis.labelStyle.pop("visible", None)
            axis.labelStyle.update(style_delta(fallback, DEFAULT_STYLES["axis.label"]))
            for o in axis.labels:
                o.style.pop("visible", None)
            axis.labels[:] = [o for o in axis.labels if o.style or o.segments is not None]
        elif k in ("label", "labels"):
            add_axis_labels(ctx, axis, v)
        elif k == "grid":
            if not v:
                continue
            if axis.grid:
                ctx.note(f"axis {axis.id!r} already has grid lines")
                continue
            axis.grid = True
            if not axis.gridStyle:
                styles = [a.gridStyle for a in spec.axes if a.grid and a is not axis]
                found = mimic_series(styles)
                if found is not None:
                    axis.gridStyle = found
        elif k == "title":
            axis.title = str(v)
        elif k == "domain":
            axis.domainStyle.pop("visible", None)
        else:
            raise UnsupportedAttribute(f"cannot add {k!r} to an axis")


def _add_to_layer(ctx: ActionContext, layer: Layer, option: dict) -> None:
    spec = ctx.spec
    for k, v in option.items():
        if k != "label":
            raise UnsupportedAttribute(f"cannot add {k!r} to a layer")
        if layer.label is not None:
            ctx.note(f"layer {layer.id!r} already has labels")
            continue
        spec_v = {"field": v} if isinstance(v, str) else dict(v)
        fname = spec_v.get("field")
        if fname is None:
            fname = next((enc.field for ch, enc in layer.encoding.items() if ch == "y"), None) or layer.fields()[0]
        if not spec.data.has_field(fname):
            raise UnsupportedAttribute(f"unknown field {fname!r}")
        if "style" in spec_v:
            style = dict(spec_v["style"])
        else:
            found, _ = similar_role_fallback("layer.mark.label", spec)
            style = style_delta(found, DEFAULT_STYLES["layer.mark.label"])
        layer.label = MarkLabelDef(field=fname, style=style)


def _add_to_text(ctx: ActionContext, owner: TextBlock | Annotation, option: dict) -> None:
    spec = ctx.spec
    for k, v in option.items():
        if k == "text":
            last = owner.segments[-1].style if owner.segments else {}
            for seg in _segments(v):
                if not seg.style:
                    seg.style = dict(last)
                owner.segments.append(seg)
        elif k == "items" and isinstance(owner, Annotation) and owner.anchor.type != "independent":
            dtype = spec.data.datatype(owner.anchor.field)
            for item in v if isinstance(v, list) else [v]:
                if any(same_value(i, item, dtype) for i in owner.anchor.items):
                    ctx.note(f"annotation {owner.id!r} already covers {item!r}")
                    continue
                owner.anchor.items.append(item)
        else:
            raise UnsupportedAttribute(f"cannot add {k!r} here")


def _as_list(value: Any) -> list:
    return value if isinstance(value, list) and (not value or isinstance(value[0], dict)) else [value]


def _add_to_view(ctx: ActionContext, option: dict) -> None:
    spec = ctx.spec
    for k, v in option.items():
        if k in TEXT_ROLES:
            for item in _as_list(v):
                add_text_block(ctx, k, item)
        elif k == "annotation":
            for item in _as_list(v):
                add_annotation(ctx, item)
        elif k == "axis":
            for item in _as_list(v):
                add_axis(ctx, item)
        elif k == "legend":
            for item in _as_list(v):
                add_legend(ctx, item)
        elif k == "interaction":
            for item in _as_list(v):
                kind = item.get("kind") if isinstance(item, dict) else item
                if kind not in INTERACTION_KINDS:
                    raise UnsupportedAttribute(f"unknown interaction {kind!r}")
                params = dict(item.get("params", {})) if isinstance(item, dict) else {}
                spec.interactions.append(InteractionDef(kind, params))
        else:
            raise UnsupportedAttribute(f"cannot add {k!r} to the view")
        ctx.refresh()


def add_text_block(ctx: ActionContext, role: str, value: Any) -> TextBlock:
    spec = ctx.spec
    item = value if isinstance(value, dict) else {"text": value}
    segments = _segments(item.get("text", ""))
    siblings = spec.texts_of(role)
    if "style" in item:
        style = dict(item["style"])
    else:
        style, _ = inherit_style(role, [t.style for t in siblings], spec)
        style = style_delta(style, DEFAULT_STYLES.get(role, {})) if not siblings else style
    same_shape = [t for t in siblings if len(t.segments) == len(segments)]
    if same_shape:
        picked = mimic_series([{"s": [s.style for s in t.segments]} for t in same_shape])["s"]
        for seg, s in zip(segments, picked):
            if not seg.style:
                seg.style = dict(s)
    block = TextBlock(role, len(siblings), segments, style, Placement())
    last = max((i for i, t in enumerate(spec.texts) if t.role == role), default=len(spec.texts) - 1)
    spec.texts.insert(last + 1, block)
    spec.reindex_texts()
    return block


def add_annotation(ctx: ActionContext, item: Any) -> Annotation:
    spec = ctx.spec
    if not isinstance(item, dict):
        item = {"text": item}
    anchor_raw = item.get("anchor", {"type": "independent"})
    anchor = Anchor(
        type=anchor_raw.get("type", "independent"),
        field=anchor_raw.get("field"),
        items=list(anchor_raw.get("items", [])),
        layer=anchor_raw.get("layer"),
    )
    if anchor.type != "independent" and not spec.data.has_field(anchor.field or ""):
        raise UnsupportedAttribute(f"annotation anchor field {anchor.field!r} does not exist")
    if "style" in item:
        style = dict(item["style"])
    else:
        found, principle = inherit_style("annotation", [a.style for a in spec.annotations], spec)
        style = found if principle == "P3" else style_delta(found, DEFAULT_STYLES["annotation"])
    ann = Annotation(
        id=item.get("id") or _unique_id(f"annotation{len(spec.annotations)}", [a.id for a in spec.annotations]),
        anchor=anchor,
        segments=_segments(item.get("text", "")),
        style=style,
        numbered=bool(item.get("numbered", False)),
    )
    if spec.annotation(ann.id) is not None:
        raise InvalidReplacement(f"annotation id {ann.id!r} is taken")
    size = annotation_size(ann)
    if "placement" in item:
        p = item["placement"]
        ann.placement = Placement(p.get("mode", "absolute"), p.get("x"), p.get("y"), p.get("dx", 0), p.get("dy", 0))
    elif item.get("external"):
        ann.placement = default_placement("externalized-annotation", ctx.frame, size)
    elif anchor.type == "independent":
        ann.placement = default_placement("non-data-annotation", ctx.frame, size)
    spec.annotations.append(ann)
    return ann


def _axis_style_source(spec: VisSpec, orient: str) -> AxisDef | None:
    same = [a for a in spec.axes if a.orient == orient]
    pool = same or [a for a in spec.axes if a.orient in ("horizontal", "vertical")] or spec.axes
    if not pool:
        return None
    styles = [{"l": a.labelStyle, "g": a.gridStyle, "d": a.domainStyle} for a in pool]
    picked = mimic_series(styles)
    return next(a for a, s in zip(pool, styles) if s == picked)


def add_axis(ctx: ActionContext, item: Any) -> AxisDef | None:
    spec = ctx.spec
    if isinstance(item, str):
        item = {"field": item}
    fname = item.get("field")
    orient = item.get("orient") or CHANNEL_ORIENT.get(item.get("channel", ""))
    if orient is None:
        for ch in POSITION_CHANNELS:
            if any(ch in l.encoding and l.encoding[ch].field == fname for l in spec.layers):
                orient = CHANNEL_ORIENT[ch]
                break
    if orient is None and fname is not None and fname in (spec.row, spec.column):
        orient = "row" if spec.row == fname else "column"
    if orient not in SIDES:
        raise UnsupportedAttribute(f"field {fname!r} is not on a position channel or facet")
    if fname is None:
        ch = {"horizontal": "x", "vertical": "y"}.get(orient)
        fname = next((l.encoding[ch].field for l in spec.layers if ch in l.encoding), None)
        if fname is None:
            raise UnsupportedAttribute(f"no field is encoded for a {orient} axis")
    taken = {a.side for a in spec.axes if a.orient == orient and a.field == fname}
    side = item.get("side") or next((s for s in SIDES[orient] if s not in taken), None)
    if side is None or side in taken:
        ctx.note(f"a {orient} axis for {fname!r} already exists")
        return None
    source = _axis_style_source(spec, orient)
    axis = AxisDef(
        id=_unique_id(default_axis_id(orient, fname, side), [a.id for a in spec.axes]),
        orient=orient,
        field=fname,
        side=side,
        title=item.get("title"),
    )
    if source is not None:
        axis.labelStyle = dict(source.labelStyle)
        axis.gridStyle = dict(source.gridStyle)
        axis.domainStyle = dict(source.domainStyle)
        axis.labelStyle.pop("visible", None)
        axis.domainStyle.pop("visible", None)
    if "values" in item:
        axis.values = list(item["values"])
    spec.axes.append(axis)
    return axis


def add_legend(ctx: ActionContext, item: Any) -> LegendDef | None:
    spec = ctx.spec
    if isinstance(item, str):
        item = {"channel": item}
    channel = item.get("channel")
    fname = item.get("field")
    hit = next(
        (l.encoding[channel] for l in spec.layers if channel in l.encoding and (fname is None or l.encoding[channel].field == fname)),
        None,
    )
    if hit is None or channel in POSITION_CHANNELS:
        raise UnsupportedAttribute(f"no layer encodes a field on {channel!r} to explain")
    if any(g.channel == channel and g.field == hit.field for g in spec.legends):
        ctx.note(f"a legend for {channel!r} already exists")
        return None
    styles = [{"l": g.labelStyle, "s": g.symbolStyle} for g in spec.legends]
    picked = mimic_series(styles) or {"l": {}, "s": {}}
    legend = LegendDef(
        id=_unique_id(f"{channel}:{hit.field}", [g.id for g in spec.legends]),
        channel=channel,
        field=hit.field,
        orient=item.get("orient", "right"),
        title=item.get("title"),
        labelStyle=dict(picked["l"]),
        symbolStyle=dict(picked["s"]),
    )
    spec.legends.append(legend)
    return legend


# --------------------------------------------------------------------------
# duplicate


def _copy_id(base: str, taken: list[str]) -> str:
    cand = f"{base}-copy"
    i = 2
    while cand in taken:
        cand = f"{base}-copy{i}"
        i += 1
    return cand


def op_duplicate(selection: Selection, option: Any, ctx: ActionContext) -> None:
    copies: list[Any] = []
    for e in list(selection):
        copies.append(_duplicate_one(ctx, e))
    ctx.refresh()
    if not option:
        return
    if not isinstance(option, dict):
        raise TypeMismatch("duplicate option must be an object")
    wanted = {id(c) for c in copies if c is not None}
    targets = [x for x in ctx.elements if id(x.owner) in wanted and x.parent in ("view", "data")]
    if not targets:
        return
    op_modify(Selection(targets), option, ctx)


def _duplicate_one(ctx: ActionContext, e: Element) -> Any:
    spec = ctx.spec
    owner = e.owner
    if isinstance(owner, AxisDef) and e.role in AXIS_ROLES:
        other = [s for s in SIDES[owner.orient] if s != owner.side]
        new_side = other[0] if other else owner.side
        if any(a.orient == owner.orient and a.field == owner.field and a.side == new_side for a in spec.axes):
            ctx.note(f"axis {owner.id!r} already has a twin on {new_side!r}")
            return None
        dup = copy.deepcopy(owner)
        dup.side = new_side
        if owner.id == default_axis_id(owner.orient, owner.field, owner.side):
            dup.id = default_axis_id(owner.orient, owner.field, new_side)
        else:
            dup.id = _copy_id(owner.id, [a.id for a in spec.axes])
        spec.axes.insert(spec.axes.index(owner) + 1, dup)
        return dup
    if isinstance(owner, TextBlock):
        dup = copy.deepcopy(owner)
        spec.texts.insert(spec.texts.index(owner) + 1, dup)
        spec.reindex_texts()
        return dup
    if isinstance(owner, Annotation):
        dup = copy.deepcopy(owner)
        dup.id = _copy_id(owner.id, [a.id for a in spec.annotations])
        spec.annotations.insert(spec.annotations.index(owner) + 1, dup)
        return dup
    if e.role == "layer":
        dup = copy.deepcopy(owner)
        dup.id = _copy_id(owner.id, [l.id for l in spec.layers])
        spec.layers.insert(spec.layers.index(owner) + 1, dup)
        return dup
    if e.role == "layer.mark":
        mark = e.key
        dup = copy.deepcopy(owner)
        dup.id = _copy_id(owner.id, [l.id for l in spec.layers])
        if mark.key:
            dup.filters.append(dict(mark.key))
        spec.layers.insert(spec.layers.index(owner) + 1, dup)
        return dup
    if e.role == "layer.mark.label":
        mark = e.key
        layer = owner
        if len(mark.key) == 1:
            (f, v), = mark.key.items()
        else:
            f = layer.label.field
            v = mark.common.get(f, mark.rows[0].get(f) if mark.rows else None)
        style = style_delta(mark_label_style(spec, layer, mark), {})
        ann = Annotation(
            id=_copy_id(f"{layer.id}-label", [a.id for a in spec.annotations]),
            anchor=Anchor("on-mark", f, [v], layer.id),
            segments=[Segment(mark_label_text(layer, mark), {})],
            style=style,
            placement=copy.deepcopy(layer.label.placement),
        )
        spec.annotations.append(ann)
        return ann
    if e.role == "data":
        dup = dict(owner)
        spec.data.rows.insert(spec.data.rows.index(owner) + 1, dup)
        return dup
    if e.role == "interaction":
        dup = copy.deepcopy(owner)
        spec.interactions.insert(spec.interactions.index(owner) + 1, dup)
        return dup
    raise UnsupportedAttribute(f"{e.role} cannot be duplicated")


# --------------------------------------------------------------------------
# remove


def op_remove(selection: Selection, option: Any, ctx: ActionContext) -> None:
    if option:
        if not isinstance(option, dict):
            raise TypeMismatch("remove option must be an object")
        _remove_parts(selection, option, ctx)
    else:
        remove_elements(list(selection), ctx)


def _identity_remove(items: list, doomed: list) -> None:
    ids = {id(x) for x in doomed}
    items[:] = [x for x in items if id(x) not in ids]


def remove_elements(elements: list[Element], ctx: ActionContext) -> None:
    """Delete elements and everything that hangs off them."""
    spec = ctx.spec
    rows: list[dict] = []
    layers: list[Layer] = []
    marks: dict[int, list[Element]] = {}
    touched_data = False
    for e in elements:
        role, owner = e.role, e.owner
        if role == "view":
            raise UnsupportedAttribute("the view itself cannot be removed")
        if role == "data":
            rows.append(owner)
        elif role == "layer":
            layers.append(owner)
        elif role == "layer.mark":
            marks.setdefault(id(owner), []).append(e)
        elif role == "layer.mark.label":
            all_marks = layer_marks(spec, owner)
            picked = [x for x in elements if x.role == "layer.mark.label" and x.owner is owner]
            if len(picked) >= len(all_marks):
                owner.label = None
            else:
                ctx.writer.write(e, "visible", False)
        elif role in ("view.row", "view.column"):
            setattr(spec, role[5:], None)
            spec.axes[:] = [a for a in spec.axes if a.orient != role[5:]]
        elif role == "view.layout":
            spec.row = spec.column = None
            spec.axes[:] = [a for a in spec.axes if a.orient not in ("row", "column")]
        elif isinstance(owner, AxisDef):
            part = role.partition(".")[2]
            if part == "":
                if owner in spec.axes:
                    spec.axes.remove(owner)
            elif part == "grid":
                owner.grid = False
            else:
                ctx.writer.write(e, "visible", False)
        elif isinstance(owner, LegendDef):
            if role == "legend":
                if owner in spec.legends:
                    spec.legends.remove(owner)
            else:
                ctx.writer.write(e, "visible", False)
        elif isinstance(owner, TextBlock):
            _identity_remove(spec.texts, [owner])
            spec.reindex_texts()
        elif isinstance(owner, Annotation):
            _identity_remove(spec.annotations, [owner])
        elif role == "interaction":
            _identity_remove(spec.interactions, [owner])
        else:
            raise UnsupportedAttribute(f"{role} cannot be removed")
    ctx.writer.flush()

    for mark_elems in marks.values():
        layer = mark_elems[0].owner
        if layer in layers:
            continue
        all_marks = layer_marks(spec, layer)
        chosen = {m.key.key_text for m in mark_elems}
        if len(chosen) >= len(all_marks):
            layers.append(layer)
            continue
        fields = mark_key_fields(spec, layer)
        if len(fields) == 1:
            f = fields[0]
            layer.filters.append({f: {"not": [m.key.key[f] for m in mark_elems]}})
        else:
            layer.filters.append([dict(m.key) for m in all_marks if m.key_text not in chosen])
        touched_data = True

    if rows:
        _identity_remove(spec.data.rows, rows)
        touched_data = True
    if layers:
        gone = {l.id for l in layers}
        _identity_remove(spec.layers, layers)
        spec.annotations[:] = [a for a in spec.annotations if a.anchor.layer not in gone]
        sync_guides(spec)
        touched_data = True
    if touched_data:
        prune_dangling(spec)


def _remove_parts(selection: Selection, option: dict, ctx: ActionContext) -> None:
    spec = ctx.spec
    for e in list(selection):
        attrs, children = split_option(e.role, option)
        for child_role, sub in children.items():
            kids = children_of(e, child_role, ctx.elements)
            if sub in (True, {}) or not sub:
                remove_elements(kids, ctx)
            else:
                _remove_parts(Selection(kids), sub, ctx)
        for k, v in attrs.items():
            if k == "channel":
                channels = v if isinstance(v, list) else [v]
                for layer in layers_of(Selection([e]), spec):
                    for ch in channels:
                        layer.encoding.pop(ch, None)
                sync_guides(spec)
            elif k == "items" and isinstance(e.owner, Annotation):
                ann = e.owner
                dtype = spec.data.datatype(ann.anchor.field)
                drop = v if isinstance(v, list) else [v]
                ann.anchor.items = [i for i in ann.anchor.items if not any(same_value(i, d, dtype) for d in drop)]
                if not ann.anchor.items and ann.anchor.type != "independent":
                    spec.annotations.remove(ann)
            elif k == "segments" and isinstance(e.owner, (TextBlock, Annotation)):
                idx = v.get("index") if isinstance(v, dict) else v
                segs = e.owner.segments
                if not isinstance(idx, int) or not 0 <= idx < len(segs):
                    raise TypeMismatch(f"no text line {idx!r} in {e.path}")
                del segs[idx]
            elif k == "values" and isinstance(e.owner, AxisDef) and e.role in AXIS_ROLES:
                axis = e.owner
                dtype = spec.data.datatype(axis.field)
                drop = v if isinstance(v, list) else [v]
                axis.values = [x for x in axis_values(spec, axis) if not any(same_value(x, d, dtype) for d in drop)]
            elif e.role == "layer" and k not in e.owner.encoding:
                for m in _marks_under(ctx, e):
                    ctx.writer.delete(m, k)
            else:
                ctx.writer.delete(e, k)
        ctx.writer.flush()
        ctx.refresh()


ACTION_HANDLERS: dict[str, Callable[[Selection, Any, ActionContext], None]] = {
    "modify": op_modify,
    "reposition": op_reposition,
    "transpose": op_transpose,
    "add": op_add,
    "duplicate": op_duplicate,
    "remove": op_remove,
    "replace": op_replace,
    "swap": op_swap,
}
