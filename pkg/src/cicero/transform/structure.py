"""Structural edits that ripple through the spec.

Moving an encoding between channels drags its guides along; removing data
or marks removes whatever was attached to them; resizing the view moves
positioned text back inside it.  Static styles of surviving elements are
never touched here.
"""

from __future__ import annotations

from typing import Any, Iterable

from ..errors import InvalidReplacement
from ..layout import annotation_size, clamp_into_view, text_size
from ..vis.elements import axis_values, key_matches, layer_marks, legend_values, same_value
from ..vis.model import (
    DEFAULT_STYLES,
    POSITION_CHANNELS,
    SIDES,
    AxisDef,
    EncodingDef,
    Layer,
    LegendDef,
    ScaleDef,
    VisSpec,
    axis_domain,
    default_axis_id,
    layer_rows,
    value_in_domain,
)

TMP_CHANNEL = "__tmp__"
CHANNEL_ORIENT = {"x": "horizontal", "y": "vertical", TMP_CHANNEL: TMP_CHANNEL}
ORIENT_CHANNEL = {v: k for k, v in CHANNEL_ORIENT.items()}


def scale_type_for(channel: str, datatype: str | None) -> str:
    if datatype == "quantitative":
        return "linear"
    if datatype == "temporal":
        return "time"
    return "band" if channel in POSITION_CHANNELS else "ordinal"


def moved_encoding(enc: EncodingDef, channel: str, datatype: str | None) -> EncodingDef:
    """``enc`` re-expressed on ``channel``: domain kept, range re-derived."""
    stype = enc.scale.type
    if stype is not None and channel != TMP_CHANNEL:
        stype = scale_type_for(channel, datatype)
    return EncodingDef(
        field=enc.field,
        scale=ScaleDef(type=stype, domain=list(enc.scale.domain) if enc.scale.domain is not None else None),
        operations=[dict(op) for op in enc.operations],
    )


# --------------------------------------------------------------------------
# guides


def _side_index(orient: str, side: str) -> int:
    sides = SIDES.get(orient)
    if sides is None:
        return 0 if side in ("bottom", "left", "0") else 1
    return sides.index(side) if side in sides else 0


def _side_for(orient: str, index: int) -> str:
    sides = SIDES.get(orient)
    return sides[index] if sides is not None else str(index)


def _is_default_id(axis: AxisDef) -> bool:
    if axis.orient not in SIDES:
        return axis.id == f"{axis.orient}:{axis.field}:{axis.side}"
    return axis.id == default_axis_id(axis.orient, axis.field, axis.side)


def reorient_axis(axis: AxisDef, orient: str) -> None:
    """Point ``axis`` at another orientation, keeping its side index."""
    regen = _is_default_id(axis)
    index = _side_index(axis.orient, axis.side)
    axis.orient = orient
    axis.side = _side_for(orient, index)
    if regen:
        axis.id = (
            default_axis_id(orient, axis.field, axis.side)
            if orient in SIDES
            else f"{orient}:{axis.field}:{axis.side}"
        )


def axis_to_legend(spec: VisSpec, axis: AxisDef, channel: str) -> LegendDef:
    legend = LegendDef(
        id=_unique_id(f"{channel}:{axis.field}", [g.id for g in spec.legends]),
        channel=channel,
        field=axis.field,
        title=axis.title,
        labelStyle=dict(axis.labelStyle),
        labels=[_copy_override(o) for o in axis.labels],
    )
    return legend


def legend_to_axis(spec: VisSpec, legend: LegendDef, orient: str) -> AxisDef:
    side = SIDES[orient][0] if orient in SIDES else "0"
    axis = AxisDef(
        id=default_axis_id(orient, legend.field, side) if orient in SIDES else f"{orient}:{legend.field}:{side}",
        orient=orient,
        field=legend.field,
        side=side,
        labels=[_copy_override(o) for o in legend.labels],
        labelStyle=dict(legend.labelStyle),
        title=legend.title,
    )
    axis.id = _unique_id(axis.id, [a.id for a in spec.axes])
    return axis


def _copy_override(o: Any) -> Any:
    import copy

    return copy.deepcopy(o)


def _unique_id(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    i = 2
    while f"{base}-{i}" in taken:
        i += 1
    return f"{base}-{i}"


def _guides_on(spec: VisSpec, channel: str) -> list[Any]:
    out: list[Any] = []
    if channel in CHANNEL_ORIENT:
        out += [a for a in spec.axes if a.orient == CHANNEL_ORIENT[channel]]
    else:
        out += [g for g in spec.legends if g.channel == channel]
    return out


def move_channels(spec: VisSpec, layers: list[Layer], mapping: dict[str, str]) -> None:
    """Move encodings of ``layers`` according to ``mapping`` (old -> new), atomically.

    A guide follows its encoding when every layer feeding it is moved; guides
    shared with unselected layers stay put.
    """
    mapping = {a: b for a, b in mapping.items() if a != b}
    if not mapping:
        return
    selected = {id(l) for l in layers}
    for layer in layers:
        for a, b in mapping.items():
            if a in layer.encoding and b in layer.encoding and b not in mapping:
                raise InvalidReplacement(f"layer {layer.id!r} already encodes {b!r}")

    moves: list[tuple[Any, str]] = []
    for a, b in mapping.items():
        for guide in _guides_on(spec, a):
            feeders = [l for l in spec.layers if a in l.encoding and l.encoding[a].field == guide.field]
            if feeders and all(id(l) in selected for l in feeders):
                moves.append((guide, b))

    for layer in layers:
        taken = {a: layer.encoding.pop(a) for a in mapping if a in layer.encoding}
        for a, enc in taken.items():
            b = mapping[a]
            layer.encoding[b] = moved_encoding(enc, b, spec.data.datatype(enc.field))
        layer.encoding = dict(sorted(layer.encoding.items()))

    for guide, target in moves:
        _move_guide(spec, guide, target)


def _move_guide(spec: VisSpec, guide: Any, channel: str) -> None:
    if isinstance(guide, AxisDef):
        if channel in CHANNEL_ORIENT:
            reorient_axis(guide, CHANNEL_ORIENT[channel])
        else:
            legend = axis_to_legend(spec, guide, channel)
            i = spec.axes.index(guide)
            del spec.axes[i]
            if not any(g.channel == channel and g.field == guide.field for g in spec.legends):
                spec.legends.append(legend)
    else:
        if channel in CHANNEL_ORIENT:
            orient = CHANNEL_ORIENT[channel]
            spec.legends.remove(guide)
            if not any(a.orient == orient and a.field == guide.field for a in spec.axes):
                spec.axes.append(legend_to_axis(spec, guide, orient))
        else:
            if guide.id == f"{guide.channel}:{guide.field}":
                guide.id = f"{channel}:{guide.field}"
            guide.channel = channel


def swap_facets(spec: VisSpec) -> None:
    """Exchange the row and column trellis fields; their axes follow."""
    spec.row, spec.column = spec.column, spec.row
    for axis in spec.axes:
        if axis.orient in ("row", "column"):
            reorient_axis(axis, "column" if axis.orient == "row" else "row")


def sync_guides(spec: VisSpec) -> None:
    """Re-home or drop guides whose field is no longer encoded where they point."""
    keep: list[AxisDef] = []
    for axis in spec.axes:
        if axis.orient in ("row", "column"):
            if getattr(spec, axis.orient) == axis.field:
                keep.append(axis)
            continue
        channel = ORIENT_CHANNEL.get(axis.orient, axis.orient)
        if any(l.encoding.get(channel) is not None and l.encoding[channel].field == axis.field for l in spec.layers):
            keep.append(axis)
            continue
        other = {"x": "y", "y": "x"}.get(channel)
        if other and any(
            l.encoding.get(other) is not None and l.encoding[other].field == axis.field for l in spec.layers
        ):
            target = CHANNEL_ORIENT[other]
            if not any(a.orient == target and a.field == axis.field for a in keep + spec.axes if a is not axis):
                reorient_axis(axis, target)
                keep.append(axis)
    spec.axes[:] = keep

    legends: list[LegendDef] = []
    for g in spec.legends:
        if any(l.encoding.get(g.channel) is not None and l.encoding[g.channel].field == g.field for l in spec.layers):
            legends.append(g)
            continue
        for l in spec.layers:
            hit = next(
                (ch for ch, enc in l.encoding.items() if ch not in POSITION_CHANNELS and enc.field == g.field),
                None,
            )
            if hit is not None and not any(x.channel == hit and x.field == g.field for x in legends):
                g.channel = hit
                legends.append(g)
                break
    spec.legends[:] = legends


# --------------------------------------------------------------------------
# removal propagation


def _item_drawn(spec: VisSpec, ann: Any, item: Any) -> bool:
    f = ann.anchor.field
    dtype = spec.data.datatype(f)
    if ann.anchor.type == "on-axis":
        return any(
            a.field == f and any(same_value(v, item, dtype) for v in axis_values(spec, a)) for a in spec.axes
        ) or any(same_value(r.get(f), item, dtype) for r in spec.data.rows)
    layers = [spec.layer(ann.anchor.layer)] if ann.anchor.layer is not None else spec.layers
    return any(
        any(same_value(r.get(f), item, dtype) for r in layer_rows(spec, layer)) for layer in layers if layer is not None
    )


def prune_dangling(spec: VisSpec) -> list[str]:
    """Drop attachments to data that is no longer drawn.  Returns removed paths."""
    removed: list[str] = []
    survivors = []
    for ann in spec.annotations:
        if ann.anchor.type == "independent":
            survivors.append(ann)
            continue
        if ann.anchor.layer is not None and spec.layer(ann.anchor.layer) is None:
            removed.append(f"annotations/{ann.id}")
            continue
        items = [i for i in ann.anchor.items if _item_drawn(spec, ann, i)]
        if not items:
            removed.append(f"annotations/{ann.id}")
            continue
        ann.anchor.items = items
        survivors.append(ann)
    spec.annotations[:] = survivors

    dtypes = spec.data.datatypes
    for layer in spec.layers:
        marks = layer_marks(spec, layer)
        layer.overrides[:] = [o for o in layer.overrides if any(key_matches(o.key, m.common, dtypes) for m in marks)]
        if layer.label is not None:
            layer.label.overrides[:] = [
                o for o in layer.label.overrides if any(key_matches(o.key, m.common, dtypes) for m in marks)
            ]
    settle_axis_values(spec)
    for axis in spec.axes:
        dtype = spec.data.datatype(axis.field)
        values = axis_values(spec, axis)
        axis.labels[:] = [o for o in axis.labels if any(same_value(v, o.value, dtype) for v in values)]
    for g in spec.legends:
        dtype = spec.data.datatype(g.field)
        values = legend_values(spec, g)
        g.labels[:] = [o for o in g.labels if any(same_value(v, o.value, dtype) for v in values)]
        g.symbols[:] = [o for o in g.symbols if any(same_value(v, o.value, dtype) for v in values)]
    return removed


def settle_axis_values(spec: VisSpec) -> None:
    """Explicit tick values follow the scale domain."""
    for axis in spec.axes:
        if axis.values is None or spec.data.datatype(axis.field) is None:
            continue
        dom, continuous = axis_domain(spec, axis)
        if dom is None:
            continue
        dtype = spec.data.datatype(axis.field)
        axis.values = [v for v in axis.values if value_in_domain(v, dom, dtype, continuous)]


def after_resize(spec: VisSpec, old_width: float, old_height: float) -> None:
    """Keep positioned text inside a resized view; stack external text below it."""
    dh = spec.height - old_height
    for ann in spec.annotations:
        p = ann.placement
        if p.mode == "external":
            if p.y is not None and dh:
                p.y = p.y + dh
        else:
            clamp_into_view(p, annotation_size(ann), spec.width, spec.height)
    for t in spec.texts:
        p = t.position
        size = text_size(t.segments, {**DEFAULT_STYLES.get(t.role, {}), **t.style})
        if p.mode == "external":
            if p.y is not None and dh:
                p.y = p.y + dh
        elif p.mode in ("absolute", "internal"):
            clamp_into_view(p, size, spec.width, spec.height)
