"""Approximate chart geometry, used only to pick default placements.

Coordinates are pixels with the origin at the top-left of the plot area,
which spans ``(0, 0, width, height)``.  Text is measured with a fixed
heuristic: each character is ``0.6 * fontSize`` wide and each line is
``1.2 * fontSize`` tall.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import NoEmptySpace, UnresolvableScale
from .predicate import normalize_temporal
from .vis.elements import (
    Mark,
    axis_values,
    display,
    field_values,
    layer_marks,
    mark_label_style,
    mark_label_text,
    same_value,
    value_token,
)
from .vis.model import DEFAULT_FONT_SIZE, DEFAULT_STYLES, Annotation, Layer, Placement, Segment, VisSpec, strip_px

CHAR_WIDTH = 0.6
LINE_HEIGHT = 1.2
PARALLEL_GAP = 4
EXTERNAL_GAP = 8
STACK_GAP = 4
DEFAULT_RESOLUTION = 5
CENTER_MARKS = ("area", "rect")


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    @property
    def x1(self) -> float:
        return self.x + self.w

    @property
    def y1(self) -> float:
        return self.y + self.h

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2, self.y + self.h / 2)

    def intersects(self, other: Rect) -> bool:
        """Positive-area overlap."""
        return self.x < other.x1 and other.x < self.x1 and self.y < other.y1 and other.y < self.y1

    def union(self, other: Rect) -> Rect:
        x, y = min(self.x, other.x), min(self.y, other.y)
        return Rect(x, y, max(self.x1, other.x1) - x, max(self.y1, other.y1) - y)

    def shifted(self, dx: float, dy: float) -> Rect:
        return Rect(self.x + dx, self.y + dy, self.w, self.h)


def bounding(rects: Iterable[Rect]) -> Rect | None:
    out = None
    for r in rects:
        out = r if out is None else out.union(r)
    return out


@dataclass
class Box:
    path: str
    rect: Rect
    external: bool = False


@dataclass
class LayoutFrame:
    plot: Rect
    boxes: list[Box] = field(default_factory=list)
    resolution: float = DEFAULT_RESOLUTION
    external_top: float = 0.0
    mark_types: dict[str, str] = field(default_factory=dict)

    def boxes_of(self, prefix: str) -> list[Rect]:
        return [b.rect for b in self.boxes if b.path == prefix or b.path.startswith(prefix + "/")]

    def box_of(self, path: str) -> Rect | None:
        return bounding(b.rect for b in self.boxes if b.path == path)

    def next_external_y(self) -> float:
        bottom = self.external_top
        for b in self.boxes:
            if b.external and b.rect.y >= self.plot.y1:
                bottom = max(bottom, b.rect.y1 + STACK_GAP)
        return bottom

    def occupied(self, exclude: Iterable[str] = ()) -> list[Rect]:
        skip = set(exclude)
        return [b.rect for b in self.boxes if not b.external and b.path not in skip]


# --------------------------------------------------------------------------
# text metrics


def font_size(style: dict, default: float = DEFAULT_FONT_SIZE) -> float:
    v = strip_px(style.get("fontSize", default))
    return v if isinstance(v, (int, float)) and not isinstance(v, bool) else default


def text_size(segments: Sequence[Segment | str], style: dict | None = None, default_fs: float = DEFAULT_FONT_SIZE) -> tuple[float, float]:
    """(width, height) of stacked text lines."""
    fs_block = font_size(style or {}, default_fs)
    w = h = 0.0
    for seg in segments:
        text, sstyle = (seg, {}) if isinstance(seg, str) else (seg.text, seg.style)
        fs = font_size(sstyle, fs_block)
        w = max(w, len(text) * CHAR_WIDTH * fs)
        h += LINE_HEIGHT * fs
    return w, h


# --------------------------------------------------------------------------
# scales


@dataclass
class Scale:
    kind: str  # linear | band | point
    domain: list
    r0: float
    r1: float
    datatype: str | None = None

    @property
    def bandwidth(self) -> float:
        if self.kind == "linear" or not self.domain:
            return 0.0
        return abs(self.r1 - self.r0) / len(self.domain)

    def _index(self, value: Any) -> int | None:
        for i, d in enumerate(self.domain):
            if same_value(value, d, self.datatype):
                return i
        return None

    def __call__(self, value: Any) -> float | None:
        if value is None:
            return None
        if self.kind == "linear":
            lo, hi = self.domain
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                return None
            if hi == lo:
                return (self.r0 + self.r1) / 2
            return self.r0 + (value - lo) / (hi - lo) * (self.r1 - self.r0)
        i = self._index(value)
        if i is None:
            return None
        step = (self.r1 - self.r0) / len(self.domain)
        return self.r0 + (i + 0.5) * step

    def band_start(self, value: Any) -> float | None:
        i = self._index(value)
        if i is None:
            return None
        step = (self.r1 - self.r0) / len(self.domain)
        return min(self.r0 + i * step, self.r0 + (i + 1) * step)


def _aggregate(fn: str, values: list) -> Any:
    nums = [v for v in values if isinstance(v, (int, float)) and not isinstance(v, bool)]
    if fn == "count":
        return len(values)
    if not nums:
        return None
    if fn == "sum":
        return sum(nums)
    if fn == "mean":
        return statistics.fmean(nums)
    if fn == "min":
        return min(nums)
    return max(nums)


def _aggregate_of(enc) -> str | None:
    for op in enc.operations:
        if "aggregate" in op:
            return op["aggregate"]
    return None


def build_scale(spec: VisSpec, layer: Layer, channel: str, r0: float, r1: float) -> Scale:
    enc = layer.encoding[channel]
    dtype = spec.data.datatype(enc.field)
    stype = enc.scale.type
    dom = enc.scale.domain
    agg = _aggregate_of(enc)
    continuous = stype in ("linear", "time") or (stype is None and dtype == "quantitative") or agg in ("sum", "mean", "count")
    if dtype == "temporal" and stype is None:
        vals = [v for v in field_values(spec, enc.field)]
        continuous = all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals) and bool(vals)
    if continuous:
        if dom is None:
            if agg is not None:
                totals = []
                for m in layer_marks(spec, layer):
                    v = _aggregate(agg, [r.get(enc.field) for r in m.rows])
                    if v is not None:
                        totals.append(v)
                nums = totals
            else:
                nums = [v for v in field_values(spec, enc.field) if isinstance(v, (int, float)) and not isinstance(v, bool)]
            if not nums:
                raise UnresolvableScale(f"layer {layer.id!r} {channel}: no numeric values for {enc.field!r}")
            lo, hi = min(nums), max(nums)
            if layer.mark in ("bar", "area"):
                lo, hi = min(lo, 0), max(hi, 0)
            dom = [lo, hi]
        if len(dom) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in dom):
            raise UnresolvableScale(f"layer {layer.id!r} {channel}: linear scale needs a numeric domain, got {dom!r}")
        return Scale("linear", list(dom), r0, r1, dtype)
    if dom is None:
        dom = field_values(spec, enc.field)
        if dtype == "temporal":
            dom = sorted(dom, key=normalize_temporal)
    if not dom:
        raise UnresolvableScale(f"layer {layer.id!r} {channel}: empty categorical domain for {enc.field!r}")
    return Scale("point" if dtype == "temporal" else "band", list(dom), r0, r1, dtype)


# --------------------------------------------------------------------------
# frame construction


def _cells(spec: VisSpec) -> tuple[list, list, float, float]:
    rows = field_values(spec, spec.row) if spec.row else [None]
    cols = field_values(spec, spec.column) if spec.column else [None]
    return rows, cols, spec.width / max(len(cols), 1), spec.height / max(len(rows), 1)


def _cell_origin(spec: VisSpec, common: dict) -> tuple[float, float, float, float]:
    rows, cols, cw, ch = _cells(spec)
    ri = ci = 0
    if spec.row:
        ri = next((i for i, v in enumerate(rows) if v == common.get(spec.row)), 0)
    if spec.column:
        ci = next((i for i, v in enumerate(cols) if v == common.get(spec.column)), 0)
    return ci * cw, ri * ch, cw, ch


def _point_value(layer: Layer, channel: str, rows: list[dict]) -> list:
    enc = layer.encoding[channel]
    agg = _aggregate_of(enc)
    if agg is not None:
        return [_aggregate(agg, [r.get(enc.field) for r in rows])]
    return [r.get(enc.field) for r in rows]


def mark_rects(spec: VisSpec, layer: Layer, mark: Mark) -> list[Rect]:
    """Bounding boxes of one mark (several for line and area segments)."""
    ox, oy, cw, ch = _cell_origin(spec, mark.common)
    xs = build_scale(spec, layer, "x", ox, ox + cw) if "x" in layer.encoding else None
    ys = build_scale(spec, layer, "y", oy + ch, oy) if "y" in layer.encoding else None
    style = {**layer.style}
    size = strip_px(style.get("size", 64))
    side = math.sqrt(size) if isinstance(size, (int, float)) and size > 0 else 8.0
    rows = mark.rows
    agg_any = any(_aggregate_of(e) for e in layer.encoding.values())
    if agg_any:
        rows = [rows[0]] if rows else []
        xv = _point_value(layer, "x", mark.rows) if xs else [None]
        yv = _point_value(layer, "y", mark.rows) if ys else [None]
    else:
        xv = [r.get(layer.encoding["x"].field) for r in rows] if xs else [None] * len(rows)
        yv = [r.get(layer.encoding["y"].field) for r in rows] if ys else [None] * len(rows)
    pts = []
    for x, y in zip(xv, yv):
        px = xs(x) if xs else ox + cw / 2
        py = ys(y) if ys else oy + ch / 2
        if px is None or py is None:
            continue
        pts.append((px, py, x, y))
    if not pts:
        return []

    if layer.mark in ("line", "area"):
        sw = strip_px(style.get("strokeWidth", 2))
        sw = sw if isinstance(sw, (int, float)) else 2
        pts.sort(key=lambda p: p[0])
        if ys is not None and ys.kind == "linear":
            lo, hi = ys.domain
            base = ys(min(max(0, lo), hi))
        else:
            base = oy + ch
        out = []
        pairs = list(zip(pts, pts[1:])) or [(pts[0], pts[0])]
        for a, b in pairs:
            x0, x1 = min(a[0], b[0]), max(a[0], b[0])
            y0, y1 = min(a[1], b[1]), max(a[1], b[1])
            if layer.mark == "area":
                y0, y1 = min(y0, base), max(y1, base)
            out.append(Rect(x0 - sw / 2, y0 - sw / 2, x1 - x0 + sw, y1 - y0 + sw))
        return out

    out = []
    for px, py, x, y in pts:
        if layer.mark in ("bar", "rect"):
            if xs is not None and xs.kind != "linear" and (ys is None or ys.kind == "linear"):
                bw = xs.bandwidth * 0.8
                if ys is not None and layer.mark == "bar":
                    lo, hi = ys.domain
                    y0 = ys(min(max(0, lo), hi))
                    out.append(Rect(px - bw / 2, min(py, y0), bw, abs(y0 - py)))
                else:
                    bh = ys.bandwidth * 0.8 if ys is not None and ys.kind != "linear" else ch
                    out.append(Rect(px - bw / 2, py - bh / 2, bw, bh))
            elif ys is not None and ys.kind != "linear" and (xs is None or xs.kind == "linear"):
                bh = ys.bandwidth * 0.8
                if xs is not None and layer.mark == "bar":
                    lo, hi = xs.domain
                    x0 = xs(min(max(0, lo), hi))
                    out.append(Rect(min(px, x0), py - bh / 2, abs(px - x0), bh))
                else:
                    out.append(Rect(ox, py - bh / 2, cw, bh))
            else:
                bw = xs.bandwidth * 0.8 if xs is not None and xs.kind != "linear" else side
                bh = ys.bandwidth * 0.8 if ys is not None and ys.kind != "linear" else side
                out.append(Rect(px - bw / 2, py - bh / 2, bw, bh))
        elif layer.mark == "text" and "text" in layer.encoding:
            t = display(mark.common.get(layer.encoding["text"].field, ""))
            w, h = text_size([t], style, DEFAULT_FONT_SIZE)
            out.append(Rect(px - w / 2, py - h / 2, w, h))
        else:
            out.append(Rect(px - side / 2, py - side / 2, side, side))
    return out


def anchored_position(mark_type: str, anchor: Rect, size: tuple[float, float], mode: str = "auto") -> tuple[float, float]:
    """Top-left corner of a label of ``size`` attached to ``anchor``.

    ``auto`` uses the mark default: centered for area-like marks, at the
    bottom-center otherwise.  ``serial`` stacks the label on top of the
    mark; ``parallel`` puts it to the left.
    """
    w, h = size
    cx, cy = anchor.center
    if mode == "serial":
        return cx - w / 2, anchor.y - h
    if mode == "parallel":
        return anchor.x - PARALLEL_GAP - w, cy - h / 2
    if mark_type in CENTER_MARKS:
        return cx - w / 2, cy - h / 2
    return cx - w / 2, anchor.y1 - h


def _clamp(v: float, lo: float, hi: float) -> float:
    return max(lo, min(v, hi)) if hi >= lo else lo


def _round(v: float) -> float:
    r = round(v, 2)
    return int(r) if float(r).is_integer() else r


def resolve_layout(spec: VisSpec, resolution: float = DEFAULT_RESOLUTION) -> LayoutFrame:
    """Boxes for marks, labels, annotations and text, plus the plot area."""
    if resolution <= 0:
        raise ValueError("grid resolution must be > 0")
    plot = Rect(0, 0, spec.width, spec.height)
    frame = LayoutFrame(plot=plot, resolution=resolution)
    mark_boxes: dict[str, list[Rect]] = {}

    for layer in spec.layers:
        frame.mark_types[layer.id] = layer.mark
        marks = layer_marks(spec, layer)
        for mark in marks:
            path = f"layers/{layer.id}/marks/{mark.key_text}"
            rects = mark_rects(spec, layer, mark)
            mark_boxes[path] = rects
            for r in rects:
                frame.boxes.append(Box(path, r))
        if layer.label is not None:
            p = layer.label.placement
            for mark in marks:
                anchor = bounding(mark_boxes[f"layers/{layer.id}/marks/{mark.key_text}"])
                if anchor is None:
                    continue
                style = mark_label_style(spec, layer, mark)
                if style.get("visible", True) is False:
                    continue
                size = text_size([mark_label_text(layer, mark)], style)
                if p.x is not None and p.y is not None:
                    x, y = p.x, p.y
                else:
                    x, y = anchored_position(layer.mark, anchor, size, p.mode)
                frame.boxes.append(Box(f"layers/{layer.id}/labels/{mark.key_text}", Rect(x + p.dx, y + p.dy, *size)))

    label_band = 0.0
    for axis in spec.axes:
        fs = font_size({**DEFAULT_STYLES["axis.label"], **axis.labelStyle})
        mode = axis.labelPlacement.mode
        for v in axis_values(spec, axis):
            size = text_size([display(v)], {"fontSize": fs})
            path = f"axes/{axis.id}/label/{value_token(v)}"
            if mode in ("serial", "parallel"):
                anchors = [
                    r
                    for mpath, rects in mark_boxes.items()
                    for r in rects
                    if _mark_has_value(mpath, axis.field, v)
                ]
                anchor = bounding(anchors)
                if anchor is not None:
                    x, y = anchored_position("bar", anchor, size, mode)
                    frame.boxes.append(Box(path, Rect(x, y, *size)))
                    continue
            if axis.orient == "horizontal" and axis.side == "bottom":
                frame.boxes.append(Box(path, Rect(0, plot.y1, *size), external=True))
                label_band = max(label_band, size[1] + STACK_GAP)
            elif axis.orient == "vertical" and axis.side == "left":
                frame.boxes.append(Box(path, Rect(-size[0] - STACK_GAP, 0, *size), external=True))

    frame.external_top = plot.y1 + label_band + EXTERNAL_GAP

    for t in spec.texts:
        style = {**DEFAULT_STYLES.get(t.role, {}), **t.style}
        size = text_size(t.segments, style)
        p = t.position
        if p.mode != "external" and p.x is not None and p.y is not None:
            frame.boxes.append(Box(f"texts/{t.role}/{t.index}", Rect(p.x + p.dx, p.y + p.dy, *size)))
        elif p.mode == "external" and p.y is not None:
            frame.boxes.append(Box(f"texts/{t.role}/{t.index}", Rect(p.x or 0, p.y, *size), external=True))
        else:
            frame.boxes.append(Box(f"texts/{t.role}/{t.index}", Rect(0, -size[1], *size), external=True))

    for ann in spec.annotations:
        rect, external = annotation_rect(spec, frame, ann, mark_boxes)
        if rect is not None:
            frame.boxes.append(Box(f"annotations/{ann.id}", rect, external=external))
    return frame


def _mark_has_value(mark_path: str, field_name: str, value: Any) -> bool:
    tail = mark_path.rsplit("/", 1)[-1]
    return f"{field_name}={value_token(value)}" in tail.split("&")


def annotation_size(ann: Annotation) -> tuple[float, float]:
    return text_size(ann.segments, {**DEFAULT_STYLES["annotation"], **ann.style})


def annotation_anchor(spec: VisSpec, frame: LayoutFrame, ann: Annotation, mark_boxes: dict | None = None) -> tuple[Rect | None, str]:
    """Box of the data an annotation is attached to, and the mark type there."""
    if ann.anchor.type == "independent" or not ann.anchor.items:
        return None, "point"
    field_name = ann.anchor.field
    if ann.anchor.type == "on-axis":
        rects = [
            b.rect
            for b in frame.boxes
            if "/label/" in b.path
            and b.path.startswith("axes/")
            and any(b.path.endswith("/label/" + value_token(i)) for i in ann.anchor.items)
        ]
        return bounding(rects), "text"
    rects = []
    mtype = "point"
    for layer in spec.layers:
        if ann.anchor.layer is not None and layer.id != ann.anchor.layer:
            continue
        for mark in layer_marks(spec, layer):
            if any(
                any(same_value(r.get(field_name), item, spec.data.datatype(field_name)) for item in ann.anchor.items)
                for r in mark.rows
            ):
                path = f"layers/{layer.id}/marks/{mark.key_text}"
                rs = (mark_boxes or {}).get(path) or frame.boxes_of(path)
                if rs:
                    rects.extend(rs)
                    mtype = layer.mark
        if rects and ann.anchor.layer is None:
            break
    return bounding(rects), mtype


def annotation_rect(spec: VisSpec, frame: LayoutFrame, ann: Annotation, mark_boxes: dict | None = None) -> tuple[Rect | None, bool]:
    size = annotation_size(ann)
    p = ann.placement
    if p.mode == "external":
        x = p.x if p.x is not None else 0
        y = p.y if p.y is not None else frame.next_external_y()
        return Rect(x + p.dx, y + p.dy, *size), True
    if p.x is not None and p.y is not None:
        return Rect(p.x + p.dx, p.y + p.dy, *size), False
    anchor, mtype = annotation_anchor(spec, frame, ann, mark_boxes)
    if anchor is not None:
        x, y = anchored_position(mtype, anchor, size, p.mode if p.mode in ("serial", "parallel") else "auto")
        return Rect(x + p.dx, y + p.dy, *size), False
    return Rect(p.dx, p.dy, *size), False


# --------------------------------------------------------------------------
# empty space


def occupancy_grid(frame: LayoutFrame, exclude: Iterable[str] = ()) -> list[list[bool]]:
    """``grid[row][col]`` is True when any box overlaps that cell."""
    res = frame.resolution
    plot = frame.plot
    ncols = max(1, math.ceil(plot.w / res - 1e-9))
    nrows = max(1, math.ceil(plot.h / res - 1e-9))
    grid = [[False] * ncols for _ in range(nrows)]
    for r in frame.occupied(exclude):
        x0, x1 = r.x - plot.x, r.x1 - plot.x
        y0, y1 = r.y - plot.y, r.y1 - plot.y
        if x1 - x0 <= 0:
            x1 = x0 + 1e-9
        if y1 - y0 <= 0:
            y1 = y0 + 1e-9
        c0 = max(0, math.floor(x0 / res))
        c1 = min(ncols - 1, math.ceil(x1 / res) - 1)
        r0 = max(0, math.floor(y0 / res))
        r1 = min(nrows - 1, math.ceil(y1 / res) - 1)
        for row in range(r0, r1 + 1):
            line = grid[row]
            for col in range(c0, c1 + 1):
                line[col] = True
    return grid


def largest_empty_cells(grid: Sequence[Sequence[bool]]) -> tuple[int, int, int, int] | None:
    """(top, left, height, width) in cells of the largest all-empty rectangle.

    Ties go to the topmost, then leftmost origin.  Every maximal rectangle
    is visited once per bottom row by the histogram sweep, so the tie-break
    is exact.
    """
    if not grid or not grid[0]:
        return None
    ncols = len(grid[0])
    heights = [0] * ncols
    best: tuple[int, int, int] | None = None  # (-area, top, left)
    best_rect = None
    for row, line in enumerate(grid):
        for c in range(ncols):
            heights[c] = 0 if line[c] else heights[c] + 1
        stack: list[int] = []
        for c in range(ncols + 1):
            h = heights[c] if c < ncols else 0
            while stack and heights[stack[-1]] >= h:
                height = heights[stack.pop()]
                left = stack[-1] + 1 if stack else 0
                if height > 0:
                    cand = (-(height * (c - left)), row - height + 1, left)
                    if best is None or cand < best:
                        best = cand
                        best_rect = (row - height + 1, left, height, c - left)
            if c < ncols:
                stack.append(c)
    return best_rect


def largest_empty_rect(frame: LayoutFrame, exclude: Iterable[str] = ()) -> Rect:
    """Largest box-free rectangle of the plot area, on the occupancy grid."""
    cells = largest_empty_cells(occupancy_grid(frame, exclude))
    if cells is None:
        raise NoEmptySpace("the plot area is fully occupied at this grid resolution")
    top, left, h, w = cells
    res = frame.resolution
    plot = frame.plot
    x0 = plot.x + left * res
    y0 = plot.y + top * res
    x1 = min(plot.x1, x0 + w * res)
    y1 = min(plot.y1, y0 + h * res)
    return Rect(x0, y0, x1 - x0, y1 - y0)


def grid_dump(frame: LayoutFrame, exclude: Iterable[str] = ()) -> str:
    """Plain PBM (P1) text of the occupancy grid; 1 marks an occupied cell."""
    grid = occupancy_grid(frame, exclude)
    lines = ["P1", f"{len(grid[0])} {len(grid)}"]
    lines += [" ".join("1" if c else "0" for c in row) for row in grid]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# default placements

PLACEMENT_KINDS = ("externalized-annotation", "mark-label", "non-data-annotation")


def default_placement(
    kind: str,
    frame: LayoutFrame,
    size: tuple[float, float],
    anchor: Rect | None = None,
    mark_type: str = "point",
    exclude: Iterable[str] = (),
) -> Placement:
    """Where a new or moved text element goes when no coordinates are given.

    externalized-annotation: below the chart, under any external element
    already there.  mark-label: at the mark (center or bottom-center).
    non-data-annotation: centered in the largest empty rectangle.
    """
    w, h = size
    plot = frame.plot
    if kind == "externalized-annotation":
        y = frame.next_external_y()
        frame.boxes.append(Box("<pending>", Rect(0, y, w, h), external=True))
        return Placement(mode="external", x=0, y=_round(y))
    if kind == "mark-label":
        if anchor is None:
            raise ValueError("mark-label placement needs an anchor box")
        x, y = anchored_position(mark_type, anchor, size)
    elif kind == "non-data-annotation":
        cx, cy = largest_empty_rect(frame, exclude).center
        x, y = cx - w / 2, cy - h / 2
    else:
        raise ValueError(f"unknown placement kind {kind!r}")
    x = _clamp(x, plot.x, plot.x1 - w)
    y = _clamp(y, plot.y, plot.y1 - h)
    return Placement(mode="internal", x=_round(x), y=_round(y))


def clamp_into_view(p: Placement, size: tuple[float, float], width: float, height: float) -> None:
    """Keep absolute coordinates inside the view after a resize."""
    w, h = size
    if p.x is not None:
        p.x = _round(_clamp(p.x, 0, width - w)) if w <= width else 0
    if p.y is not None:
        p.y = _round(_clamp(p.y, 0, height - h)) if h <= height else 0


__all__ = [
    "Box",
    "LayoutFrame",
    "Rect",
    "Scale",
    "clamp_into_view",
    "default_placement",
    "grid_dump",
    "largest_empty_cells",
    "largest_empty_rect",
    "occupancy_grid",
    "resolve_layout",
    "text_size",
]
