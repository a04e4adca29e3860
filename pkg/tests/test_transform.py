from __future__ import annotations

import copy

import pytest

from cicero.diff import diff_specs
from cicero.errors import CompileError, InvalidReplacement, NoPairRelation, TypeMismatch
from cicero.layout import resolve_layout
from cicero.query import resolve
from cicero.transform import compile_spec, prune_dangling
from cicero.vis import canonical_serialize, enumerate_elements, validate_vis_spec, vis_from_dict
from cicero.vis.model import DEFAULT_STYLES
from helpers import bar_doc, bar_spec, case, rule, run, text
from oracles import scaled


def facet_doc() -> dict:
    rows = [("health", "2019", 40), ("health", "2020", 55), ("food", "2019", 30), ("food", "2020", 35)]
    return {
        "width": 400,
        "height": 300,
        "data": {
            "schema": [
                {"field": "sector", "type": "nominal"},
                {"field": "year", "type": "ordinal"},
                {"field": "amount", "type": "quantitative"},
            ],
            "rows": [{"sector": s, "year": y, "amount": a} for s, y, a in rows],
        },
        "column": "sector",
        "layers": [
            {"id": "bars", "mark": "bar",
             "encoding": {"x": {"field": "year"}, "y": {"field": "amount"}, "color": {"field": "sector"}}}
        ],
        "axes": [
            {"orient": "horizontal", "field": "year"},
            {"orient": "vertical", "field": "amount"},
            {"orient": "column", "field": "sector", "labelStyle": {"fontWeight": "bold"}},
        ],
    }


def bubble_doc() -> dict:
    pts = [("A", 12, 71, 30), ("B", 35, 78, 60), ("C", 5, 62, 90)]
    return {
        "width": 400,
        "height": 300,
        "data": {
            "schema": [
                {"field": "country", "type": "nominal"},
                {"field": "gdp", "type": "quantitative"},
                {"field": "life", "type": "quantitative"},
                {"field": "pop", "type": "quantitative"},
            ],
            "rows": [{"country": c, "gdp": g, "life": l, "pop": p} for c, g, l, p in pts],
        },
        "layers": [
            {"id": "b", "mark": "circle",
             "encoding": {"x": {"field": "gdp"}, "y": {"field": "life"}, "color": {"field": "country"}, "size": {"field": "pop"}},
             "style": {"size": 80}}
        ],
        "legends": [{"channel": "color", "field": "country"}, {"channel": "size", "field": "pop"}],
    }


# --- modify -------------------------------------------------------------------


def test_modify_size_by():
    out = run(bubble_doc(), rule({"role": "mark"}, "modify", {"size": {"by": -30}})).spec
    assert out.layers[0].style["size"] == 50


def test_modify_font_prod_on_all_text():
    out = run(bar_doc(), rule({"role": "text"}, "modify", {"fontSize": {"prod": 0.8}})).spec
    assert out.texts[0].style["fontSize"] == 12
    assert out.axes[0].labelStyle["fontSize"] == float(scaled(11, 0.8))


def test_modify_width():
    assert run(bar_doc(), rule({"role": "view"}, "modify", {"width": 375})).spec.width == 375


def test_relative_on_text_value_fails():
    with pytest.raises(CompileError) as err:
        run(bar_doc(), rule({"role": "mark"}, "modify", {"opacity": 0.5}), rule({"role": "title"}, "modify", {"fontSize": "large"}),
            rule({"role": "title"}, "modify", {"fontSize": {"by": 1}}))
    assert err.value.rule_index == 2
    assert isinstance(err.value.cause, TypeMismatch)


def test_compile_does_not_touch_source():
    src = bar_spec()
    before = canonical_serialize(src)
    compile_spec(src, vis_rules(rule({"role": "view"}, "modify", {"width": 100})))
    assert canonical_serialize(src) == before


def vis_rules(*ts):
    from cicero.grammar import cicero_from_dict

    return cicero_from_dict({"transformations": list(ts)})


# --- reposition ---------------------------------------------------------------


def note_doc() -> dict:
    doc = bar_doc()
    doc["annotations"] = [
        {"id": "n1", "anchor": {"type": "independent"}, "segments": [{"text": "first note"}],
         "placement": {"mode": "absolute", "x": 300, "y": 20}},
        {"id": "n2", "anchor": {"type": "independent"}, "segments": [{"text": "second note"}],
         "placement": {"mode": "absolute", "x": 300, "y": 60}},
    ]
    return doc


def test_reposition_relative_offsets():
    out = run(note_doc(), rule({"role": "annotation", "id": "n1"}, "reposition", {"dx": {"by": -10}, "dy": {"by": -40}})).spec
    p = out.annotation("n1").placement
    assert (p.dx, p.dy) == (-10, -40)


def test_externalized_notes_stack_below():
    out = run(note_doc(), rule({"role": "annotation"}, "reposition", {"external": True})).spec
    a, b = out.annotation("n1").placement, out.annotation("n2").placement
    assert a.mode == b.mode == "external"
    assert out.height <= a.y < b.y


def test_external_is_idempotent():
    once = run(note_doc(), rule({"role": "annotation"}, "reposition", {"external": True})).spec
    twice = run(once, rule({"role": "annotation"}, "reposition", {"external": True})).spec
    assert text(once) == text(twice)


# --- transpose ----------------------------------------------------------------


def test_transpose_equals_swap():
    t = run(bar_doc(), rule({"role": "view"}, "transpose")).spec
    s = run(bar_doc(), rule({"role": "layer"}, "swap", {"from": {"channel": "x"}, "to": {"channel": "y"}})).spec
    assert text(t) == text(s)


def test_transpose_twice_restores_channels():
    once = run(bar_doc(), rule({"role": "view"}, "transpose")).spec
    twice = run(once, rule({"role": "view"}, "transpose")).spec
    assert {ch: e.field for ch, e in twice.layers[0].encoding.items()} == {"x": "category", "y": "sales"}


def test_serial_label_sits_above_bar():
    out = run(bar_doc(labels=True), rule({"role": "mark.label"}, "transpose", {"serial": True})).spec
    frame = resolve_layout(out)
    mark = frame.box_of('layers/bars/marks/category="Electronics"')
    label = frame.box_of('layers/bars/labels/category="Electronics"')
    assert label.y1 <= mark.y


def test_transpose_without_partner():
    with pytest.raises(CompileError) as err:
        run(bar_doc(), rule({"role": "data"}, "transpose"))
    assert isinstance(err.value.cause, NoPairRelation)


# --- add ----------------------------------------------------------------------


def test_add_values_fills_ticks():
    out = run(bar_doc(values=(50, 150, 250)), rule({"role": "vAxis"}, "add", {"values": [100, 200, 300]})).spec
    axis = out.axes[1]
    assert axis.values == [50, 100, 150, 200, 250, 300]
    styles = {e.props["value"]: e.style for e in enumerate_elements(out) if e.role == "vAxis.label"}
    assert all(s == styles[50] for s in styles.values())


def test_add_values_get_labels():
    out = run(bar_doc(values=(0, 100)), rule({"role": "vAxis"}, "add", {"values": [50, 60]})).spec
    labels = [e.props["value"] for e in enumerate_elements(out) if e.role == "vAxis.label"]
    assert labels == [0, 50, 60, 100]


def test_add_no_values_is_noop():
    src = bar_spec()
    assert text(run(src, rule({"role": "vAxis"}, "add", {"values": []})).spec) == text(src)


def test_added_values_copy_grid_style():
    doc = bar_doc(values=(0, 200))
    doc["axes"][1].update(grid=True, gridStyle={"stroke": "#abcdef"})
    out = run(doc, rule({"role": "vAxis"}, "add", {"values": [100]})).spec
    grid = next(e for e in enumerate_elements(out) if e.role == "vAxis.grid")
    assert grid.props["values"] == [0, 100, 200]
    assert grid.style["stroke"] == "#abcdef"


def test_single_element_series_is_copied():
    doc = bar_doc(values=(100,))
    doc["axes"][1]["labelStyle"] = {"fontSize": 9, "color": "#123456"}
    out = run(doc, rule({"role": "vAxis"}, "add", {"values": [200]})).spec
    styles = [e.style for e in enumerate_elements(out) if e.role == "vAxis.label"]
    assert styles[0] == styles[1]


def test_new_label_mimics_same_line_count():
    doc = bar_doc()
    doc["axes"][0]["labels"] = [
        {"value": "Apparel", "segments": [{"text": "Apparel", "style": {"fontWeight": "bold"}}, {"text": "$1", "style": {"fontSize": 9}}]},
    ]
    doc["axes"][0]["labelStyle"]["color"] = "#777777"
    out = run(doc, rule({"role": "hAxis"}, "add", {"labels": [{"value": "Toys", "text": ["Toys", "$2"]}]})).spec
    toys = next(o for o in out.axes[0].labels if o.value == "Toys")
    assert [s.style for s in toys.segments] == [{"fontWeight": "bold"}, {"fontSize": 9}]


def test_hidden_vertical_labels_borrow_horizontal_style():
    doc = bar_doc()
    doc["axes"][1]["labelStyle"] = {"visible": False}
    doc["axes"][0]["labelStyle"] = {"fontSize": 12, "fontStyle": "italic"}
    out = run(doc, rule({"role": "vAxis"}, "add", {"label": True})).spec
    style = next(e.style for e in enumerate_elements(out) if e.role == "vAxis.label")
    assert style.get("fontStyle") == "italic" and style.get("fontSize") == 12


def test_axis_labels_without_any_sibling_use_defaults():
    doc = bar_doc()
    doc["axes"] = [{"orient": "vertical", "field": "sales", "labelStyle": {"visible": False}}]
    out = run(doc, rule({"role": "vAxis"}, "add", {"label": True})).spec
    style = next(e.style for e in enumerate_elements(out) if e.role == "vAxis.label")
    assert style == DEFAULT_STYLES["axis.label"]


# --- duplicate ----------------------------------------------------------------


def test_duplicate_title():
    out = run(bar_doc(), rule({"role": "title"}, "duplicate")).spec
    assert [t.index for t in out.texts_of("title")] == [0, 1]


def test_duplicate_option_is_a_modify_shortcut():
    a = run(bar_doc(), rule({"role": "title"}, "duplicate", {"fontSize": 9})).spec
    b = run(bar_doc(), rule({"role": "title"}, "duplicate"), rule({"role": "title", "index": 1}, "modify", {"fontSize": 9})).spec
    assert text(a) == text(b)


def test_duplicate_axis_then_reposition():
    a = run(bar_doc(), rule({"role": "vAxis"}, "duplicate", {"dx": 4})).spec
    b = run(bar_doc(), rule({"role": "vAxis"}, "duplicate"), rule({"role": "vAxis", "index": 1}, "modify", {"dx": 4})).spec
    assert text(a) == text(b)
    assert sorted(x.side for x in a.axes if x.orient == "vertical") == ["left", "right"]


def test_duplicate_mark_label_copies_text_and_style():
    out = run(bar_doc(labels=True), rule({"role": "mark.label", "data": {"category": "Books"}}, "duplicate")).spec
    elements = enumerate_elements(out)
    label = next(e for e in elements if e.path == 'layers/bars/labels/category="Books"')
    copy_ = next(e for e in elements if e.role == "annotation")
    assert copy_.props["text"] == label.props["text"]
    assert copy_.style == label.style


# --- remove -------------------------------------------------------------------


def test_remove_color_channel_keeps_marks():
    before = bubble_doc()
    out = run(before, rule({"role": "mark", "channel": "color"}, "remove", {"channel": "color"})).spec
    assert "color" not in out.layers[0].encoding
    assert len([e for e in enumerate_elements(out) if e.role == "layer.mark"]) == 3
    assert [g.channel for g in out.legends] == ["size"]


def test_remove_nothing_is_identity():
    src = bar_spec()
    assert text(run(src, rule({"role": "mark", "data": {"category": "Nope"}}, "remove")).spec) == text(src)


def test_remove_some_marks_filters_layer():
    out = run(bar_doc(), rule({"role": "mark", "data": {"category": "Books"}}, "remove")).spec
    keys = [e.path for e in enumerate_elements(out) if e.role == "layer.mark"]
    assert len(keys) == 4 and not any("Books" in k for k in keys)


def test_removal_leaves_nothing_dangling():
    c = case("bond-yields")
    out = compile_spec(c.load_source(), c.load_rules()).spec
    probe = copy.deepcopy(out)
    assert prune_dangling(probe) == []
    assert text(probe) == text(out)
    assert validate_vis_spec(out) == []


# --- replace and swap ---------------------------------------------------------


def test_replace_color_by_size():
    doc = bubble_doc()
    del doc["layers"][0]["encoding"]["size"]
    doc["legends"] = [{"channel": "color", "field": "country"}]
    out = run(doc, rule({"role": "mark"}, "replace", {"from": {"channel": "color"}, "to": {"channel": "size"}})).spec
    assert out.layers[0].encoding["size"].field == "country" and "color" not in out.layers[0].encoding
    assert [(g.channel, g.field) for g in out.legends] == [("size", "country")]


def test_column_axis_to_color_legend():
    out = run(facet_doc(), rule({"role": "axis", "field": "sector"}, "replace", {"to": {"role": "legend", "channel": "color"}})).spec
    assert not any(a.orient == "column" for a in out.axes)
    assert [(g.channel, g.field) for g in out.legends] == [("color", "sector")]


def test_replace_with_itself():
    src = vis_from_dict(bubble_doc())
    out = run(src, rule({"role": "mark"}, "replace", {"from": {"channel": "size"}, "to": {"channel": "size"}})).spec
    assert text(out) == text(src)


def test_replace_into_occupied_channel():
    with pytest.raises(CompileError) as err:
        run(bubble_doc(), rule({"role": "mark"}, "replace", {"from": {"channel": "color"}, "to": {"channel": "size"}}))
    assert isinstance(err.value.cause, InvalidReplacement)


def test_swap_color_and_size():
    out = run(bubble_doc(), rule({"role": "layer"}, "swap", [{"channel": "color"}, {"channel": "size"}])).spec
    enc = out.layers[0].encoding
    assert (enc["color"].field, enc["size"].field) == ("pop", "country")
    assert sorted((g.channel, g.field) for g in out.legends) == [("color", "pop"), ("size", "country")]


def test_swap_twice_is_identity():
    src = vis_from_dict(bubble_doc())
    r = rule({"role": "layer"}, "swap", [{"channel": "color"}, {"channel": "size"}])
    assert text(run(src, r, r).spec) == text(src)


def test_facet_move_keeps_label_weight():
    out = run(facet_doc(), rule({"role": "view"}, "replace", {"from": {"channel": "column"}, "to": {"channel": "row"}})).spec
    assert (out.row, out.column) == ("sector", None)
    axis = next(a for a in out.axes if a.field == "sector")
    assert axis.orient == "row" and axis.labelStyle == {"fontWeight": "bold"}


# --- cascade ------------------------------------------------------------------


def _mark_colors(spec) -> dict[str, str]:
    return {e.path.split("=")[-1].strip('"'): e.style["color"] for e in enumerate_elements(spec) if e.role == "layer.mark"}


generic = rule({"role": "mark"}, "modify", {"color": "gray"})
specific = rule({"role": "mark", "data": {"category": "Apparel"}}, "modify", {"color": "red"})


@pytest.mark.parametrize("order", [(generic, specific), (specific, generic)], ids=["generic-first", "specific-first"])
def test_specific_beats_generic(order):
    colors = _mark_colors(run(bar_doc(), *order).spec)
    assert colors.pop("Apparel") == "red"
    assert set(colors.values()) == {"gray"}


def test_important_generic_beats_specific():
    important = dict(generic, important=True)
    for order in [(important, specific), (specific, important)]:
        assert set(_mark_colors(run(bar_doc(), *order).spec).values()) == {"gray"}


def test_equal_rank_last_wins():
    out = run(bar_doc(), rule({"role": "title"}, "modify", {"fontSize": 20}), rule({"role": "title"}, "modify", {"fontSize": 9})).spec
    assert out.texts[0].style["fontSize"] == 9


def test_trace_records_suppression():
    res = run(bar_doc(), specific, generic)
    assert res.trace[1]["suppressed"] == [{"path": 'layers/bars/marks/category="Apparel"', "attr": "color", "value": "gray"}] or \
        len(res.trace[1]["suppressed"]) == 1


# --- downstream effects -------------------------------------------------------


def test_independent_note_survives_data_removal():
    dependent = compile_spec(case("bond-yields").load_source(), case("bond-yields").load_rules()).spec
    independent = compile_spec(case("bond-yields-independent").load_source(), case("bond-yields-independent").load_rules()).spec
    assert dependent.annotation("forecast-2010") is None
    assert independent.annotation("forecast-2010") is not None


def test_resize_keeps_absolute_text_inside():
    out = run(note_doc(), rule({"role": "view"}, "modify", {"width": 200})).spec
    for ann in out.annotations:
        assert 0 <= ann.placement.x <= 200


def test_diff_of_unchanged_fixture_is_empty():
    src = bar_spec()
    assert diff_specs(src, copy.deepcopy(src)) == {"added": [], "removed": [], "changed": []}


def test_selection_is_resolved_per_rule():
    res = run(bar_doc(), rule({"role": "title"}, "duplicate"), rule({"role": "title"}, "modify", {"fontSize": 9}))
    assert res.trace[1]["selection"] == ["texts/title/0", "texts/title/1"]
    assert len(resolve({"role": "title"}, res.spec)) == 2
