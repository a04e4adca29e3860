from __future__ import annotations

import pytest

from cicero.errors import NoSuchSubordinate, UnknownRole
from cicero.predicate import eval_data_predicate
from cicero.query import match_index, resolve, resolve_option_scope
from cicero.vis import vis_from_dict
from helpers import bar_doc


def priced_doc() -> dict:
    return {
        "width": 300,
        "height": 200,
        "data": {
            "schema": [
                {"field": "item", "type": "nominal"},
                {"field": "price", "type": "quantitative"},
                {"field": "kind", "type": "nominal"},
                {"field": "stock", "type": "quantitative"},
            ],
            "rows": [
                {"item": "a", "price": 30, "kind": "x", "stock": 5},
                {"item": "b", "price": 40, "kind": "y", "stock": 8},
                {"item": "c", "price": 50, "kind": "x", "stock": 2},
            ],
        },
        "layers": [
            {"id": "pts", "mark": "point",
             "encoding": {"x": {"field": "item"}, "y": {"field": "price"}, "color": {"field": "kind"}, "size": {"field": "stock"}},
             "style": {"color": "black"}},
            {"id": "red", "mark": "line", "encoding": {"x": {"field": "item"}, "y": {"field": "price"}}, "style": {"color": "red"}},
            {"id": "blue", "mark": "line", "encoding": {"x": {"field": "item"}, "y": {"field": "price"}}, "style": {"color": "blue"}},
        ],
        "axes": [
            {"orient": "horizontal", "field": "item"},
            {"orient": "vertical", "field": "price", "values": [30, 40, 50]},
        ],
        "legends": [{"channel": "color", "field": "kind"}, {"channel": "size", "field": "stock"}],
        "texts": [
            {"role": "title", "segments": [{"text": "First"}]},
            {"role": "title", "segments": [{"text": "Second"}]},
        ],
    }


@pytest.fixture
def spec():
    return vis_from_dict(priced_doc())


def test_axis_by_field(spec):
    assert resolve({"role": "axis", "field": "price"}, spec).paths == ["axes/vertical:price"]


def test_legend_by_datatype(spec):
    assert resolve({"role": "legend", "datatype": "nominal"}, spec).paths == ["legends/color:kind"]


def test_marks_by_static_color(spec):
    sel = resolve({"role": "mark", "color": "red"}, spec)
    assert sel and all(p.startswith("layers/red/marks/") for p in sel.paths)


def test_color_literal_never_matches_encoding(spec):
    assert not any(p.startswith("layers/pts/") for p in resolve({"role": "mark", "color": "kind"}, spec).paths)
    assert all(p.startswith("layers/pts/") for p in resolve({"role": "mark", "channel": "color"}, spec).paths)


def test_second_title(spec):
    sel = resolve({"role": "title", "index": 1}, spec)
    assert [e.owner.segments[0].text for e in sel] == ["Second"]


def test_match_index_keywords():
    assert match_index(["only"], "first") == match_index(["only"], "last") == ["only"]
    assert match_index(list("abcde"), "odd") == ["b", "d"]
    assert match_index(list("abcde"), "even") == ["a", "c", "e"]


def test_index_out_of_range_is_empty(spec):
    assert not resolve({"role": "title", "index": 7}, spec)


@pytest.mark.parametrize(
    "pred, row, expected",
    [
        ({"price": 30}, {"price": 30, "item": "a"}, True),
        ([{"year": {"lte": 2011}}, {"forecasted_year": {"lte": 2011}}], {"year": 2013, "forecasted_year": 2010}, True),
        ({"name": {"startsWith": "Forecast"}}, {"name": "Actual"}, False),
        ({"price": {"gte": 30, "lt": 40}}, {"price": 35}, True),
        ({"price": {"oneOf": [1, 2]}}, {"price": 3}, False),
        ({"missing": 1}, {"price": 1}, False),
    ],
)
def test_data_predicate(pred, row, expected):
    assert eval_data_predicate(pred, row) is expected


def test_axis_values_query(spec):
    assert len(resolve({"role": "vAxis.label", "values": [30, 50]}, spec)) == 2
    assert not resolve({"role": "vAxis.label", "values": []}, spec)


def test_odd_ticks():
    doc = bar_doc(values=(0, 50, 100, 150, 200, 250))
    sel = resolve({"role": "vAxis.label", "values": "odd"}, vis_from_dict(doc))
    assert [e.props["value"] for e in sel] == [50, 150, 250]


def test_unknown_role_raises(spec):
    with pytest.raises(UnknownRole):
        resolve({"role": "marks"}, spec)


def test_no_legend_is_empty():
    assert not resolve({"role": "legend"}, vis_from_dict(bar_doc()))


def test_option_scope_reaches_parts(spec):
    sel = resolve({"role": "axis"}, spec)
    scoped = resolve_option_scope({"label": {"color": "blue"}, "domain": {"color": "red"}}, sel, spec)
    roles = {(e.role.split(".")[-1], attrs["color"]) for e, attrs in scoped}
    assert roles == {("label", "blue"), ("domain", "red")}


def test_option_scope_plain_attribute(spec):
    sel = resolve({"role": "mark"}, spec)
    scoped = resolve_option_scope({"color": "red"}, sel, spec)
    assert [e.path for e, _ in scoped] == sel.paths


def test_title_has_no_mark(spec):
    sel = resolve({"role": "title"}, spec)
    with pytest.raises(NoSuchSubordinate):
        resolve_option_scope({"mark": {"color": "red"}}, sel, spec)


def test_adding_a_predicate_term_never_grows(spec):
    wide = resolve({"role": "mark", "data": {"kind": "x"}}, spec)
    narrow = resolve({"role": "mark", "data": {"kind": "x", "price": {"gt": 30}}}, spec)
    assert set(narrow.paths) <= set(wide.paths)


def test_layer_order_does_not_change_selections():
    doc = priced_doc()
    flipped = priced_doc()
    flipped["layers"] = list(reversed(flipped["layers"]))
    a, b = vis_from_dict(doc), vis_from_dict(flipped)
    for s in ({"role": "mark", "color": "red"}, {"role": "mark", "data": {"price": 40}}, {"role": "axis.label"}):
        assert sorted(resolve(s, a).paths) == sorted(resolve(s, b).paths)
