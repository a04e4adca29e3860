from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cicero.errors import SchemaError, UnknownRole
from cicero.grammar import (
    ACTIONS,
    By,
    Prod,
    cicero_from_dict,
    parse_cicero_spec,
    parse_specifier,
    relative,
    specificity_score,
    validate_cicero_spec,
)
from cicero.roles import CANONICAL_ROLES, SHORT_FORMS, normalize_role


def test_single_modify_rule():
    spec = parse_cicero_spec(
        json.dumps({"transformations": [{"specifier": {"role": "mark"}, "action": "modify", "option": {"color": "red"}}]})
    )
    assert len(spec.transformations) == 1
    r = spec.transformations[0]
    assert (r.specifier.role, r.action, r.option, r.important) == ("layer.mark", "modify", {"color": "red"}, False)


def test_empty_rule_list():
    assert parse_cicero_spec('{"transformations": []}').transformations == []


def test_add_without_option_cites_rule():
    with pytest.raises(SchemaError) as err:
        cicero_from_dict({"transformations": [{"specifier": {"role": "view"}, "action": "add"}]})
    assert "rule 0" in str(err.value)


@pytest.mark.parametrize(
    "rule",
    [
        {"specifier": {}, "action": "modify", "option": {}},
        {"specifier": {"role": "mark"}, "action": "recolor", "option": {}},
        {"specifier": {"role": "mark"}, "action": "modify", "option": {"color": "red", "to": {"channel": "x"}}},
        {"specifier": {"role": "mark"}, "action": "modify", "option": {"color": {"prod": 2}}},
        {"specifier": {"role": "mark"}, "action": "modify", "option": {"size": 1}, "important": "yes"},
    ],
)
def test_rule_shape_errors(rule):
    with pytest.raises(SchemaError):
        cicero_from_dict({"transformations": [rule]})


def test_all_rule_errors_reported():
    with pytest.raises(SchemaError) as err:
        cicero_from_dict(
            {"transformations": [{"specifier": {}, "action": "x"}, {"specifier": {"role": "view"}, "action": "add"}]}
        )
    assert len(err.value.issues) >= 3


def test_unknown_role_parses_but_is_reported():
    spec = cicero_from_dict({"transformations": [{"specifier": {"role": "bogus"}, "action": "remove"}]})
    assert validate_cicero_spec(spec) == ["rule 0: unknown role 'bogus'"]


def test_relative_wrappers():
    assert relative({"by": -30}) == By(-30)
    assert relative({"prod": 0.8}) == Prod(0.8)
    assert relative(5) is None


@pytest.mark.parametrize(
    "short, canonical",
    [("mark", "layer.mark"), ("row", "view.row"), ("layer.mark", "layer.mark"), ("column", "view.column")],
)
def test_normalize_role(short, canonical):
    assert normalize_role(short) == canonical


def test_normalize_unknown():
    with pytest.raises(UnknownRole):
        normalize_role("marks")


def _spec(d: dict):
    issues: list[str] = []
    s = parse_specifier(d, "s", issues)
    assert not issues
    return s


@pytest.mark.parametrize(
    "specifier, score",
    [
        ({"role": "mark"}, 0),
        ({"role": "mark", "data": {"category": "Apparel"}}, 1),
        ({"role": "axis.label", "field": "price", "values": [30, 50]}, 2),
        ({"role": "mark", "data": {"a": 1, "b": 2}, "color": "red"}, 3),
    ],
)
def test_specificity(specifier, score):
    assert specificity_score(_spec(specifier)) == score


# --- properties -------------------------------------------------------------

roles = st.sampled_from(sorted(CANONICAL_ROLES | set(SHORT_FORMS)))

specifier_slots = st.fixed_dictionaries(
    {},
    optional={
        "mark": st.sampled_from(["bar", "line", "point"]),
        "index": st.one_of(st.integers(0, 5), st.sampled_from(["first", "last", "even", "odd"])),
        "id": st.text("abc", min_size=1, max_size=3),
        "field": st.sampled_from(["price", "year"]),
        "values": st.lists(st.integers(0, 100), max_size=3),
        "datatype": st.sampled_from(["nominal", "quantitative"]),
        "channel": st.sampled_from(["x", "y", "color"]),
        "data": st.dictionaries(st.sampled_from(["a", "b", "c"]), st.integers(0, 9), min_size=1, max_size=3),
        "color": st.sampled_from(["red", "blue"]),
        "fontSize": st.integers(8, 20),
    },
)


@given(roles)
def test_normalize_is_idempotent(role):
    once = normalize_role(role)
    assert normalize_role(once) == once


@settings(max_examples=200)
@given(roles, specifier_slots, st.sampled_from(["mark", "index", "id", "field", "values", "datatype", "channel", "color"]))
def test_specificity_monotone(role, slots, extra):
    base = {"role": role, **slots}
    grown = dict(base)
    if extra not in grown:
        grown[extra] = {"index": 0, "values": [1], "mark": "bar", "datatype": "ordinal", "channel": "size", "color": "red"}.get(extra, "x")
    assert specificity_score(_spec(grown)) >= specificity_score(_spec(base))


@settings(max_examples=200)
@given(st.lists(st.tuples(roles, st.sampled_from(["modify", "remove", "transpose"]), st.booleans()), max_size=8))
def test_rule_order_preserved(entries):
    doc = {
        "transformations": [
            {"specifier": {"role": r}, "action": a, **({"option": {"color": "red"}} if a == "modify" else {}), "important": imp}
            for r, a, imp in entries
        ]
    }
    spec = cicero_from_dict(doc)
    assert [(r.specifier.role, r.action, r.important) for r in spec.transformations] == [
        (normalize_role(r), a, imp) for r, a, imp in entries
    ]
    again = cicero_from_dict({"transformations": [r.to_dict() for r in spec.transformations]})
    assert [r.to_dict() for r in again.transformations] == [r.to_dict() for r in spec.transformations]


def test_action_vocabulary():
    assert set(ACTIONS) == {"modify", "reposition", "transpose", "add", "duplicate", "remove", "replace", "swap"}
