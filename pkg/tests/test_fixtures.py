from __future__ import annotations

import pytest

from cicero.fixtures import run_fixture
from cicero.grammar import ACTIONS
from helpers import cases, run, text

PRINCIPLES = [f"P{i}" for i in range(1, 11)]


@pytest.mark.parametrize("case", cases(), ids=lambda c: c.name)
def test_golden(case):
    report = run_fixture(case)
    assert report.passed, report.error or report.diff


@pytest.mark.parametrize("case", cases(), ids=lambda c: c.name)
def test_no_rules_is_identity(case):
    spec = case.load_source()
    before = text(spec)
    assert text(run(spec).spec) == before


@pytest.mark.parametrize("case", cases(), ids=lambda c: c.name)
def test_readme_declares_anchors_and_principles(case):
    assert case.anchors
    assert case.principles and set(case.principles) <= set(PRINCIPLES)


def test_every_action_in_two_fixtures():
    counts = {a: sum(a in c.actions for c in cases()) for a in ACTIONS}
    assert all(n >= 2 for n in counts.values()), counts


def test_every_principle_covered():
    covered = {p for c in cases() for p in c.principles}
    assert covered >= set(PRINCIPLES)
