"""Golden-case corpus: ``fixtures/<case>/{source.vis.json, rules.cicero.json, golden.vis.json, README}``."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .diff import diff_specs, is_empty
from .grammar import CiceroSpec, parse_cicero_spec
from .transform import compile_spec
from .vis import VisSpec, canonical_serialize, parse_vis_spec

DEFAULT_ROOT = Path(__file__).resolve().parents[2] / "fixtures"

_LIST_LINE = re.compile(r"^(anchors|principles):\s*(.*)$", re.MULTILINE)


@dataclass
class FixtureCase:
    name: str
    source: Path
    rules: Path
    golden: Path
    anchors: list[str] = field(default_factory=list)
    principles: list[str] = field(default_factory=list)

    def load_source(self) -> VisSpec:
        return parse_vis_spec(self.source.read_text(encoding="utf-8"))

    def load_rules(self) -> CiceroSpec:
        return parse_cicero_spec(self.rules.read_text(encoding="utf-8"))

    @property
    def actions(self) -> list[str]:
        raw = json.loads(self.rules.read_text(encoding="utf-8"))
        return sorted({r["action"] for r in raw.get("transformations", [])})


@dataclass
class FixtureReport:
    name: str
    passed: bool
    diff: dict[str, Any] | None = None
    error: str | None = None


def _read_readme(path: Path) -> tuple[list[str], list[str]]:
    if not path.exists():
        return [], []
    found = {k: v for k, v in _LIST_LINE.findall(path.read_text(encoding="utf-8"))}

    def split(s: str, sep: str) -> list[str]:
        return [x.strip() for x in s.split(sep) if x.strip()]

    return split(found.get("anchors", ""), ";"), split(found.get("principles", ""), ",")


def load_case(directory: Path) -> FixtureCase:
    directory = Path(directory)
    anchors, principles = _read_readme(directory / "README.md")
    return FixtureCase(
        name=directory.name,
        source=directory / "source.vis.json",
        rules=directory / "rules.cicero.json",
        golden=directory / "golden.vis.json",
        anchors=anchors,
        principles=principles,
    )


def load_cases(root: Path | str | None = None) -> list[FixtureCase]:
    root = Path(root) if root is not None else DEFAULT_ROOT
    return [load_case(d) for d in sorted(root.iterdir()) if (d / "source.vis.json").exists()]


def compile_case(case: FixtureCase) -> str:
    return canonical_serialize(compile_spec(case.load_source(), case.load_rules()).spec)


def run_fixture(case: FixtureCase) -> FixtureReport:
    """Pass iff the compiled source serializes byte-identically to the golden file."""
    try:
        got = compile_case(case)
    except Exception as exc:  # surfaced in the report, not swallowed
        return FixtureReport(case.name, False, error=f"{type(exc).__name__}: {exc}")
    want = case.golden.read_text(encoding="utf-8")
    if got == want:
        return FixtureReport(case.name, True)
    d = diff_specs(parse_vis_spec(want), parse_vis_spec(got))
    return FixtureReport(case.name, False, diff=d, error=None if not is_empty(d) else "formatting differs")
