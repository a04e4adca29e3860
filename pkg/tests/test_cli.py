from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from cicero.cli import main
from helpers import FIXTURES, bar_doc, rule, rules

ADD = FIXTURES / "add-values"
BOND = FIXTURES / "bond-yields"


def write(tmp_path, name, obj) -> str:
    p = tmp_path / name
    p.write_text(json.dumps(obj), encoding="utf-8")
    return str(p)


def test_validate_ok(capsys):
    assert main(["validate", str(BOND / "source.vis.json")]) == 0
    assert main(["validate", str(BOND / "rules.cicero.json")]) == 0


def test_validate_reports_each_issue(tmp_path, capsys):
    doc = bar_doc()
    doc["width"] = -5
    doc["layers"][0]["mark"] = "pie"
    assert main(["validate", write(tmp_path, "bad.vis.json", doc)]) == 1
    err = capsys.readouterr().err
    assert "width" in err and "pie" in err


def test_validate_detects_rules_by_content(tmp_path, capsys):
    path = write(tmp_path, "r.json", rules(rule({"role": "bogus"}, "remove")))
    assert main(["validate", path]) == 1
    assert "unknown role 'bogus'" in capsys.readouterr().err


def test_validate_malformed_json(tmp_path, capsys):
    p = tmp_path / "x.vis.json"
    p.write_text("{oops", encoding="utf-8")
    assert main(["validate", str(p)]) == 1


def test_missing_file_is_io_error(capsys):
    assert main(["validate", "/nonexistent/file.vis.json"]) == 3
    assert "I/O error" in capsys.readouterr().err


def test_query_prints_paths(capsys):
    assert main(["query", str(ADD / "source.vis.json"), '{"role": "vAxis.label"}']) == 0
    out = capsys.readouterr()
    assert out.out.splitlines() == [f"axes/vertical:sales/label/{v}" for v in (50, 150, 250)]
    assert "3 match(es)" in out.err


def test_query_unknown_role(capsys):
    assert main(["query", str(ADD / "source.vis.json"), '{"role": "marks"}']) == 1


def test_compile_writes_golden(tmp_path, capsys):
    out = tmp_path / "out.vis.json"
    assert main(["compile", str(ADD / "source.vis.json"), str(ADD / "rules.cicero.json"), "--out", str(out)]) == 0
    assert out.read_bytes() == (ADD / "golden.vis.json").read_bytes()


def test_compile_error_exit(tmp_path, capsys):
    v = write(tmp_path, "v.vis.json", bar_doc())
    r = write(tmp_path, "r.cicero.json", rules(rule({"role": "bogus"}, "remove")))
    assert main(["compile", v, r]) == 2
    assert "compile error at rule 0" in capsys.readouterr().err


def test_compile_trace_and_grid(capsys):
    assert main(["compile", str(ADD / "source.vis.json"), str(ADD / "rules.cicero.json"), "--trace", "--grid-dump"]) == 0
    err = capsys.readouterr().err
    lines = err.splitlines()
    assert json.loads(lines[0])["rule"] == 0
    assert "P1" in lines


def test_bad_resolution_and_usage(capsys):
    assert main(["compile", str(ADD / "source.vis.json"), str(ADD / "rules.cicero.json"), "--grid-resolution", "0"]) == 1
    assert main(["frobnicate"]) == 1
    assert main([]) == 1


def test_stdin_input(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO((ADD / "source.vis.json").read_text(encoding="utf-8")))
    assert main(["compile", "-", str(ADD / "rules.cicero.json")]) == 0
    assert capsys.readouterr().out == (ADD / "golden.vis.json").read_text(encoding="utf-8")


def test_diff_of_added_values(tmp_path, capsys):
    assert main(["diff", str(ADD / "source.vis.json"), str(ADD / "golden.vis.json")]) == 1
    d = json.loads(capsys.readouterr().out)
    (change,) = d["changed"]
    assert change["property"] == "values"
    assert (change["old"], change["new"]) == ([50, 150, 250], [50, 100, 150, 200, 250, 300])
    assert d["removed"] == []


def test_diff_of_transpose_moves_axes(capsys):
    src = FIXTURES / "serialize-labels"
    main(["diff", str(src / "source.vis.json"), str(src / "golden.vis.json")])
    d = json.loads(capsys.readouterr().out)
    assert "axes/horizontal:sales" in d["added"] and "axes/vertical:sales" in d["removed"]


def test_diff_identical_is_empty(capsys):
    assert main(["diff", str(BOND / "source.vis.json"), str(BOND / "source.vis.json")]) == 0
    assert json.loads(capsys.readouterr().out) == {"added": [], "changed": [], "removed": []}


def run_cli(*args, stdin=None) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "cicero.cli", *args], input=stdin, capture_output=True, text=True, check=False
    )


def test_pipeline_composes(tmp_path):
    second = write(tmp_path, "second.cicero.json", rules(rule({"role": "title"}, "modify", {"fontSize": 11})))
    first = run_cli("compile", str(ADD / "source.vis.json"), str(ADD / "rules.cicero.json"))
    assert first.returncode == 0
    piped = run_cli("compile", "-", second, stdin=first.stdout)
    assert piped.returncode == 0
    direct = tmp_path / "both.cicero.json"
    both = json.loads((ADD / "rules.cicero.json").read_text())
    both["transformations"] += json.loads(open(second).read())["transformations"]
    direct.write_text(json.dumps(both))
    assert run_cli("compile", str(ADD / "source.vis.json"), str(direct)).stdout == piped.stdout


@pytest.mark.parametrize("fixture", ["bond-yields", "mobilevisfixer"])
def test_module_entry_point(fixture):
    src = FIXTURES / fixture
    done = run_cli("compile", str(src / "source.vis.json"), str(src / "rules.cicero.json"))
    assert done.returncode == 0
    assert done.stdout == (src / "golden.vis.json").read_text(encoding="utf-8")
