"""``cicero`` command line: validate, query, compile, diff.

Exit codes: 0 success, 1 validation error, 2 compile error, 3 I/O error.
Artifacts go to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .diff import diff_specs, is_empty
from .errors import CiceroError, CompileError, SchemaError, UnknownRole
from .grammar import cicero_from_dict, parse_specifier, validate_cicero_spec
from .layout import DEFAULT_RESOLUTION, grid_dump, resolve_layout
from .query import resolve
from .transform import compile_spec
from .vis import canonical_serialize, vis_from_dict
from .vis.model import load_json
from .vis.serialize import canonical_json

OK, INVALID, COMPILE_FAILED, IO_FAILED = 0, 1, 2, 3


class _IOFailure(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _IOFailure(f"{path}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    try:
        if path is None or path == "-":
            sys.stdout.write(text)
        else:
            Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _IOFailure(f"{path}: {exc}") from None


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def detect_kind(path: str, doc: Any) -> str:
    """"vis" or "cicero", by file extension and then by top-level keys."""
    if path.endswith(".cicero.json"):
        return "cicero"
    if path.endswith(".vis.json"):
        return "vis"
    if isinstance(doc, dict) and "transformations" in doc:
        return "cicero"
    return "vis"


def _issues(exc: CiceroError) -> list[str]:
    return sorted(getattr(exc, "issues", None) or [str(exc)])


def _load_vis(path: str):
    return vis_from_dict(load_json(_read(path)))


def _load_cicero(path: str):
    return cicero_from_dict(load_json(_read(path)))


def cmd_validate(args: argparse.Namespace) -> int:
    doc = load_json(_read(args.path))
    try:
        if detect_kind(args.path, doc) == "cicero":
            issues = validate_cicero_spec(cicero_from_dict(doc))
        else:
            vis_from_dict(doc)
            issues = []
    except CiceroError as exc:
        issues = _issues(exc)
    for line in issues:
        _err(line)
    return INVALID if issues else OK


def cmd_query(args: argparse.Namespace) -> int:
    spec = _load_vis(args.vis)
    raw = load_json(args.specifier)
    problems: list[str] = []
    specifier = parse_specifier(raw, "specifier", problems)
    if problems:
        raise SchemaError(problems[0], problems)
    selection = resolve(specifier, spec)
    for path in selection.paths:
        sys.stdout.write(path + "\n")
    _err(f"{len(selection.paths)} match(es)")
    return OK


def cmd_compile(args: argparse.Namespace) -> int:
    spec = _load_vis(args.vis)
    cicero = _load_cicero(args.cicero)
    try:
        result = compile_spec(spec, cicero, resolution=args.grid_resolution)
    except CompileError as exc:
        _err(f"compile error at rule {exc.rule_index}: {type(exc.cause).__name__}: {exc.cause}")
        return COMPILE_FAILED
    if args.trace:
        for entry in result.trace:
            _err(json.dumps(entry, sort_keys=True, ensure_ascii=False, default=str))
    for note in result.diagnostics:
        _err(note)
    if args.grid_dump:
        sys.stderr.write(grid_dump(resolve_layout(result.spec, args.grid_resolution)))
    _write(args.out, canonical_serialize(result.spec))
    return OK


def cmd_diff(args: argparse.Namespace) -> int:
    a, b = _load_vis(args.a), _load_vis(args.b)
    d = diff_specs(a, b)
    _write(args.out, canonical_json(d))
    return OK if is_empty(d) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cicero", description="Responsive visualization transformation compiler")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a .vis.json or .cicero.json document")
    v.add_argument("path")
    v.set_defaults(run=cmd_validate)

    q = sub.add_parser("query", help="print element paths matched by a specifier")
    q.add_argument("vis")
    q.add_argument("specifier", help="specifier as a JSON object")
    q.set_defaults(run=cmd_query)

    c = sub.add_parser("compile", help="apply a rule list to a vis spec")
    c.add_argument("vis")
    c.add_argument("cicero")
    c.add_argument("--out")
    c.add_argument("--trace", action="store_true", help="rule trace as JSON lines on stderr")
    c.add_argument("--grid-dump", action="store_true", help="occupancy grid of the result as PBM on stderr")
    c.add_argument("--grid-resolution", type=float, default=DEFAULT_RESOLUTION, metavar="PX")
    c.set_defaults(run=cmd_compile)

    d = sub.add_parser("diff", help="structural diff of two vis specs")
    d.add_argument("a")
    d.add_argument("b")
    d.add_argument("--out")
    d.set_defaults(run=cmd_diff)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors share the validation code so 2 stays reserved for compile failures
        return OK if exc.code in (0, None) else INVALID
    if getattr(args, "grid_resolution", 1) <= 0:
        _err("--grid-resolution must be positive")
        return INVALID
    try:
        return args.run(args)
    except _IOFailure as exc:
        _err(f"I/O error: {exc}")
        return IO_FAILED
    except UnknownRole as exc:
        _err(f"UnknownRole: {exc}")
        return INVALID
    except CiceroError as exc:
        for line in _issues(exc):
            _err(line)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
