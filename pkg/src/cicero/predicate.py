"""Data predicates: per-field terms, operator maps, and their evaluation.

A predicate is either a mapping ``{field: term}`` (all terms must hold) or a
list of such mappings (any one must hold).  A term is a literal (equality),
a list of literals (membership), a list of operator maps (any), or an
operator map such as ``{"lte": 2011}`` whose entries must all hold.
"""

from __future__ import annotations

import re
from typing import Any, Mapping

from .errors import TypeMismatch

LOGICAL = frozenset({"not", "and", "or"})
ARITHMETIC = frozenset({"eq", "neq", "gt", "gte", "lt", "lte"})
ORDERING = frozenset({"gt", "gte", "lt", "lte"})
STRING = frozenset({"regex", "startsWith", "includes", "endsWith"})
OPERATORS = LOGICAL | ARITHMETIC | STRING

ORDERED_TYPES = frozenset({"ordinal", "quantitative", "temporal"})

_TEMPORAL_RE = re.compile(
    r"^(?P<y>-?\d{4})(?:-(?P<m>\d{2})(?:-(?P<d>\d{2})(?:[T ](?P<t>\d{2}:\d{2}(?::\d{2}(?:\.\d+)?)?))?)?)?(?P<z>Z|[+-]\d{2}:?\d{2})?$"
)


def normalize_temporal(value: Any) -> Any:
    """Pad an ISO-8601 date/time (or a bare year number) to a full timestamp string.

    Padded strings compare lexicographically in chronological order.
    Values that are not recognisable dates are returned unchanged.
    """
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return f"{value:04d}-01-01T00:00:00"
    if isinstance(value, float) and value.is_integer():
        return f"{int(value):04d}-01-01T00:00:00"
    if not isinstance(value, str):
        return value
    m = _TEMPORAL_RE.match(value.strip())
    if not m:
        return value
    t = m.group("t") or "00:00:00"
    if len(t) == 5:
        t += ":00"
    return f"{m.group('y')}-{m.group('m') or '01'}-{m.group('d') or '01'}T{t}{m.group('z') or ''}"


def is_operator_map(term: Any) -> bool:
    return isinstance(term, Mapping) and bool(term) and all(k in OPERATORS for k in term)


def _norm(value: Any, datatype: str | None) -> Any:
    if datatype == "temporal":
        return normalize_temporal(value)
    return value


def _equal(a: Any, b: Any, datatype: str | None) -> bool:
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    return _norm(a, datatype) == _norm(b, datatype)


def _compare(op: str, value: Any, bound: Any, datatype: str | None) -> bool:
    if datatype is not None and datatype not in ORDERED_TYPES:
        raise TypeMismatch(f"operator {op!r} needs an ordered datatype, got {datatype!r}")
    if value is None:
        return False
    a, b = _norm(value, datatype), _norm(bound, datatype)
    numeric = (int, float)
    if isinstance(a, bool) or isinstance(b, bool):
        raise TypeMismatch(f"operator {op!r} cannot order booleans")
    if isinstance(a, numeric) != isinstance(b, numeric):
        raise TypeMismatch(f"operator {op!r} cannot compare {a!r} with {b!r}")
    try:
        if op == "gt":
            return a > b
        if op == "gte":
            return a >= b
        if op == "lt":
            return a < b
        return a <= b
    except TypeError as exc:
        raise TypeMismatch(str(exc)) from None


def _apply_operator(op: str, arg: Any, value: Any, datatype: str | None) -> bool:
    if op == "not":
        return not match_term(arg, value, datatype)
    if op == "and":
        return all(match_term(t, value, datatype) for t in _as_list(arg))
    if op == "or":
        return any(match_term(t, value, datatype) for t in _as_list(arg))
    if op == "eq":
        return _equal(value, arg, datatype)
    if op == "neq":
        return not _equal(value, arg, datatype)
    if op in ORDERING:
        return _compare(op, value, arg, datatype)
    if value is None:
        return False
    text = value if isinstance(value, str) else _display(value)
    if op == "regex":
        return re.search(str(arg), text) is not None
    if op == "startsWith":
        return text.startswith(str(arg))
    if op == "endsWith":
        return text.endswith(str(arg))
    if op == "includes":
        return str(arg) in text
    raise ValueError(f"unknown operator {op!r}")


def _display(value: Any) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _as_list(arg: Any) -> list:
    return list(arg) if isinstance(arg, (list, tuple)) else [arg]


def match_term(term: Any, value: Any, datatype: str | None = None) -> bool:
    """Evaluate one term against one value."""
    if is_operator_map(term):
        return all(_apply_operator(op, arg, value, datatype) for op, arg in term.items())
    if isinstance(term, (list, tuple)):
        if term and all(is_operator_map(t) for t in term):
            return any(match_term(t, value, datatype) for t in term)
        return any(_equal(value, t, datatype) for t in term)
    return _equal(value, term, datatype)


def eval_data_predicate(
    pred: Any, row: Mapping[str, Any], datatypes: Mapping[str, str] | None = None
) -> bool:
    """True when ``row`` satisfies ``pred``.

    A list of predicate objects is a disjunction; the fields inside one
    object form a conjunction.  A field missing from ``row`` never matches.
    Ordering operators on a nominal field raise TypeMismatch.
    """
    if isinstance(pred, (list, tuple)):
        return any(eval_data_predicate(p, row, datatypes) for p in pred)
    for field, term in pred.items():
        if field not in row:
            return False
        dtype = datatypes.get(field) if datatypes else None
        if not match_term(term, row[field], dtype):
            return False
    return True


def predicate_fields(pred: Any) -> set[str]:
    if isinstance(pred, (list, tuple)):
        out: set[str] = set()
        for p in pred:
            out |= predicate_fields(p)
        return out
    if isinstance(pred, Mapping):
        return set(pred)
    return set()


def predicate_terms(pred: Any) -> int:
    """Number of per-field terms, counted across disjuncts."""
    if isinstance(pred, (list, tuple)):
        return sum(predicate_terms(p) for p in pred)
    if isinstance(pred, Mapping):
        return len(pred)
    return 0


def _term_issues(term: Any, where: str) -> list[str]:
    issues: list[str] = []
    if isinstance(term, Mapping):
        unknown = [k for k in term if k not in OPERATORS]
        if unknown:
            issues.append(f"{where}: unknown operator(s) {sorted(unknown)}")
            return issues
        for op, arg in term.items():
            if op in ("and", "or"):
                if not isinstance(arg, list):
                    issues.append(f"{where}.{op}: expected a list of terms")
                else:
                    for i, t in enumerate(arg):
                        issues += _term_issues(t, f"{where}.{op}[{i}]")
            elif op == "not":
                issues += _term_issues(arg, f"{where}.not")
            elif op == "regex":
                try:
                    re.compile(str(arg))
                except re.error as exc:
                    issues.append(f"{where}.regex: {exc}")
    elif isinstance(term, list):
        for i, t in enumerate(term):
            if isinstance(t, Mapping):
                issues += _term_issues(t, f"{where}[{i}]")
    return issues


def predicate_issues(pred: Any, where: str = "data") -> list[str]:
    """Structural problems with a predicate (does not check field names)."""
    if isinstance(pred, list):
        issues: list[str] = []
        for i, p in enumerate(pred):
            if not isinstance(p, Mapping):
                issues.append(f"{where}[{i}]: expected an object")
            else:
                issues += predicate_issues(p, f"{where}[{i}]")
        return issues
    if not isinstance(pred, Mapping):
        return [f"{where}: expected an object or a list of objects"]
    issues = []
    for field, term in pred.items():
        issues += _term_issues(term, f"{where}.{field}")
    return issues
