"""Cicero specifications: metadata plus an ordered list of transformation rules.

A rule is ``{specifier, action, option?, important?}``.  Options stay as
plain JSON values; their meaning depends on the action and the specifier
role and is interpreted by the transform engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field as _field
from typing import Any

from .errors import SchemaError, UnknownRole
from .predicate import predicate_issues, predicate_terms
from .roles import is_known_role, normalize_role
from .vis.model import CHANNELS, DATATYPES, INTERACTION_KINDS, MARK_TYPES, OPERATION_TYPES, load_json, strip_px

ACTIONS = ("modify", "reposition", "transpose", "add", "duplicate", "remove", "replace", "swap")
OPTION_REQUIRED = frozenset({"modify", "reposition", "add", "replace", "swap"})
TO_FROM_ACTIONS = frozenset({"replace", "swap"})
INDEX_KEYWORDS = ("first", "last", "even", "odd")
CONDITIONS = ("x-small", "small", "medium", "large", "x-large")
MEDIA_TYPES = ("screen", "paper")
ASPECT_RATIOS = ("portrait", "landscape")

# specifier slots with fixed meaning; every other key is an attribute matcher
STRUCTURE_KEYS = ("role", "mark", "index", "id")
DATA_KEYS = ("data", "field", "values", "datatype")
ATTRIBUTE_KEYS = ("channel", "operation", "interaction")
SPECIFIER_KEYS = STRUCTURE_KEYS + DATA_KEYS + ATTRIBUTE_KEYS


@dataclass(frozen=True)
class By:
    """Additive relative update: ``old + n``."""

    n: float


@dataclass(frozen=True)
class Prod:
    """Multiplicative relative update: ``old * n``."""

    n: float


def relative(value: Any) -> By | Prod | None:
    """The By/Prod wrapper a JSON option value denotes, if any."""
    if isinstance(value, dict) and len(value) == 1:
        (k, v), = value.items()
        v = strip_px(v)
        if k == "by" and _is_num(v):
            return By(v)
        if k == "prod" and _is_num(v):
            return Prod(v)
    return None


def _is_num(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


@dataclass
class Specifier:
    role: str
    mark: str | None = None
    index: int | str | None = None
    id: str | None = None
    data: Any = None
    field: str | list[str] | None = None
    values: list | str | None = None
    datatype: str | None = None
    channel: str | list[str] | None = None
    operation: list[str] | None = None
    interaction: list[str] | None = None
    attributes: dict[str, Any] = _field(default_factory=dict)

    @property
    def role_known(self) -> bool:
        return is_known_role(self.role)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"role": self.role}
        for k in SPECIFIER_KEYS[1:]:
            v = getattr(self, k)
            if v is not None:
                out[k] = v
        out.update(self.attributes)
        return out


@dataclass
class Rule:
    specifier: Specifier
    action: str
    option: Any = None
    important: bool = False

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"specifier": self.specifier.to_dict(), "action": self.action}
        if self.option is not None:
            out["option"] = self.option
        if self.important:
            out["important"] = True
        return out


@dataclass
class Metadata:
    condition: str | None = None
    mediaType: str | None = None
    aspectRatio: str | float | None = None
    extra: dict[str, Any] = _field(default_factory=dict)

    def to_dict(self) -> dict:
        out = dict(self.extra)
        for k in ("condition", "mediaType", "aspectRatio"):
            v = getattr(self, k)
            if v is not None:
                out[k] = v
        return out


@dataclass
class CiceroSpec:
    name: str | None = None
    metadata: Metadata = _field(default_factory=Metadata)
    transformations: list[Rule] = _field(default_factory=list)
    description: str | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"transformations": [r.to_dict() for r in self.transformations]}
        if self.name is not None:
            out["name"] = self.name
        md = self.metadata.to_dict()
        if md:
            out["metadata"] = md
        if self.description is not None:
            out["description"] = self.description
        return out

    def unknown_roles(self) -> list[tuple[int, str]]:
        return [(i, r.specifier.role) for i, r in enumerate(self.transformations) if not r.specifier.role_known]


def _as_str_list(value: Any) -> list[str] | None:
    if value is None:
        return None
    if isinstance(value, str):
        return [value]
    if isinstance(value, list) and all(isinstance(v, str) for v in value):
        return list(value)
    raise ValueError("expected a string or a list of strings")


def parse_specifier(value: Any, where: str, issues: list[str]) -> Specifier:
    if not isinstance(value, dict):
        issues.append(f"{where}: expected an object")
        return Specifier(role="view")
    if "role" not in value:
        issues.append(f"{where}: missing required key 'role'")
    role = value.get("role", "view")
    if not isinstance(role, str):
        issues.append(f"{where}.role: expected a string")
        role = "view"
    try:
        role = normalize_role(role)
    except UnknownRole:
        pass  # reported by validate, raised at resolve
    spec = Specifier(role=role)

    mark = value.get("mark")
    if mark is not None and mark not in MARK_TYPES:
        issues.append(f"{where}.mark: {mark!r} is not one of {list(MARK_TYPES)}")
    spec.mark = mark

    index = value.get("index")
    if index is not None:
        if isinstance(index, bool) or not (
            (isinstance(index, int) and index >= 0) or index in INDEX_KEYWORDS
        ):
            issues.append(f"{where}.index: expected a non-negative integer or one of {list(INDEX_KEYWORDS)}")
    spec.index = index

    sid = value.get("id")
    if sid is not None and not isinstance(sid, str):
        issues.append(f"{where}.id: expected a string")
    spec.id = sid

    if "data" in value:
        issues.extend(predicate_issues(value["data"], f"{where}.data"))
        spec.data = value["data"]

    for key in ("field", "channel"):
        v = value.get(key)
        if v is not None:
            try:
                lst = _as_str_list(v)
            except ValueError as exc:
                issues.append(f"{where}.{key}: {exc}")
                lst = None
            if key == "channel" and lst:
                for ch in lst:
                    if ch not in CHANNELS and ch not in ("row", "column"):
                        issues.append(f"{where}.channel: unknown channel {ch!r}")
            setattr(spec, key, v)

    values = value.get("values")
    if values is not None and not (isinstance(values, list) or values in ("even", "odd")):
        issues.append(f"{where}.values: expected a list or 'even'/'odd'")
    spec.values = values

    datatype = value.get("datatype")
    if datatype is not None and datatype not in DATATYPES:
        issues.append(f"{where}.datatype: {datatype!r} is not one of {list(DATATYPES)}")
    spec.datatype = datatype

    for key, allowed in (("operation", OPERATION_TYPES), ("interaction", INTERACTION_KINDS)):
        v = value.get(key)
        if v is None:
            continue
        try:
            lst = _as_str_list(v) or []
        except ValueError as exc:
            issues.append(f"{where}.{key}: {exc}")
            continue
        for item in lst:
            if item not in allowed:
                issues.append(f"{where}.{key}: {item!r} is not one of {list(allowed)}")
        setattr(spec, key, lst)

    spec.attributes = {k: v for k, v in value.items() if k not in SPECIFIER_KEYS}
    return spec


# attributes whose values are never numbers, so relative updates make no sense
NON_NUMERIC_ATTRS = frozenset(
    {"color", "fill", "stroke", "fontWeight", "fontStyle", "fontFamily", "text", "title", "position",
     "mark", "orient", "side", "field", "kind", "visible", "grid", "external", "internal", "serial", "parallel"}
)


def _relative_issues(value: Any, where: str, attr: str | None = None) -> list[str]:
    """By/Prod wrappers must carry a number and target a numeric attribute."""
    out: list[str] = []
    if isinstance(value, dict):
        if len(value) == 1 and next(iter(value)) in ("by", "prod"):
            (k, v), = value.items()
            if not _is_num(strip_px(v)):
                out.append(f"{where}.{k}: expected a number")
            if attr in NON_NUMERIC_ATTRS:
                out.append(f"{where}: {k} needs a numeric attribute, {attr!r} is not one")
            return out
        for k, v in value.items():
            out += _relative_issues(v, f"{where}.{k}", k)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            out += _relative_issues(v, f"{where}[{i}]")
    return out


def option_issues(action: str, option: Any, where: str) -> list[str]:
    issues: list[str] = []
    if option is None:
        if action in OPTION_REQUIRED:
            issues.append(f"{where}: action {action!r} requires an option")
        return issues
    if action == "swap":
        if isinstance(option, list):
            if len(option) != 2:
                issues.append(f"{where}: swap expects exactly two entries")
            return issues
        if not isinstance(option, dict) or "from" not in option or "to" not in option:
            issues.append(f"{where}: swap expects a two-element array or an object with 'from' and 'to'")
        return issues
    if not isinstance(option, dict):
        issues.append(f"{where}: expected an object")
        return issues
    if action not in TO_FROM_ACTIONS and ("to" in option or "from" in option):
        issues.append(f"{where}: 'to'/'from' are only allowed with replace or swap")
    if action == "replace":
        if "to" not in option:
            issues.append(f"{where}: replace requires 'to'")
        for k in ("to", "from"):
            if k in option and not isinstance(option[k], dict):
                issues.append(f"{where}.{k}: expected an object")
    issues += _relative_issues(option, where)
    return issues


def parse_rule(value: Any, i: int, issues: list[str]) -> Rule:
    where = f"rule {i}"
    if not isinstance(value, dict):
        issues.append(f"{where}: expected an object")
        return Rule(Specifier("view"), "modify")
    for k in value:
        if k not in ("specifier", "action", "option", "important", "description"):
            issues.append(f"{where}: unknown key {k!r}")
    if "specifier" not in value:
        issues.append(f"{where}: missing required key 'specifier'")
    spec = parse_specifier(value.get("specifier", {"role": "view"}), f"{where}.specifier", issues)
    action = value.get("action")
    if action not in ACTIONS:
        issues.append(f"{where}: unknown action {action!r}" if action is not None else f"{where}: missing action")
        action = "modify"
        option = value.get("option")
    else:
        option = value.get("option")
        issues += option_issues(action, option, f"{where}.option")
    important = value.get("important", False)
    if not isinstance(important, bool):
        issues.append(f"{where}.important: expected a boolean")
        important = False
    return Rule(spec, action, option, important)


def cicero_from_dict(doc: Any) -> CiceroSpec:
    issues: list[str] = []
    if not isinstance(doc, dict):
        raise SchemaError("cicero spec: expected an object")
    for k in doc:
        if k not in ("name", "metadata", "transformations", "description"):
            issues.append(f"cicero spec: unknown key {k!r}")
    rules_raw = doc.get("transformations", [])
    if "transformations" not in doc:
        issues.append("cicero spec: missing required key 'transformations'")
    if not isinstance(rules_raw, list):
        issues.append("transformations: expected a list")
        rules_raw = []
    md_raw = doc.get("metadata", {}) or {}
    if not isinstance(md_raw, dict):
        issues.append("metadata: expected an object")
        md_raw = {}
    metadata = Metadata(
        condition=md_raw.get("condition"),
        mediaType=md_raw.get("mediaType"),
        aspectRatio=md_raw.get("aspectRatio"),
        extra={k: v for k, v in md_raw.items() if k not in ("condition", "mediaType", "aspectRatio")},
    )
    rules = [parse_rule(r, i, issues) for i, r in enumerate(rules_raw)]
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        issues.append("name: expected a string")
    if issues:
        raise SchemaError(issues[0], issues)
    return CiceroSpec(name=name, metadata=metadata, transformations=rules, description=doc.get("description"))


def parse_cicero_spec(text: str | bytes) -> CiceroSpec:
    """Parse and validate a Cicero document.  Rule order is preserved."""
    return cicero_from_dict(load_json(text))


def validate_cicero_spec(spec: CiceroSpec) -> list[str]:
    """Problems parse tolerates but compile would reject."""
    return [f"rule {i}: unknown role {role!r}" for i, role in spec.unknown_roles()]


def specificity_score(rule: Rule | Specifier) -> int:
    """Populated specifier slots beyond the role, with equal weight."""
    s = rule.specifier if isinstance(rule, Rule) else rule
    score = 0
    for k in ("mark", "index", "id", "field", "values", "datatype", "channel"):
        if getattr(s, k) is not None:
            score += 1
    if s.data is not None:
        score += predicate_terms(s.data)
    score += len(s.operation or ())
    score += len(s.interaction or ())
    score += len(s.attributes)
    return score


__all__ = [
    "ACTIONS",
    "By",
    "Prod",
    "CiceroSpec",
    "Metadata",
    "Rule",
    "Specifier",
    "cicero_from_dict",
    "normalize_role",
    "parse_cicero_spec",
    "parse_specifier",
    "relative",
    "specificity_score",
    "validate_cicero_spec",
]
