"""Closed role vocabulary shared by the model, the grammar and the query engine.

Roles form a dot-separated cascade (``layer.mark.label``).  Short forms are
accepted when the parent is unambiguous.  ``text``, ``label`` and
``emphasis`` are query-only roles: no element carries them as its primary
role, they match through aliases computed at enumeration time.
"""

from __future__ import annotations

from .errors import UnknownRole

ELEMENT_ROLES = (
    "view",
    "view.layout",
    "view.row",
    "view.column",
    "layer",
    "layer.mark",
    "layer.mark.label",
    "axis",
    "hAxis",
    "vAxis",
    "axis.label",
    "hAxis.label",
    "vAxis.label",
    "axis.domain",
    "hAxis.domain",
    "vAxis.domain",
    "axis.grid",
    "hAxis.grid",
    "vAxis.grid",
    "legend",
    "legend.mark",
    "legend.label",
    "title",
    "subtitle",
    "caption",
    "annotation",
    "data",
    "interaction",
)

QUERY_ROLES = ("text", "label", "emphasis")

CANONICAL_ROLES = frozenset(ELEMENT_ROLES + QUERY_ROLES)

SHORT_FORMS = {
    "layout": "view.layout",
    "row": "view.row",
    "column": "view.column",
    "mark": "layer.mark",
    "mark.label": "layer.mark.label",
    "layer.label": "layer.mark.label",
}

AXIS_ROLES = ("axis", "hAxis", "vAxis")
TEXT_ROLES = ("title", "subtitle", "caption")

# option keywords that address subordinate elements, per specifier role
_CHILD_TOKENS = {
    "layer": {"mark": "layer.mark", "label": "layer.mark.label"},
    "layer.mark": {"label": "layer.mark.label"},
    "legend": {"label": "legend.label", "mark": "legend.mark"},
}
for _axis in AXIS_ROLES:
    _CHILD_TOKENS[_axis] = {part: f"{_axis}.{part}" for part in ("label", "domain", "grid")}

ROLE_TOKENS = frozenset({"mark", "label", "domain", "grid"})


def normalize_role(role: str) -> str:
    """Expand a statically unambiguous short form to its canonical path."""
    if not isinstance(role, str):
        raise UnknownRole(repr(role))
    role = role.strip()
    if role in CANONICAL_ROLES:
        return role
    if role in SHORT_FORMS:
        return SHORT_FORMS[role]
    raise UnknownRole(role)


def is_known_role(role: str) -> bool:
    try:
        normalize_role(role)
    except UnknownRole:
        return False
    return True


def child_role(parent: str, token: str) -> str | None:
    """Role addressed by option keyword ``token`` under specifier role ``parent``.

    Returns None when ``token`` does not name a subordinate of ``parent``.
    Under ``view`` every other element role is subordinate.
    """
    parent = normalize_role(parent)
    if token in _CHILD_TOKENS.get(parent, {}):
        return _CHILD_TOKENS[parent][token]
    if parent == "view":
        try:
            role = normalize_role(token)
        except UnknownRole:
            return None
        return role if role != "view" else None
    if "." in token or token not in ROLE_TOKENS:
        try:
            role = normalize_role(token)
        except UnknownRole:
            return None
        if role.startswith(parent + "."):
            return role
    return None


def generalizations(role: str) -> tuple[str, ...]:
    """Roles that an element whose primary role is ``role`` also answers to."""
    out: list[str] = []
    head, _, tail = role.partition(".")
    if head in ("hAxis", "vAxis"):
        out.append("axis" + ("." + tail if tail else ""))
    if tail in ("label", "mark.label") or role.endswith(".label"):
        out.append("label")
    if role.endswith(".label") or role in TEXT_ROLES:
        out.append("text")
    return tuple(out)


# roles whose elements are considered similar when no same-series sibling
# exists; ordered by preference
SIMILAR_ROLES = {
    "hAxis.label": ("vAxis.label", "axis.label"),
    "vAxis.label": ("hAxis.label", "axis.label"),
    "axis.label": ("hAxis.label", "vAxis.label"),
    "hAxis.grid": ("vAxis.grid", "axis.grid"),
    "vAxis.grid": ("hAxis.grid", "axis.grid"),
    "axis.grid": ("hAxis.grid", "vAxis.grid"),
    "hAxis.domain": ("vAxis.domain", "axis.domain"),
    "vAxis.domain": ("hAxis.domain", "axis.domain"),
    "axis.domain": ("hAxis.domain", "vAxis.domain"),
    "layer.mark.label": ("annotation",),
    "annotation": ("layer.mark.label",),
}
