"""Rule-list compilation.

Rules run one after another against the evolving spec.  Important rules are
held back and run after all the others, in declaration order.  Every
attribute write records a claim (important, specificity, rule); a later
write to the same element attribute is dropped when the existing claim
ranks higher, so equal ranks resolve to the later rule.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Iterable

from ..errors import CiceroError, CompileError, SchemaError
from ..grammar import CiceroSpec, Rule, specificity_score
from ..layout import DEFAULT_RESOLUTION
from ..query import resolve
from ..vis.elements import enumerate_elements
from ..vis.model import VisSpec, validate_vis_spec
from .actions import ACTION_HANDLERS, ActionContext
from .structure import after_resize, settle_axis_values
from .writes import Claim, Writer


@dataclass
class CompileResult:
    spec: VisSpec
    trace: list[dict] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


def rule_order(rules: list[Rule]) -> list[int]:
    """Indexes in execution order: plain rules, then important ones."""
    plain = [i for i, r in enumerate(rules) if not r.important]
    important = [i for i, r in enumerate(rules) if r.important]
    return plain + important


def apply_rules(
    spec: VisSpec,
    rules: Iterable[tuple[int, Rule]],
    *,
    claims: dict[tuple[str, str], Claim] | None = None,
    resolution: float = DEFAULT_RESOLUTION,
    validate: bool = True,
    result: CompileResult | None = None,
) -> CompileResult:
    """Run ``rules`` (index, rule) in the given order, mutating ``spec``."""
    claims = {} if claims is None else claims
    result = result or CompileResult(spec)
    for index, rule in rules:
        elements = enumerate_elements(spec)
        try:
            selection = resolve(rule.specifier, spec, elements)
        except CiceroError as exc:
            raise CompileError(index, exc) from exc
        entry = {"rule": index, "action": rule.action, "selection": selection.paths, "writes": [], "suppressed": []}
        if selection:
            writer = Writer(spec, claims, index, rule.important, specificity_score(rule))
            ctx = ActionContext(spec, writer, rule, index, elements, resolution)
            old_w, old_h = spec.width, spec.height
            try:
                ACTION_HANDLERS[rule.action](selection, rule.option, ctx)
                writer.flush()
            except CiceroError as exc:
                raise CompileError(index, exc) from exc
            if (spec.width, spec.height) != (old_w, old_h):
                after_resize(spec, old_w, old_h)
            settle_axis_values(spec)
            entry["writes"] = writer.writes
            entry["suppressed"] = writer.suppressed
            result.diagnostics += ctx.diagnostics
            if validate:
                issues = validate_vis_spec(spec)
                if issues:
                    raise CompileError(index, SchemaError(issues[0], issues))
        result.trace.append(entry)
    return result


def compile_spec(
    source: VisSpec,
    cicero: CiceroSpec,
    *,
    resolution: float = DEFAULT_RESOLUTION,
    validate: bool = True,
) -> CompileResult:
    """Target spec for ``source`` under ``cicero``; the source is not modified."""
    spec = copy.deepcopy(source)
    rules = cicero.transformations
    order = rule_order(rules)
    return apply_rules(spec, [(i, rules[i]) for i in order], resolution=resolution, validate=validate)


def compile(source: VisSpec, cicero: CiceroSpec, *, resolution: float = DEFAULT_RESOLUTION) -> VisSpec:  # noqa: A001
    return compile_spec(source, cicero, resolution=resolution).spec
