"""Compiler for declarative responsive-visualization transformation rules."""

from .diff import diff_specs
from .errors import CiceroError, CompileError, SchemaError, UnknownRole
from .grammar import CiceroSpec, Rule, Specifier, parse_cicero_spec, specificity_score
from .layout import largest_empty_rect, resolve_layout
from .query import Selection, resolve
from .transform import CompileResult, compile, compile_spec
from .vis import VisSpec, canonical_serialize, enumerate_elements, parse_vis_spec

__all__ = [
    "CiceroError",
    "CiceroSpec",
    "CompileError",
    "CompileResult",
    "Rule",
    "SchemaError",
    "Selection",
    "Specifier",
    "UnknownRole",
    "VisSpec",
    "canonical_serialize",
    "compile",
    "compile_spec",
    "diff_specs",
    "enumerate_elements",
    "largest_empty_rect",
    "parse_cicero_spec",
    "parse_vis_spec",
    "resolve",
    "resolve_layout",
    "specificity_score",
]
