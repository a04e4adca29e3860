"""Rule application: the eight actions and the conflict cascade."""

from .actions import ACTION_HANDLERS, ActionContext
from .defaults import mimic_series, similar_role_fallback
from .engine import CompileResult, apply_rules, compile, compile_spec, rule_order
from .structure import TMP_CHANNEL, prune_dangling
from .writes import Claim, Writer, apply_relative

__all__ = [
    "ACTION_HANDLERS",
    "ActionContext",
    "Claim",
    "CompileResult",
    "TMP_CHANNEL",
    "Writer",
    "apply_relative",
    "apply_rules",
    "compile",
    "compile_spec",
    "mimic_series",
    "prune_dangling",
    "rule_order",
    "similar_role_fallback",
]
