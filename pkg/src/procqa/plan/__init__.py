from .ast import ArgValue, ListValue, Literal, Plan, Ref, ToolCall, refs_in
from .formatter import format_plan, format_step, format_value
from .parser import parse_plan
from .validator import Violation, ViolationKind, literal_kind, validate_plan

__all__ = [
    "ArgValue",
    "ListValue",
    "Literal",
    "Plan",
    "Ref",
    "ToolCall",
    "Violation",
    "ViolationKind",
    "format_plan",
    "format_step",
    "format_value",
    "literal_kind",
    "parse_plan",
    "refs_in",
    "validate_plan",
]
