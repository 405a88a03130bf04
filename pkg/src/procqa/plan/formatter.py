"""Canonical plan rendering; parse(format_plan(p)) reproduces p structurally."""

from __future__ import annotations

from ..temporal import TimeSpan
from .ast import ArgValue, ListValue, Plan, Ref, ToolCall

_REVERSE_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def _escape(text: str) -> str:
    return "".join(_REVERSE_ESCAPES.get(ch, ch) for ch in text)


def format_value(value: ArgValue) -> str:
    if isinstance(value, Ref):
        return value.name
    if isinstance(value, ListValue):
        return "[" + ", ".join(format_value(v) for v in value.items) + "]"
    v = value.value
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, TimeSpan):
        return f"[{v.start_ms / 1000:.3f}, {v.end_ms / 1000:.3f}]"
    if isinstance(v, str):
        return f'"{_escape(v)}"'
    if isinstance(v, int):
        return str(v)
    return repr(v)  # float: repr round-trips exactly


def format_step(step: ToolCall) -> str:
    args = ", ".join(f"{k}={format_value(v)}" for k, v in step.args)
    return f"{step.output_name} = {step.tool_name}({args})"


def format_plan(plan: Plan) -> str:
    lines: list[str] = []
    if plan.question:
        lines.append(f'#! question: "{_escape(plan.question)}"')
    if plan.qa_type is not None:
        lines.append(f"#! qa_type: {plan.qa_type.value}")
    lines.extend(format_step(s) for s in plan.steps)
    return "\n".join(lines) + "\n"
