"""Static plan validation against a tool registry.

Violations are returned, never raised: planner output is untrusted and the
caller decides whether to retry, fall back, or abort. Unknown extra parameters
are violations (planner hallucinations must fail fast, not be ignored).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..kinds import ValueKind
from ..temporal import TimeSpan
from .ast import ArgValue, ListValue, Literal, Plan, Ref


class ViolationKind(str, Enum):
    UNKNOWN_TOOL = "unknown_tool"
    MISSING_PARAM = "missing_param"
    UNKNOWN_PARAM = "unknown_param"
    TYPE_MISMATCH = "type_mismatch"
    UNDEFINED_REFERENCE = "undefined_reference"
    DUPLICATE_OUTPUT = "duplicate_output"


@dataclass(frozen=True)
class Violation:
    step: int  # 1-based, mirrors plan line order
    kind: ViolationKind
    message: str

    def __str__(self) -> str:
        return f"step {self.step}: {self.kind.value}: {self.message}"


def literal_kind(value) -> ValueKind:
    if isinstance(value, TimeSpan):
        return ValueKind.SPAN_LIST
    if isinstance(value, bool) or isinstance(value, (int, float)):
        return ValueKind.SCORE
    return ValueKind.TEXT


def _arg_kinds(value: ArgValue, producer_kind: dict[str, ValueKind | None]) -> set[ValueKind]:
    """Kinds an argument can carry; unknown producers contribute nothing."""
    if isinstance(value, Literal):
        return {literal_kind(value.value)}
    if isinstance(value, Ref):
        kind = producer_kind.get(value.name)
        return {kind} if kind is not None else set()
    kinds: set[ValueKind] = set()
    for item in value.items:
        kinds |= _arg_kinds(item, producer_kind)
    return kinds


def validate_plan(plan: Plan, registry) -> list[Violation]:
    violations: list[Violation] = []
    # None marks an output whose kind is unknowable (unknown tool); refs to it
    # are not re-flagged, keeping one root cause per defect.
    producer_kind: dict[str, ValueKind | None] = {}
    for index, step in enumerate(plan.steps, start=1):
        if step.output_name in producer_kind:
            violations.append(
                Violation(
                    index,
                    ViolationKind.DUPLICATE_OUTPUT,
                    f"output {step.output_name!r} assigned twice",
                )
            )
        spec = registry.lookup(step.tool_name)
        if spec is None:
            violations.append(
                Violation(
                    index,
                    ViolationKind.UNKNOWN_TOOL,
                    f"no tool named {step.tool_name!r}",
                )
            )
        given = step.args_dict()
        if spec is not None:
            for param_name, param in spec.params.items():
                if param.required and param_name not in given:
                    violations.append(
                        Violation(
                            index,
                            ViolationKind.MISSING_PARAM,
                            f"{step.tool_name} requires {param_name!r}",
                        )
                    )
        for param_name, value in step.args:
            _refs_with_check(value, producer_kind, violations, index)
            if spec is None:
                continue
            param = spec.params.get(param_name)
            if param is None:
                violations.append(
                    Violation(
                        index,
                        ViolationKind.UNKNOWN_PARAM,
                        f"{step.tool_name} has no parameter {param_name!r}",
                    )
                )
                continue
            kinds = _arg_kinds(value, producer_kind)
            bad = kinds - param.kinds
            if bad:
                got = ", ".join(sorted(k.value for k in bad))
                want = ", ".join(sorted(k.value for k in param.kinds))
                violations.append(
                    Violation(
                        index,
                        ViolationKind.TYPE_MISMATCH,
                        f"{step.tool_name}.{param_name} wants {want}, got {got}",
                    )
                )
        producer_kind[step.output_name] = spec.output_kind if spec else None
    return violations


def _refs_with_check(
    value: ArgValue,
    producer_kind: dict[str, ValueKind | None],
    violations: list[Violation],
    index: int,
) -> list[str]:
    names: list[str] = []
    if isinstance(value, Ref):
        if value.name not in producer_kind:
            violations.append(
                Violation(
                    index,
                    ViolationKind.UNDEFINED_REFERENCE,
                    f"reference to undefined name {value.name!r}",
                )
            )
        names.append(value.name)
    elif isinstance(value, ListValue):
        for item in value.items:
            names.extend(_refs_with_check(item, producer_kind, violations, index))
    return names
