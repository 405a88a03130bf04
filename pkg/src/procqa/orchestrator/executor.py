"""Plan execution with a verifiable step-by-step trace.

Steps run in written order (dataflow order by construction of the DSL). Every
attempted step leaves exactly one trace event carrying digests of its resolved
arguments and output, so an auditor can re-derive the digests from persisted
bindings and confirm the trace matches what actually flowed.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass
from typing import Optional

from ..errors import EmptyPlan, StepFailed, UndefinedReference
from ..jsonutil import canonical_json
from ..plan.ast import ArgValue, ListValue, Literal, Plan, Ref
from ..tools.env import ToolEnv
from ..tools.spec import ToolRegistry
from ..tools.values import value_to_jsonable

VIDEO_PLACEHOLDER = "$video"


@dataclass(frozen=True)
class TraceEvent:
    step_index: int  # 1-based plan order; 0 for planning events
    tool_name: str
    args_digest: str
    output_digest: str
    started_at: float
    ended_at: float
    status: str  # ok | error
    error: Optional[str] = None

    def to_jsonable(self) -> dict:
        doc = {
            "step_index": self.step_index,
            "tool_name": self.tool_name,
            "args_digest": self.args_digest,
            "output_digest": self.output_digest,
            "started_at": self.started_at,
            "ended_at": self.ended_at,
            "status": self.status,
        }
        if self.error is not None:
            doc["error"] = self.error
        return doc


@dataclass
class ExecutionResult:
    bindings: dict[str, object]
    trace: list[TraceEvent]

    def final_value(self):
        if not self.bindings:
            raise EmptyPlan("no bindings produced")
        return next(reversed(self.bindings.values()))


def digest_value(value) -> str:
    payload = canonical_json(value_to_jsonable(value))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def digest_args(resolved: dict) -> str:
    payload = canonical_json({k: value_to_jsonable(v) for k, v in resolved.items()})
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _resolve(value: ArgValue, bindings: dict, env: ToolEnv):
    if isinstance(value, Literal):
        v = value.value
        if v == VIDEO_PLACEHOLDER and env.video is not None:
            return env.video.path_or_uri
        return v
    if isinstance(value, Ref):
        if value.name not in bindings:
            raise UndefinedReference(f"unbound reference {value.name!r}", 0, 0)
        return bindings[value.name]
    if isinstance(value, ListValue):
        return [_resolve(item, bindings, env) for item in value.items]
    raise TypeError(f"unexpected argument node {value!r}")


def execute(plan: Plan, registry: ToolRegistry, env: ToolEnv) -> ExecutionResult:
    """Run the plan to completion or halt at the first failing step."""
    if not plan.steps:
        raise EmptyPlan("refusing to execute a plan with no steps")
    bindings: dict[str, object] = {}
    trace: list[TraceEvent] = []
    for index, step in enumerate(plan.steps, start=1):
        started = time.time()
        args_digest = ""
        try:
            resolved = {
                name: _resolve(value, bindings, env) for name, value in step.args
            }
            args_digest = digest_args(resolved)
            output = registry.invoke(step.tool_name, env, resolved)
        except Exception as exc:
            trace.append(
                TraceEvent(
                    step_index=index,
                    tool_name=step.tool_name,
                    args_digest=args_digest,
                    output_digest="",
                    started_at=started,
                    ended_at=time.time(),
                    status="error",
                    error=f"{type(exc).__name__}: {exc}",
                )
            )
            raise StepFailed(index, step.tool_name, exc, trace) from exc
        trace.append(
            TraceEvent(
                step_index=index,
                tool_name=step.tool_name,
                args_digest=args_digest,
                output_digest=digest_value(output),
                started_at=started,
                ended_at=time.time(),
                status="ok",
            )
        )
        bindings[step.output_name] = output
    return ExecutionResult(bindings, trace)
