"""Exception taxonomy shared across the engine.

Everything raised on a domain-level failure derives from ProcqaError so the
CLI can map it to exit code 1; genuine I/O problems stay OSError and map to 2.
"""

from __future__ import annotations


class ProcqaError(Exception):
    """Base class for all engine-domain failures."""


# -- temporal ----------------------------------------------------------------

class InvalidSpan(ProcqaError, ValueError):
    """Span endpoints violate 0 <= start_ms < end_ms."""


# -- dataset -----------------------------------------------------------------

class SchemaError(ProcqaError):
    """A dataset or fixture file field is missing or ill-typed.

    Carries the JSON path of the offending field.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class ReferentialError(ProcqaError):
    """A QA item points at a video_id that does not exist."""


class SpanError(ProcqaError):
    """Evidence spans fall outside the video duration."""


class DimensionMismatch(ProcqaError, ValueError):
    pass


class ZeroVector(ProcqaError, ValueError):
    pass


class MissingAnnotation(ProcqaError):
    """A video lacks the action sequence or embedding the filter needs."""


# -- parsing (plan DSL and DOT graphs) ---------------------------------------

class ParseError(ProcqaError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class UnsupportedConstruct(ParseError):
    """Legal DOT that the minimal subset deliberately rejects (subgraphs)."""


class InvalidGraph(ProcqaError, ValueError):
    """Task graph invariant violation (self-loop, dangling edge)."""


class DuplicateOutput(ParseError):
    """A plan assigns the same output name twice."""


class UndefinedReference(ParseError):
    """A plan argument references a name no earlier step produced."""


# -- tools -------------------------------------------------------------------

class ToolError(ProcqaError):
    """Base for failures inside a tool invocation."""


class NotFound(ToolError):
    pass


class CorruptAsset(ToolError):
    pass


class InvalidCount(ToolError, ValueError):
    pass


class InvalidArgs(ToolError, ValueError):
    pass


class BackendUnavailable(ToolError):
    """Remote backend unreachable or reporting an outage."""


class EmptyEvidence(ToolError):
    """Answer generation produced no evidence and no hint was given."""


# -- orchestrator ------------------------------------------------------------

class PlanningFailed(ProcqaError):
    def __init__(self, message: str, attempts: list | None = None):
        super().__init__(message)
        # one violation list per failed attempt, for post-mortems
        self.attempts = attempts or []


class EmptyPlan(ProcqaError):
    pass


class StepFailed(ProcqaError):
    """A plan step raised; carries the step index and the trace so far."""

    def __init__(self, step_index: int, tool_name: str, cause: Exception, trace=None):
        super().__init__(f"step {step_index} ({tool_name}): {cause}")
        self.step_index = step_index
        self.tool_name = tool_name
        self.cause = cause
        self.trace = trace or []


# -- eval --------------------------------------------------------------------

class EmptyGroundTruth(ProcqaError, ValueError):
    pass


class JudgeParseError(ProcqaError):
    pass


class JudgeScoreError(ProcqaError, ValueError):
    """A judge dimension is not an integer in [0, 5]."""


class UnknownItem(ProcqaError, KeyError):
    pass


class ConfigError(ProcqaError, ValueError):
    """Run configuration is internally inconsistent."""
