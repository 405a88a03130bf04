from .executor import ExecutionResult, TraceEvent, digest_args, digest_value, execute
from .planner import (
    PlannerBackend,
    PlannerKind,
    PlanningNote,
    extract_object_hint,
    make_plan,
    make_plan_traced,
    template_plan,
)
from .runner import (
    BenchmarkRun,
    FailureRecord,
    Prediction,
    RunContext,
    answer_question,
    build_run_context,
    predictions_to_text,
    run_benchmark,
    save_predictions,
)

__all__ = [
    "BenchmarkRun",
    "ExecutionResult",
    "FailureRecord",
    "PlannerBackend",
    "PlannerKind",
    "PlanningNote",
    "Prediction",
    "RunContext",
    "TraceEvent",
    "answer_question",
    "build_run_context",
    "digest_args",
    "digest_value",
    "execute",
    "extract_object_hint",
    "make_plan",
    "make_plan_traced",
    "predictions_to_text",
    "run_benchmark",
    "save_predictions",
    "template_plan",
]
