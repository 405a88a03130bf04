"""Per-question pipeline and the benchmark harness over a whole dataset.

Under the template planner and fixture backend the entire pipeline is a pure
function of (dataset, config): predictions are assembled in dataset order and
contain no wall-clock fields, so two runs serialize byte-identically whatever
the parallelism.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..config import RunConfig
from ..dataset.loader import Dataset, QAItem, VideoMeta
from ..errors import PlanningFailed, ProcqaError, StepFailed
from ..fixtures.suite import FixtureSuite, load_fixture_suite
from ..jsonutil import atomic_write_text, canonical_json, dump_pretty
from ..plan.formatter import format_plan
from ..temporal import SpanSet, TimeSpan, spanset_clip, spanset_to_seconds
from ..tools.env import ToolEnv
from ..tools.local import build_local_registry
from ..tools.remote import RemoteClient, build_remote_registry
from ..tools.spec import ToolRegistry
from ..tools.values import AnswerValue
from .executor import TraceEvent, execute
from .planner import PlannerBackend, PlannerKind, make_plan_traced


@dataclass(frozen=True)
class Prediction:
    qa_id: str
    answer: str
    evidence: SpanSet
    plan_text: str
    trace_ref: str

    def to_jsonable(self) -> dict:
        return {
            "qa_id": self.qa_id,
            "answer": self.answer,
            "evidence": spanset_to_seconds(self.evidence),
            "plan_text": self.plan_text,
            "trace_ref": self.trace_ref,
        }


@dataclass(frozen=True)
class FailureRecord:
    qa_id: str
    error: str
    message: str


@dataclass
class BenchmarkRun:
    predictions: list[Prediction]
    failures: list[FailureRecord]


@dataclass
class RunContext:
    """Everything answer_question needs, built once per run."""

    config: RunConfig
    registry: ToolRegistry
    planner: PlannerBackend
    suite: Optional[FixtureSuite] = None
    remote: Optional[RemoteClient] = None


def build_run_context(config: RunConfig, suite: Optional[FixtureSuite] = None) -> RunContext:
    config.validate()
    if config.backend_mode == "fixture":
        registry = build_local_registry()
        remote = None
        if suite is None and config.dataset_path:
            suite = load_fixture_suite(config.dataset_path)
    else:
        registry = build_remote_registry()
        remote = RemoteClient(endpoint=config.tool_endpoint, api_key=config.api_key)
    graph_text = None
    if config.task_graph_path:
        from ..dataset.taskgraph import parse_task_graph

        graph = parse_task_graph(Path(config.task_graph_path).read_text(encoding="utf-8"))
        graph_text = "\n".join(graph.to_text_lines())
    planner = PlannerBackend(
        kind=PlannerKind(config.planner_mode),
        model_endpoint=config.planner_endpoint,
        retries=config.planner_retries,
        n_frames=config.frames_n,
        top_k=config.top_k,
        graph_text=graph_text,
    )
    return RunContext(config=config, registry=registry, planner=planner, suite=suite, remote=remote)


def _planning_events(notes) -> list[TraceEvent]:
    return [
        TraceEvent(
            step_index=0,
            tool_name=f"planner.{note.event}",
            args_digest="",
            output_digest="",
            started_at=0.0,
            ended_at=0.0,
            status="ok" if note.event == "fallback" else "error",
            error=note.detail,
        )
        for note in notes
    ]


def _tag(exc: ProcqaError, qa_id: str) -> ProcqaError:
    exc.qa_id = qa_id
    return exc


def answer_question(video: VideoMeta, item: QAItem, ctx: RunContext) -> Prediction:
    """Plan, execute, and package one question into a Prediction."""
    if item.video_id != video.video_id:
        raise ProcqaError(f"item {item.qa_id!r} is not bound to video {video.video_id!r}")
    try:
        plan, notes = make_plan_traced(
            item.question,
            item.qa_type,
            ctx.config.object_hint,
            ctx.registry,
            ctx.planner,
        )
    except PlanningFailed as exc:
        raise _tag(exc, item.qa_id)
    env = ToolEnv(video=video, suite=ctx.suite, remote=ctx.remote)
    trace: list[TraceEvent] = _planning_events(notes)
    try:
        result = execute(plan, ctx.registry, env)
        trace.extend(result.trace)
    except StepFailed as exc:
        trace.extend(exc.trace)
        _persist_trace(ctx, item.qa_id, trace)
        raise _tag(exc, item.qa_id)
    final = result.final_value()
    if not isinstance(final, AnswerValue):
        raise _tag(
            PlanningFailed(f"final step produced {type(final).__name__}, not an answer"),
            item.qa_id,
        )
    evidence = spanset_clip(final.evidence, TimeSpan(0, video.duration_ms))
    trace_ref = _persist_trace(ctx, item.qa_id, trace)
    return Prediction(
        qa_id=item.qa_id,
        answer=final.answer,
        evidence=evidence,
        plan_text=format_plan(plan),
        trace_ref=trace_ref,
    )


def _persist_trace(ctx: RunContext, qa_id: str, trace: list[TraceEvent]) -> str:
    name = f"{qa_id}.trace.jsonl"
    if not ctx.config.output_dir:
        return name
    os.makedirs(ctx.config.output_dir, exist_ok=True)
    lines = "".join(canonical_json(ev.to_jsonable()) + "\n" for ev in trace)
    atomic_write_text(os.path.join(ctx.config.output_dir, name), lines)
    return name


def run_benchmark(dataset: Dataset, ctx: RunContext) -> BenchmarkRun:
    """One Prediction per item; per-item failures are recorded, never fatal.

    Work may run on several threads, but results are keyed back to dataset
    order, so the outcome is independent of scheduling.
    """

    def attempt(item: QAItem):
        video = dataset.video_by_id[item.video_id]
        try:
            return answer_question(video, item, ctx), None
        except ProcqaError as exc:
            return None, FailureRecord(item.qa_id, type(exc).__name__, str(exc))

    workers = max(1, min(ctx.config.parallelism, len(dataset.items) or 1))
    if workers == 1:
        outcomes = [attempt(item) for item in dataset.items]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(attempt, dataset.items))
    predictions = [pred for pred, _ in outcomes if pred is not None]
    failures = [fail for _, fail in outcomes if fail is not None]
    return BenchmarkRun(predictions, failures)


def predictions_to_text(predictions: list[Prediction]) -> str:
    return dump_pretty([p.to_jsonable() for p in predictions])


def save_predictions(predictions: list[Prediction], path: str) -> None:
    atomic_write_text(path, predictions_to_text(predictions))
