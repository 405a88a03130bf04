"""Plan synthesis: deterministic per-type templates and an LLM backend.

The template planner is a fixed function of (question, qa_type, object hint):
one canonical program per question type. The LLM backend asks a model for plan
text, statically validates it, retries a bounded number of times, and then
falls back to the template so a run never dies on a bad planner day.

Template shapes:
  Preparation    retrieve the object, caption what precedes its appearance
  Evolution      caption both sides of the object's appearance window
  Counterfactual retrieve the object, summarize the full video context
  Mistake        recognize actions over the whole video (optionally with a
                 task graph injected as text) and hint evidence at them
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

from ..dataset.loader import QAType
from ..errors import ParseError, PlanningFailed
from ..plan.ast import ListValue, Literal, Plan, Ref, ToolCall
from ..plan.grammar import GRAMMAR_EBNF
from ..plan.parser import parse_plan
from ..plan.validator import validate_plan

_QUOTED = re.compile(r"'([^']+)'|\"([^\"]+)\"")
_WORD = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")


class PlannerKind(str, Enum):
    LLM = "llm"
    TEMPLATE = "template"


@dataclass
class PlannerBackend:
    kind: PlannerKind = PlannerKind.TEMPLATE
    model_endpoint: Optional[str] = None
    prompt_template_id: str = "planner_v1"
    retries: int = 2
    fallback_to_template: bool = True
    n_frames: int = 50
    top_k: int = 4
    graph_text: Optional[str] = None
    client: object = None  # RemoteClient for llm kind

    def __post_init__(self):
        if self.kind is PlannerKind.LLM and not (self.model_endpoint or self.client):
            raise PlanningFailed("llm planner requires a model endpoint")


@dataclass(frozen=True)
class PlanningNote:
    """What happened while synthesizing the plan; surfaces in the trace."""

    event: str  # llm_attempt | fallback
    detail: str


def extract_object_hint(question: str) -> str:
    """Deterministic object guess: first quoted phrase, else the last word."""
    m = _QUOTED.search(question)
    if m:
        return (m.group(1) or m.group(2)).strip()
    words = _WORD.findall(question)
    return words[-1].lower() if words else ""


def _s(value) -> Literal:
    return Literal(value)


def template_plan(
    question: str,
    qa_type: QAType,
    object_hint: str,
    n_frames: int = 50,
    top_k: int = 4,
    graph_text: Optional[str] = None,
) -> Plan:
    load = ToolCall("v", "Video_Load", (("path", _s("$video")),))
    sample = ToolCall(
        "frames", "Frame_Sample", (("video", Ref("v")), ("n", _s(n_frames)))
    )
    retrieve = ToolCall(
        "hits",
        "Frame_Retrieve",
        (("frames", Ref("frames")), ("query", _s(object_hint)), ("top_k", _s(top_k))),
    )

    def answer(context_ref: str, frames_ref: str, hint_ref: str | None = None) -> ToolCall:
        args: list[tuple[str, object]] = [
            ("question", _s(question)),
            ("context", Ref(context_ref)),
            ("frames", Ref(frames_ref)),
        ]
        if hint_ref is not None:
            args.append(("evidence_hint", Ref(hint_ref)))
        return ToolCall("ans", "Answer_Gen", tuple(args))

    if qa_type is QAType.PREPARATION:
        steps = (
            load,
            sample,
            retrieve,
            ToolCall(
                "pre",
                "Frame_Trim",
                (
                    ("frames", Ref("frames")),
                    ("relation", _s("before")),
                    ("reference", Ref("hits")),
                ),
            ),
            ToolCall("caps", "Img_Caption", (("frames", Ref("pre")),)),
            ToolCall("ctx", "Context_Sum", (("texts", Ref("caps")),)),
            answer("ctx", "hits"),
        )
    elif qa_type is QAType.EVOLUTION:
        steps = (
            load,
            sample,
            retrieve,
            ToolCall(
                "early",
                "Frame_Trim",
                (
                    ("frames", Ref("frames")),
                    ("relation", _s("before")),
                    ("reference", Ref("hits")),
                ),
            ),
            ToolCall(
                "late",
                "Frame_Trim",
                (
                    ("frames", Ref("frames")),
                    ("relation", _s("after")),
                    ("reference", Ref("hits")),
                ),
            ),
            ToolCall("caps_early", "Img_Caption", (("frames", Ref("early")),)),
            ToolCall("caps_late", "Img_Caption", (("frames", Ref("late")),)),
            ToolCall(
                "ctx",
                "Context_Sum",
                (("texts", ListValue((Ref("caps_early"), Ref("caps_late")))),),
            ),
            answer("ctx", "hits"),
        )
    elif qa_type is QAType.COUNTERFACTUAL:
        steps = (
            load,
            sample,
            retrieve,
            ToolCall("caps", "Img_Caption", (("frames", Ref("frames")),)),
            ToolCall("ctx", "Context_Sum", (("texts", Ref("caps")),)),
            answer("ctx", "hits"),
        )
    elif qa_type is QAType.MISTAKE:
        texts: tuple = (Ref("segs"),)
        if graph_text:
            texts = (Ref("segs"), _s(graph_text))
        steps = (
            load,
            sample,
            ToolCall("segs", "Action_Rec", (("frames", Ref("frames")),)),
            ToolCall("ctx", "Context_Sum", (("texts", ListValue(texts)),)),
            answer("ctx", "frames", hint_ref="segs"),
        )
    else:  # pragma: no cover - enum is exhaustive
        raise PlanningFailed(f"no template for qa_type {qa_type!r}")
    return Plan(steps, question=question, qa_type=qa_type)


def load_prompt_template(prompt_template_id: str) -> str:
    path = Path(__file__).parent / f"{prompt_template_id.replace('planner_', 'planner_prompt_')}.txt"
    if not path.exists():
        path = Path(__file__).parent / "planner_prompt_v1.txt"
    return path.read_text(encoding="utf-8")


def render_prompt(question: str, qa_type: QAType, object_hint: str, catalog, backend: PlannerBackend) -> str:
    template = load_prompt_template(backend.prompt_template_id)
    catalog_text = json.dumps(
        [spec.to_jsonable() for spec in catalog], indent=2, sort_keys=True
    )
    return template.format(
        question=question,
        qa_type=qa_type.value,
        object_hint=object_hint,
        catalog=catalog_text,
        grammar=GRAMMAR_EBNF,
    )


def _plan_problems(plan: Plan, registry) -> list[str]:
    problems = [str(v) for v in validate_plan(plan, registry)]
    if not plan.steps:
        problems.append("plan has no steps")
    elif plan.steps[-1].tool_name != "Answer_Gen":
        problems.append("plan must end with Answer_Gen")
    return problems


def make_plan_traced(
    question: str,
    qa_type: QAType,
    object_hint: Optional[str],
    registry,
    backend: PlannerBackend,
) -> tuple[Plan, list[PlanningNote]]:
    """Synthesize a plan plus notes about retries and fallbacks."""
    hint = object_hint if object_hint else extract_object_hint(question)
    notes: list[PlanningNote] = []

    def template() -> Plan:
        plan = template_plan(
            question, qa_type, hint, backend.n_frames, backend.top_k, backend.graph_text
        )
        problems = _plan_problems(plan, registry)
        if problems:  # template must always validate; anything else is a bug
            raise PlanningFailed(f"template plan invalid: {problems}", [problems])
        return plan

    if backend.kind is PlannerKind.TEMPLATE:
        return template(), notes

    attempts: list[list[str]] = []
    prompt = render_prompt(question, qa_type, hint, registry.specs(), backend)
    for attempt in range(backend.retries + 1):
        text = _ask_llm(backend, prompt, attempt)
        try:
            plan = parse_plan(text)
        except ParseError as exc:
            attempts.append([f"parse error: {exc}"])
            notes.append(PlanningNote("llm_attempt", f"attempt {attempt + 1}: {exc}"))
            continue
        plan = Plan(plan.steps, question=question, qa_type=qa_type)
        problems = _plan_problems(plan, registry)
        if not problems:
            return plan, notes
        attempts.append(problems)
        notes.append(
            PlanningNote("llm_attempt", f"attempt {attempt + 1}: {'; '.join(problems)}")
        )
    if backend.fallback_to_template:
        notes.append(
            PlanningNote("fallback", f"template fallback after {len(attempts)} invalid attempts")
        )
        return template(), notes
    raise PlanningFailed(
        f"planner produced no valid plan in {len(attempts)} attempts", attempts
    )


def make_plan(
    question: str,
    qa_type: QAType,
    object_hint: Optional[str],
    registry,
    backend: PlannerBackend,
) -> Plan:
    plan, _ = make_plan_traced(question, qa_type, object_hint, registry, backend)
    return plan


def _ask_llm(backend: PlannerBackend, prompt: str, attempt: int) -> str:
    client = backend.client
    if client is None:
        from ..tools.remote import RemoteClient

        client = RemoteClient(endpoint=backend.model_endpoint)
        backend.client = client
    result = client.post(
        "/v1/plan",
        {
            "prompt": prompt,
            "prompt_id": backend.prompt_template_id,
            "attempt": attempt,
        },
    )
    return result.get("plan_text", "")
