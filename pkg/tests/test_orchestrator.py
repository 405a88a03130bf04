from __future__ import annotations

import json

import pytest

from procqa.config import RunConfig
from procqa.dataset.loader import QAType
from procqa.errors import EmptyPlan, PlanningFailed, StepFailed
from procqa.fixtures.suite import fixture_oracle
from procqa.orchestrator.executor import digest_value, execute
from procqa.orchestrator.planner import (
    PlannerBackend,
    PlannerKind,
    extract_object_hint,
    make_plan,
    make_plan_traced,
    template_plan,
)
from procqa.orchestrator.runner import (
    answer_question,
    build_run_context,
    predictions_to_text,
    run_benchmark,
)
from procqa.plan import format_plan, validate_plan
from procqa.tools.local import LOCAL_IMPLS
from procqa.tools.spec import Binding, ToolRegistry

PREP_QUESTION = "Which steps prepared the 'butter' before the batter was mixed?"

EXPECTED_PREP_PLAN = f"""\
#! question: "{PREP_QUESTION}"
#! qa_type: Preparation
v = Video_Load(path="$video")
frames = Frame_Sample(video=v, n=50)
hits = Frame_Retrieve(frames=frames, query="butter", top_k=4)
pre = Frame_Trim(frames=frames, relation="before", reference=hits)
caps = Img_Caption(frames=pre)
ctx = Context_Sum(texts=caps)
ans = Answer_Gen(question="{PREP_QUESTION}", context=ctx, frames=hits)
"""


class TestObjectHint:
    def test_quoted_phrase_wins(self):
        assert extract_object_hint("How did the 'melted butter' change?") == "melted butter"

    def test_double_quotes(self):
        assert extract_object_hint('Where is the "whisk" stored?') == "whisk"

    def test_falls_back_to_last_word(self):
        assert extract_object_hint("What happened to the kettle?") == "kettle"


class TestTemplates:
    def test_preparation_template_golden(self, local_registry):
        backend = PlannerBackend(kind=PlannerKind.TEMPLATE)
        plan = make_plan(PREP_QUESTION, QAType.PREPARATION, None, local_registry, backend)
        assert format_plan(plan) == EXPECTED_PREP_PLAN
        assert len(plan.steps) == 7

    @pytest.mark.parametrize("qa_type", list(QAType))
    def test_every_template_validates_clean(self, qa_type, local_registry):
        plan = template_plan("What about the 'butter'?", qa_type, "butter")
        assert validate_plan(plan, local_registry) == []
        assert plan.steps[-1].tool_name == "Answer_Gen"

    def test_template_deterministic(self, local_registry):
        backend = PlannerBackend(kind=PlannerKind.TEMPLATE)
        a = make_plan(PREP_QUESTION, QAType.PREPARATION, None, local_registry, backend)
        b = make_plan(PREP_QUESTION, QAType.PREPARATION, None, local_registry, backend)
        assert a == b

    def test_mistake_template_injects_task_graph(self, local_registry):
        backend = PlannerBackend(kind=PlannerKind.TEMPLATE, graph_text="a -> b")
        plan = make_plan("Which 'mistake'?", QAType.MISTAKE, None, local_registry, backend)
        assert validate_plan(plan, local_registry) == []
        assert '"a -> b"' in format_plan(plan)
        assert any(s.tool_name == "Action_Rec" for s in plan.steps)


class StubPlannerClient:
    """Scripted /v1/plan endpoint: yields each body in turn."""

    def __init__(self, *texts: str):
        self.texts = list(texts)
        self.calls = 0

    def post(self, path, payload):
        assert path == "/v1/plan"
        self.calls += 1
        return {"plan_text": self.texts[min(self.calls - 1, len(self.texts) - 1)]}


VALID_LLM_PLAN = f"""\
v = Video_Load(path="$video")
frames = Frame_Sample(video=v, n=8)
caps = Img_Caption(frames=frames)
ctx = Context_Sum(texts=caps)
ans = Answer_Gen(question="{PREP_QUESTION}", context=ctx, frames=frames)
"""


class TestLLMPlanner:
    def test_invalid_twice_then_valid(self, local_registry):
        client = StubPlannerClient("nonsense ===", "x = Nope()", VALID_LLM_PLAN)
        backend = PlannerBackend(
            kind=PlannerKind.LLM, model_endpoint="http://p", retries=2, client=client
        )
        plan, notes = make_plan_traced(
            PREP_QUESTION, QAType.PREPARATION, "butter", local_registry, backend
        )
        assert len(plan.steps) == 5
        assert validate_plan(plan, local_registry) == []
        retry_notes = [n for n in notes if n.event == "llm_attempt"]
        assert len(retry_notes) == 2

    def test_always_invalid_falls_back_to_template(self, local_registry):
        client = StubPlannerClient("garbage(")
        backend = PlannerBackend(
            kind=PlannerKind.LLM, model_endpoint="http://p", retries=2, client=client
        )
        plan, notes = make_plan_traced(
            PREP_QUESTION, QAType.PREPARATION, "butter", local_registry, backend
        )
        assert [n.event for n in notes] == ["llm_attempt"] * 3 + ["fallback"]
        assert format_plan(plan) == EXPECTED_PREP_PLAN  # the template

    def test_fallback_disabled_raises_with_attempts(self, local_registry):
        client = StubPlannerClient('x = Nop_Tool(q="y")')
        backend = PlannerBackend(
            kind=PlannerKind.LLM,
            model_endpoint="http://p",
            retries=1,
            fallback_to_template=False,
            client=client,
        )
        with pytest.raises(PlanningFailed) as err:
            make_plan_traced(PREP_QUESTION, QAType.PREPARATION, "x", local_registry, backend)
        assert len(err.value.attempts) == 2

    def test_llm_requires_endpoint(self):
        with pytest.raises(PlanningFailed):
            PlannerBackend(kind=PlannerKind.LLM)

    def test_plan_metadata_overridden_with_actual_question(self, local_registry):
        client = StubPlannerClient(VALID_LLM_PLAN)
        backend = PlannerBackend(kind=PlannerKind.LLM, model_endpoint="http://p", client=client)
        plan, _ = make_plan_traced("Q?", QAType.EVOLUTION, "butter", local_registry, backend)
        assert plan.question == "Q?"
        assert plan.qa_type is QAType.EVOLUTION


class TestExecute:
    def test_butter_plan_seven_ok_events(self, fixture_env, local_registry):
        plan = template_plan(PREP_QUESTION, QAType.PREPARATION, "butter")
        result = execute(plan, local_registry, fixture_env)
        assert [e.status for e in result.trace] == ["ok"] * 7
        assert [e.step_index for e in result.trace] == list(range(1, 8))
        final = result.final_value()
        assert final.answer == "The butter was unwrapped and then melted in the hot pan."

    def test_halts_on_step_error(self, fixture_env):
        impls = dict(LOCAL_IMPLS)

        def broken_retrieve(env, frames, query, top_k):
            from procqa.errors import BackendUnavailable

            raise BackendUnavailable("synthetic outage")

        impls["Frame_Retrieve"] = broken_retrieve
        registry = ToolRegistry.build(Binding.LOCAL, impls)
        plan = template_plan(PREP_QUESTION, QAType.PREPARATION, "butter")
        with pytest.raises(StepFailed) as err:
            execute(plan, registry, fixture_env)
        assert err.value.step_index == 3
        trace = err.value.trace
        assert len(trace) == 3
        assert [e.status for e in trace] == ["ok", "ok", "error"]

    def test_empty_plan_rejected(self, fixture_env, local_registry):
        from procqa.plan import Plan

        with pytest.raises(EmptyPlan):
            execute(Plan(()), local_registry, fixture_env)

    def test_digests_rederivable_from_bindings(self, fixture_env, local_registry):
        plan = template_plan(PREP_QUESTION, QAType.PREPARATION, "butter")
        result = execute(plan, local_registry, fixture_env)
        for step, event in zip(plan.steps, result.trace):
            assert event.output_digest == digest_value(result.bindings[step.output_name])

    def test_trace_count_equals_attempted_steps(self, fixture_env, local_registry):
        plan = template_plan(PREP_QUESTION, QAType.EVOLUTION, "butter")
        result = execute(plan, local_registry, fixture_env)
        assert len(result.trace) == len(plan.steps)


class TestAnswerQuestion:
    def test_fixture_golden(self, butter_suite, butter_dataset, fixture_ctx):
        item = butter_dataset.item("butter_prep")
        video = butter_dataset.video_by_id[item.video_id]
        pred = answer_question(video, item, fixture_ctx)
        expected = fixture_oracle(butter_suite, "butter_prep")
        assert pred.answer == expected.answer
        assert pred.evidence == expected.evidence
        assert pred.trace_ref == "butter_prep.trace.jsonl"

    def test_trace_file_persisted(self, butter_dataset, fixture_ctx, tmp_path):
        item = butter_dataset.item("butter_mistake")
        video = butter_dataset.video_by_id[item.video_id]
        pred = answer_question(video, item, fixture_ctx)
        trace_path = (
            tmp_path / "out" / pred.trace_ref
        )
        lines = trace_path.read_text().strip().split("\n")
        events = [json.loads(line) for line in lines]
        assert [e["status"] for e in events] == ["ok"] * 5
        assert events[0]["tool_name"] == "Video_Load"

    def test_unkeyed_item_surfaces_empty_evidence(self, butter_suite, fixture_ctx):
        from procqa.dataset.loader import QAItem
        from procqa.temporal import SpanSet, TimeSpan

        ds = butter_suite.to_dataset()
        stray = QAItem(
            qa_id="stray",
            video_id="butter_600s",
            qa_type=QAType.COUNTERFACTUAL,
            question="What about the 'unicorn'?",
            gold_answer="n/a",
            gold_evidence=SpanSet((TimeSpan(0, 1000),)),
        )
        with pytest.raises(StepFailed) as err:
            answer_question(ds.video_by_id["butter_600s"], stray, fixture_ctx)
        assert "EmptyEvidence" in str(err.value.cause.__class__.__name__) or "evidence" in str(err.value)
        assert err.value.qa_id == "stray"

    def test_byte_identical_across_runs(self, butter_dataset, butter_suite, tmp_path):
        from procqa.config import RunConfig

        item = butter_dataset.item("butter_evol")
        video = butter_dataset.video_by_id[item.video_id]
        preds = []
        for run in range(2):
            ctx = build_run_context(
                RunConfig(output_dir=str(tmp_path / f"run{run}")), suite=butter_suite
            )
            preds.append(answer_question(video, item, ctx))
        assert predictions_to_text([preds[0]]) == predictions_to_text([preds[1]])


class TestRunBenchmark:
    def test_one_prediction_per_item(self, butter_dataset, fixture_ctx):
        run = run_benchmark(butter_dataset, fixture_ctx)
        assert len(run.predictions) == 4
        assert [p.qa_id for p in run.predictions] == [i.qa_id for i in butter_dataset.items]
        assert run.failures == []

    def test_parallelism_1_vs_8_byte_identical(self, butter_suite, butter_dataset):
        texts = []
        for workers in (1, 8):
            ctx = build_run_context(
                RunConfig(parallelism=workers), suite=butter_suite
            )
            run = run_benchmark(butter_dataset, ctx)
            texts.append(predictions_to_text(run.predictions))
        assert texts[0] == texts[1]

    def test_failing_item_recorded_not_fatal(self, butter_suite, butter_dataset):
        from procqa.dataset.loader import QAItem
        from procqa.dataset.loader import build_dataset
        from procqa.temporal import SpanSet, TimeSpan

        stray = QAItem(
            qa_id="stray",
            video_id="butter_600s",
            qa_type=QAType.COUNTERFACTUAL,
            question="What about the 'unicorn'?",
            gold_answer="n/a",
            gold_evidence=SpanSet((TimeSpan(0, 1000),)),
        )
        ds = build_dataset(list(butter_dataset.videos), list(butter_dataset.items) + [stray])
        ctx = build_run_context(RunConfig(), suite=butter_suite)
        run = run_benchmark(ds, ctx)
        assert len(run.predictions) == 4
        assert len(run.failures) == 1
        assert run.failures[0].qa_id == "stray"
        assert run.failures[0].error == "StepFailed"
