"""Acceptance suite: one test per exit criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the criterion lines.
Everything here is fixture/stub based; no network, no models.
"""

from __future__ import annotations

import random
import string
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from oracles import full_matrix_edit_distance, oracle_mean_iou
from procqa.config import RunConfig
from procqa.dataset.filters import ActionSequence, blind_filter, edit_distance, redundancy_filter
from procqa.dataset.loader import QAType, Source, VideoMeta, View, dataset_stats, build_dataset
from procqa.dataset.taskgraph import parse_task_graph
from procqa.errors import InvalidGraph, JudgeScoreError, ParseError
from procqa.eval.judge import JudgeScore, StubJudgeBackend, judge_answer
from procqa.eval.matching import mean_iou
from procqa.fixtures.suite import fixture_oracle, load_fixture_suite, shipped_suite_path
from procqa.orchestrator.runner import (
    answer_question,
    build_run_context,
    run_benchmark,
    save_predictions,
)
from procqa.plan import ListValue, Literal, Plan, Ref, ToolCall, format_plan, parse_plan
from procqa.temporal import SpanSet, TimeSpan, spanset_normalize
from test_plan import INVALID_CORPUS
from test_taskgraph import CORPUS as DOT_CORPUS


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


def random_spanset(rng: random.Random, lo: int, hi: int, horizon: int = 10**6) -> SpanSet:
    spans = []
    for _ in range(rng.randint(lo, hi)):
        start = rng.randint(0, horizon - 1)
        spans.append(TimeSpan(start, rng.randint(start + 1, horizon)))
    return spanset_normalize(spans)


def test_miou_oracle_equivalence():
    with criterion("mIoU oracle equivalence (1,000 random pairs, exact, <10s)"):
        rng = random.Random(0xBEEF)
        started = time.monotonic()
        checked = 0
        while checked < 1000:
            pred = random_spanset(rng, 0, 4)
            gt = random_spanset(rng, 1, 4)
            assert mean_iou(pred, gt) == oracle_mean_iou(pred, gt)
            checked += 1
        elapsed = time.monotonic() - started
        assert elapsed < 10.0, f"oracle comparison took {elapsed:.1f}s"


def test_equal_count_pairing_exactness():
    with criterion("paired-mean exactness on equal counts (single pair 1/3)"):
        assert mean_iou(
            SpanSet((TimeSpan(0, 10000),)), SpanSet((TimeSpan(5000, 15000),))
        ) == float(Fraction(1, 3))
        # equal-count case: hand-paired mean of per-pair IoUs
        pred = spanset_normalize([TimeSpan(0, 6000), TimeSpan(20000, 30000)])
        gt = spanset_normalize([TimeSpan(4000, 10000), TimeSpan(19000, 29000)])
        hand = (Fraction(2000, 10000) + Fraction(9000, 11000)) / 2
        assert mean_iou(pred, gt) == float(hand)
        rng = random.Random(3)
        for _ in range(200):
            n = rng.randint(1, 4)
            pred = random_spanset(rng, n, n)
            gt = random_spanset(rng, n, n)
            if len(pred) != len(gt) or not gt:
                continue
            assert mean_iou(pred, gt) == oracle_mean_iou(pred, gt)


_TOOLS = ["Video_Load", "Frame_Sample", "Tool_X", "Do_Thing", "Answer_Gen", "T"]


def _random_value(rng: random.Random, names: list[str], depth: int = 0):
    kinds = ["str", "int", "float", "bool", "span"]
    if names:
        kinds.append("ref")
    if depth == 0:
        kinds.append("list")
    kind = rng.choice(kinds)
    if kind == "str":
        alphabet = string.ascii_letters + string.digits + ' _-."\\\n\t'
        return Literal("".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12))))
    if kind == "int":
        return Literal(rng.randint(-(10**9), 10**9))
    if kind == "float":
        return Literal(rng.uniform(-1e6, 1e6))
    if kind == "bool":
        return Literal(rng.random() < 0.5)
    if kind == "span":
        start = rng.randint(0, 10**8)
        return Literal(TimeSpan(start, start + rng.randint(1, 10**6)))
    if kind == "ref":
        return Ref(rng.choice(names))
    items = tuple(_random_value(rng, names, depth + 1) for _ in range(rng.randint(0, 4)))
    numeric = lambda v: isinstance(v, Literal) and isinstance(v.value, (int, float)) and not isinstance(v.value, bool)
    if len(items) == 2 and all(numeric(v) for v in items):
        items = items + (Literal(0),)  # two-number lists read back as spans
    return ListValue(items)


def _random_plan(rng: random.Random) -> Plan:
    n = rng.randint(1, 7)
    names: list[str] = []
    steps = []
    for i in range(n):
        name = f"v{i}"
        n_args = rng.randint(0, 4)
        params = rng.sample(["a", "b", "c", "frames", "query", "n", "x", "y"], n_args)
        args = tuple((p, _random_value(rng, names)) for p in params)
        steps.append(ToolCall(name, rng.choice(_TOOLS), args))
        names.append(name)
    question = "" if rng.random() < 0.5 else "What happened to the 'butter'?"
    qa_type = None if rng.random() < 0.5 else rng.choice(list(QAType))
    return Plan(tuple(steps), question=question, qa_type=qa_type)


def test_plan_round_trip_fuzz_and_invalid_corpus():
    with criterion("plan round trip (1,000 fuzzed) + invalid corpus classes"):
        rng = random.Random(0x5EED)
        for _ in range(1000):
            plan = _random_plan(rng)
            assert parse_plan(format_plan(plan)) == plan
        assert len(INVALID_CORPUS) >= 16
        for text, expected in INVALID_CORPUS:
            with pytest.raises(expected):
                parse_plan(text)
        from test_plan import TestInvalidCorpus
        from procqa.plan import validate_plan
        from procqa.tools.local import build_local_registry

        registry = build_local_registry()
        corpus = TestInvalidCorpus.VALIDATION_CORPUS
        assert len(INVALID_CORPUS) + len(corpus) >= 20
        for text, kind, step in corpus:
            violations = validate_plan(parse_plan(text), registry)
            assert any(v.kind is kind and v.step == step for v in violations)


def test_end_to_end_fixture_golden():
    with criterion("end-to-end butter golden (4 types; IoU 1.0; judge 5.0; <5s)"):
        started = time.monotonic()
        suite = load_fixture_suite(shipped_suite_path())
        dataset = suite.to_dataset()
        ctx = build_run_context(RunConfig(), suite=suite)
        judge = StubJudgeBackend()
        assert len(suite.items) == 4
        assert {i.qa_type for i in suite.items} == set(QAType)
        for item in suite.items:
            video = dataset.video_by_id[item.video_id]
            pred = answer_question(video, item, ctx)
            expected = fixture_oracle(suite, item.qa_id)
            assert pred.answer == expected.answer
            assert pred.evidence == expected.evidence
            assert mean_iou(pred.evidence, expected.evidence) == 1.0
            score = judge_answer(item.question, item.gold_answer, pred.answer, judge)
            assert score.average == 5.0
        elapsed = time.monotonic() - started
        assert elapsed < 5.0, f"end-to-end run took {elapsed:.1f}s"


def test_determinism_under_parallelism(tmp_path):
    with criterion("determinism: parallelism 1 vs 8 byte-identical predictions"):
        suite = load_fixture_suite(shipped_suite_path())
        dataset = suite.to_dataset()
        paths = []
        for workers in (1, 8):
            ctx = build_run_context(RunConfig(parallelism=workers), suite=suite)
            run = run_benchmark(dataset, ctx)
            assert not run.failures
            path = tmp_path / f"predictions_p{workers}.json"
            save_predictions(run.predictions, str(path))
            paths.append(path)
        assert paths[0].read_bytes() == paths[1].read_bytes()


def test_judge_arithmetic_exact():
    with criterion("judge arithmetic: average exact; out-of-range rejected"):
        for ci in range(6):
            for do_ in range(6):
                for cu in range(6):
                    for tu in range(6):
                        score = JudgeScore.from_dims(ci, do_, cu, tu)
                        assert score.average == (ci + do_ + cu + tu) / 4
        for bad in [(6, 0, 0, 0), (0, -1, 0, 0), (0, 0, 7, 0), (0, 0, 0, 99)]:
            with pytest.raises(JudgeScoreError):
                JudgeScore.from_dims(*bad)


def _video(i: int, source: Source) -> VideoMeta:
    return VideoMeta(f"v{i}", source, 600000, View.EGO, f"act{i % 5}", f"v{i}.mp4")


def test_stats_reproduction():
    with criterion("stats: type mix 36.8/31.7/16.9/14.6 (±0.05pp); sources (±0.1pp)"):
        videos = [_video(i, Source.COIN) for i in range(4)]
        items = []
        counts = {
            QAType.PREPARATION: 189,
            QAType.MISTAKE: 163,
            QAType.COUNTERFACTUAL: 87,
            QAType.EVOLUTION: 75,
        }
        j = 0
        from procqa.dataset.loader import QAItem

        for qa_type, count in counts.items():
            for _ in range(count):
                items.append(
                    QAItem(
                        qa_id=f"q{j}",
                        video_id=videos[j % 4].video_id,
                        qa_type=qa_type,
                        question="q?",
                        gold_answer="a",
                        gold_evidence=SpanSet((TimeSpan(0, 1000),)),
                        error_type="wrong order" if qa_type is QAType.MISTAKE else None,
                    )
                )
                j += 1
        stats = dataset_stats(build_dataset(videos, items))
        assert stats.n_qa == 514
        expected_pct = {
            QAType.PREPARATION: 36.8,
            QAType.MISTAKE: 31.7,
            QAType.COUNTERFACTUAL: 16.9,
            QAType.EVOLUTION: 14.6,
        }
        for qa_type, pct in expected_pct.items():
            got = stats.qa_type_fractions[qa_type] * 100
            assert abs(got - pct) <= 0.05, f"{qa_type.value}: {got:.3f}% vs {pct}%"

        manifest = (
            [_video(i, Source.CAPTAINCOOK4D) for i in range(62)]
            + [_video(62 + i, Source.COIN) for i in range(39)]
            + [_video(101 + i, Source.EGOPER) for i in range(6)]
        )
        stats = dataset_stats(build_dataset(manifest, []))
        assert stats.n_videos == 107
        expected_sources = {
            Source.CAPTAINCOOK4D: 58.3,
            Source.COIN: 36.1,
            Source.EGOPER: 5.6,
        }
        for source, pct in expected_sources.items():
            got = stats.source_fractions[source] * 100
            assert abs(got - pct) <= 0.1, (
                f"{source.value}: computed {got:.4f}% differs from {pct}% by "
                f"{abs(got - pct):.4f}pp (> 0.1pp); no integer count of 107 videos "
                f"can reproduce these percentages"
            )


def test_filters_acceptance():
    with criterion("filters: edit-distance oracle; redundancy scoping; blind boundary"):
        rng = random.Random(11)
        alphabet = ["a", "b", "c", "d", "e"]
        for _ in range(500):
            a = [rng.choice(alphabet) for _ in range(rng.randint(0, 10))]
            b = [rng.choice(alphabet) for _ in range(rng.randint(0, 10))]
            assert edit_distance(
                ActionSequence.of(a), ActionSequence.of(b)
            ) == full_matrix_edit_distance(a, b)

        same_act = [
            VideoMeta("d1", Source.COIN, 1000, View.EGO, "coffee", "d1"),
            VideoMeta("d2", Source.COIN, 1000, View.EGO, "coffee", "d2"),
        ]
        cross_act = [
            VideoMeta("x1", Source.COIN, 1000, View.EGO, "coffee", "x1"),
            VideoMeta("x2", Source.COIN, 1000, View.EGO, "tea", "x2"),
        ]
        seqs = {v: ActionSequence.of(("grind", "brew")) for v in ("d1", "d2", "x1", "x2")}
        embs = {"d1": [1.0, 0.0], "d2": [0.0, 1.0], "x1": [1.0, 0.0], "x2": [0.0, 1.0]}
        assert redundancy_filter(same_act, seqs, embs) == ["d1"]
        assert redundancy_filter(cross_act, seqs, embs) == ["x1", "x2"]

        from procqa.dataset.loader import QAItem

        def item(qa_id: str) -> QAItem:
            return QAItem(
                qa_id=qa_id,
                video_id="v",
                qa_type=QAType.PREPARATION,
                question=qa_id,
                gold_answer="g",
                gold_evidence=SpanSet((TimeSpan(0, 1000),)),
            )

        averages = {"low": 2.75, "at": 3.0, "above": 3.25}

        def judge_fn(question, gold, answer):
            quarters = round(averages[question] * 4)
            base, extra = divmod(quarters, 4)
            return JudgeScore.from_dims(*(base + (1 if k < extra else 0) for k in range(4)))

        kept, audits = blind_filter(
            [item("low"), item("at"), item("above")],
            lambda q: "blind answer",
            judge_fn,
            threshold=3.0,
        )
        assert [i.qa_id for i in kept] == ["low"]  # strictly below threshold kept
        assert [a.dropped for a in audits] == [False, True, True]


def test_dot_ingestion():
    with criterion("DOT ingestion: 10-graph corpus; self-loops rejected"):
        assert len(DOT_CORPUS) == 10
        for dot, nodes, edges in DOT_CORPUS:
            graph = parse_task_graph(dot)
            assert graph.nodes == frozenset(nodes)
            assert graph.edges == frozenset(edges)
        with pytest.raises(InvalidGraph):
            parse_task_graph("digraph { a -> a; }")
        with pytest.raises(ParseError):
            parse_task_graph("digraph { a -> ; }")
