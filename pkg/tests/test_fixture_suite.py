from __future__ import annotations

import json

import pytest

from procqa.dataset.loader import QAType
from procqa.errors import SchemaError, UnknownItem
from procqa.eval.judge import StubJudgeBackend, judge_answer
from procqa.eval.matching import mean_iou
from procqa.fixtures.suite import fixture_oracle, load_fixture_suite
from procqa.orchestrator.runner import answer_question
from procqa.temporal import SpanSet, TimeSpan


class TestShippedSuite:
    def test_shape(self, butter_suite):
        assert set(butter_suite.fixtures) == {"butter_600s"}
        fixture = butter_suite.fixtures["butter_600s"]
        assert fixture.duration_ms == 600000
        labels = [a.label for a in fixture.actions]
        assert any("melt" in l for l in labels) and any("stir" in l for l in labels)
        butter = [o for o in fixture.objects if o.label == "butter"]
        assert butter and butter[0].span == TimeSpan(60000, 120000)

    def test_one_item_per_qa_type(self, butter_suite):
        types = sorted(i.qa_type.value for i in butter_suite.items)
        assert types == sorted(t.value for t in QAType)

    def test_actions_tile_full_duration(self, butter_suite):
        fixture = butter_suite.fixtures["butter_600s"]
        cursor = 0
        for note in fixture.actions:
            assert note.span.start_ms == cursor
            cursor = note.span.end_ms
        assert cursor == fixture.duration_ms

    def test_expected_evidence_is_normalized(self, butter_suite):
        for expected in butter_suite.expected.values():
            assert expected.evidence == SpanSet(tuple(expected.evidence))


class TestLoader:
    def test_unknown_fixture_reference(self, tmp_path, butter_suite):
        from procqa.fixtures.suite import shipped_suite_path

        doc = json.loads(shipped_suite_path().read_text())
        doc["items"][0]["video_id"] = "ghost"
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        with pytest.raises(SchemaError):
            load_fixture_suite(bad)

    def test_empty_suite_valid(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"fixtures": [], "items": [], "expected": {}}))
        suite = load_fixture_suite(path)
        assert suite.items == () and suite.fixtures == {}

    def test_action_gap_rejected(self, tmp_path):
        doc = {
            "fixtures": [
                {
                    "video_id": "v",
                    "fps": 30.0,
                    "duration_ms": 10000,
                    "width": 8,
                    "height": 8,
                    "activity": "a",
                    "view": "ego",
                    "actions": [{"label": "x", "span": [0.0, 4.0]}],
                    "captions": [{"text": "c", "span": [0.0, 10.0]}],
                }
            ]
        }
        path = tmp_path / "gap.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(SchemaError):
            load_fixture_suite(path)


class TestOracle:
    def test_preparation_expectation(self, butter_suite):
        expected = fixture_oracle(butter_suite, "butter_prep")
        assert expected.evidence == SpanSet((TimeSpan(60000, 120000),))
        assert expected.answer == "The butter was unwrapped and then melted in the hot pan."

    def test_mistake_expectation_is_wrong_order_span(self, butter_suite):
        expected = fixture_oracle(butter_suite, "butter_mistake")
        fixture = butter_suite.fixtures["butter_600s"]
        flour = next(a for a in fixture.actions if a.label == "add the flour")
        assert expected.evidence == SpanSet((flour.span,))

    def test_unknown_item(self, butter_suite):
        with pytest.raises(UnknownItem):
            fixture_oracle(butter_suite, "nope")


class TestPipelineMatchesOracle:
    def test_every_item_exact(self, butter_suite, butter_dataset, fixture_ctx):
        judge = StubJudgeBackend()
        for item in butter_suite.items:
            video = butter_dataset.video_by_id[item.video_id]
            pred = answer_question(video, item, fixture_ctx)
            expected = fixture_oracle(butter_suite, item.qa_id)
            assert pred.answer == expected.answer
            assert pred.evidence == expected.evidence
            assert mean_iou(pred.evidence, expected.evidence) == 1.0
            score = judge_answer(item.question, item.gold_answer, pred.answer, judge)
            assert score.average == 5.0
