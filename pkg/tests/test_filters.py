from __future__ import annotations

import random
import threading

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import full_matrix_edit_distance
from procqa.dataset.filters import (
    ActionSequence,
    blind_filter,
    cosine_similarity,
    edit_distance,
    normalized_edit_distance,
    redundancy_filter,
)
from procqa.dataset.loader import QAItem, QAType, Source, VideoMeta, View
from procqa.errors import DimensionMismatch, MissingAnnotation, ZeroVector
from procqa.eval.judge import JudgeScore
from procqa.temporal import SpanSet, TimeSpan


def seq(*steps: str) -> ActionSequence:
    return ActionSequence.of(steps)


class TestEditDistance:
    def test_identical(self):
        assert edit_distance(seq("peel", "slice"), seq("peel", "slice")) == 0

    def test_single_insert(self):
        assert edit_distance(seq("peel", "slice"), seq("peel", "slice", "stir")) == 1

    def test_reversal(self):
        assert edit_distance(seq("a", "b", "c"), seq("c", "b", "a")) == 2

    def test_empty_vs_nonempty(self):
        assert edit_distance(seq(), seq("a", "b")) == 2

    def test_agrees_with_full_matrix_oracle_on_500_pairs(self):
        rng = random.Random(7)
        alphabet = ["a", "b", "c", "d", "e"]
        for _ in range(500):
            a = [rng.choice(alphabet) for _ in range(rng.randint(0, 10))]
            b = [rng.choice(alphabet) for _ in range(rng.randint(0, 10))]
            assert edit_distance(seq(*a), seq(*b)) == full_matrix_edit_distance(a, b)

    def test_triangle_inequality_on_500_triples(self):
        rng = random.Random(13)
        alphabet = ["a", "b", "c", "d", "e"]
        for _ in range(500):
            triple = [
                seq(*(rng.choice(alphabet) for _ in range(rng.randint(0, 10))))
                for _ in range(3)
            ]
            x, y, z = triple
            dxz = edit_distance(x, z)
            dxy = edit_distance(x, y)
            dyz = edit_distance(y, z)
            assert dxz <= dxy + dyz
            assert dxz == full_matrix_edit_distance(x.steps, z.steps)


class TestCosine:
    def test_identity(self):
        assert cosine_similarity([2.0, 3.0, 4.0], [2.0, 3.0, 4.0]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine_similarity([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_45_degrees(self):
        # naive-loop oracle: dot=1, |u|=sqrt(2), |v|=1
        assert cosine_similarity([1.0, 1.0], [1.0, 0.0]) == 0.7071067811865475

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cosine_similarity([1.0], [1.0, 2.0])

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            cosine_similarity([0.0, 0.0], [1.0, 2.0])

    @given(
        st.lists(st.floats(min_value=-50, max_value=50), min_size=1, max_size=8),
        st.data(),
    )
    def test_bounded(self, u, data):
        v = data.draw(
            st.lists(
                st.floats(min_value=-50, max_value=50), min_size=len(u), max_size=len(u)
            )
        )
        try:
            value = cosine_similarity(u, v)
        except ZeroVector:  # zero or fully-subnormal vectors have no direction
            return
        assert -1.0 <= value <= 1.0


def video(video_id: str, activity: str) -> VideoMeta:
    return VideoMeta(video_id, Source.COIN, 60000, View.EXO, activity, f"{video_id}.mp4")


def orthogonal_embedding(i: int, dim: int = 8) -> list[float]:
    e = [0.0] * dim
    e[i % dim] = 1.0
    return e


class TestRedundancyFilter:
    def test_exact_duplicate_dropped(self):
        videos = [video("v1", "coffee"), video("v2", "coffee")]
        seqs = {"v1": seq("grind", "brew"), "v2": seq("grind", "brew")}
        embs = {"v1": orthogonal_embedding(0), "v2": orthogonal_embedding(1)}
        assert redundancy_filter(videos, seqs, embs) == ["v1"]

    def test_duplicates_kept_across_activities(self):
        videos = [video("v1", "coffee"), video("v2", "tea")]
        seqs = {"v1": seq("grind", "brew"), "v2": seq("grind", "brew")}
        embs = {"v1": orthogonal_embedding(0), "v2": orthogonal_embedding(1)}
        assert redundancy_filter(videos, seqs, embs) == ["v1", "v2"]

    def test_three_videos_one_duplicate(self):
        videos = [video(f"v{i}", "coffee") for i in (1, 2, 3)]
        seqs = {
            "v1": seq("grind", "brew", "pour"),
            "v2": seq("grind", "brew", "pour"),
            "v3": seq("boil", "steep", "strain", "serve", "clean"),
        }
        embs = {f"v{i}": orthogonal_embedding(i) for i in (1, 2, 3)}
        # brute-force pairwise check: only (v1, v2) fall inside either threshold
        kept = redundancy_filter(videos, seqs, embs)
        assert kept == ["v1", "v3"]

    def test_cosine_alone_can_drop(self):
        videos = [video("v1", "coffee"), video("v2", "coffee")]
        seqs = {"v1": seq("a", "b", "c", "d", "e"), "v2": seq("v", "w", "x", "y", "z")}
        embs = {"v1": [1.0, 0.0], "v2": [0.999, 0.01]}
        assert redundancy_filter(videos, seqs, embs) == ["v1"]

    def test_missing_annotation(self):
        videos = [video("v1", "coffee")]
        with pytest.raises(MissingAnnotation):
            redundancy_filter(videos, {}, {"v1": [1.0]})
        with pytest.raises(MissingAnnotation):
            redundancy_filter(videos, {"v1": seq("a")}, {})

    def test_invariant_to_video_id_relabeling(self):
        rng = random.Random(99)
        videos, seqs, embs = [], {}, {}
        for i in range(12):
            vid = f"v{i}"
            videos.append(video(vid, f"act{i % 3}"))
            seqs[vid] = seq(*(rng.choice("abcde") for _ in range(rng.randint(1, 6))))
            embs[vid] = [rng.random() for _ in range(4)]
        kept = redundancy_filter(videos, seqs, embs)
        kept_positions = [i for i, v in enumerate(videos) if v.video_id in set(kept)]

        relabel = {f"v{i}": f"w{(i * 7) % 12:02d}" for i in range(12)}
        videos2 = [
            VideoMeta(relabel[v.video_id], v.source, v.duration_ms, v.view, v.activity, v.path_or_uri)
            for v in videos
        ]
        seqs2 = {relabel[k]: v for k, v in seqs.items()}
        embs2 = {relabel[k]: v for k, v in embs.items()}
        kept2 = redundancy_filter(videos2, seqs2, embs2)
        kept2_positions = [i for i, v in enumerate(videos2) if v.video_id in set(kept2)]
        assert kept_positions == kept2_positions

    def test_normalized_distance(self):
        assert normalized_edit_distance(seq("a", "b"), seq("a", "b", "c", "d")) == 0.5


def item(qa_id: str, question: str = "q?") -> QAItem:
    return QAItem(
        qa_id=qa_id,
        video_id="v1",
        qa_type=QAType.PREPARATION,
        question=question,
        gold_answer="gold",
        gold_evidence=SpanSet((TimeSpan(0, 1000),)),
    )


def fixed_judge(scores: dict[str, float]):
    def judge_fn(question: str, gold: str, answer: str) -> JudgeScore:
        avg = scores[question]
        quarters = round(avg * 4)
        base, extra = divmod(quarters, 4)
        dims = [min(5, base + (1 if i < extra else 0)) for i in range(4)]
        return JudgeScore.from_dims(*dims)

    return judge_fn


class TestBlindFilter:
    def test_all_kept_when_judge_scores_zero(self):
        items = [item("a"), item("b")]
        kept, audits = blind_filter(
            items,
            answer_fn=lambda q: "",
            judge_fn=lambda q, g, a: JudgeScore.uniform(0),
            threshold=3.0,
        )
        assert kept == items
        assert all(not a.dropped for a in audits)

    def test_high_scorer_dropped(self):
        items = [item("a", "easy?"), item("b", "hard?")]
        scores = {"easy?": 5.0, "hard?": 0.0}
        kept, audits = blind_filter(
            items, lambda q: "x", fixed_judge(scores), threshold=3.0
        )
        assert [i.qa_id for i in kept] == ["b"]
        assert audits[0].dropped and not audits[1].dropped

    def test_threshold_boundary(self):
        # averages 2.9 is not representable from integer dims; use 2.75/3.0/3.25
        items = [item(q, q) for q in ("q2.75", "q3.0", "q3.25")]
        scores = {"q2.75": 2.75, "q3.0": 3.0, "q3.25": 3.25}
        kept, audits = blind_filter(
            items, lambda q: "x", fixed_judge(scores), threshold=3.0
        )
        assert [i.qa_id for i in kept] == ["q2.75"]
        assert [a.dropped for a in audits] == [False, True, True]

    def test_result_independent_of_completion_order(self):
        items = [item(f"q{i}", f"question {i}") for i in range(8)]
        release = threading.Event()

        def slow_first_judge(question: str, gold: str, answer: str) -> JudgeScore:
            if question == "question 0":
                release.wait(timeout=5)
            return JudgeScore.uniform(5 if question.endswith(("0", "2", "4", "6")) else 0)

        def answer_fn(q: str) -> str:
            release.set()
            return "a"

        kept, audits = blind_filter(items, answer_fn, slow_first_judge, 3.0, parallelism=8)
        assert [a.qa_id for a in audits] == [f"q{i}" for i in range(8)]
        assert [i.qa_id for i in kept] == ["q1", "q3", "q5", "q7"]

    def test_backend_failure_tagged_with_qa_id(self):
        def bad_judge(q, g, a):
            raise RuntimeError("backend melted")

        with pytest.raises(RuntimeError) as err:
            blind_filter([item("ex1")], lambda q: "", bad_judge)
        assert "ex1" in str(err.value)
