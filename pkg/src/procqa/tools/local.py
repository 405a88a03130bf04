"""Fixture backend: every tool is a pure function of (fixture tables, inputs).

Frames are opaque ids, never pixels; perception reads the fixture's annotation
tables. Identical inputs always produce identical outputs, which is what makes
the end-to-end goldens byte-stable.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..errors import BackendUnavailable, EmptyEvidence, InvalidArgs, InvalidCount, NotFound
from ..temporal import SpanSet, TimeSpan, spanset_clip, spanset_normalize

if TYPE_CHECKING:  # pragma: no cover
    from ..fixtures.suite import FixtureVideo
from .env import ToolEnv
from .spec import Binding, ToolRegistry
from .values import (
    ActionSegment,
    ActionSegmentList,
    AnswerValue,
    Caption,
    CaptionList,
    Detection,
    DetectionList,
    Frame,
    FrameCollection,
    VideoHandle,
    as_spanset,
    as_text_lines,
)


def _suite(env: ToolEnv):
    if env.suite is None:
        raise BackendUnavailable("fixture backend configured without a suite")
    return env.suite


def _fixture_for(env: ToolEnv, video_id: str) -> "FixtureVideo":
    fixture = _suite(env).fixtures.get(video_id)
    if fixture is None:
        raise NotFound(f"no fixture video {video_id!r}")
    return fixture


def _count(value, what: str) -> int:
    """Accept int-valued scores; anything else is an invalid count."""
    if isinstance(value, bool):
        raise InvalidCount(f"{what} must be an integer")
    if isinstance(value, float):
        if not value.is_integer():
            raise InvalidCount(f"{what} must be an integer, got {value}")
        value = int(value)
    if not isinstance(value, int):
        raise InvalidCount(f"{what} must be an integer, got {type(value).__name__}")
    return value


def _query_matches(query: str, label: str) -> bool:
    q, l = query.strip().lower(), label.strip().lower()
    return bool(q) and (q in l or l in q)


def _reference_span(reference) -> TimeSpan | None:
    """Envelope of whatever the reference is: span(s) or a frame collection."""
    if isinstance(reference, FrameCollection):
        return reference.envelope()
    spans = as_spanset(reference)
    return spans.bounding_span()


def video_load(env: ToolEnv, path: str) -> VideoHandle:
    if not isinstance(path, str) or not path:
        raise InvalidArgs("path must be a non-empty string")
    return _fixture_for(env, path).handle()


def frame_sample(env: ToolEnv, video: VideoHandle, n) -> FrameCollection:
    n = _count(n, "n")
    if n < 1:
        raise InvalidCount(f"n must be >= 1, got {n}")
    if n > video.duration_ms:
        raise InvalidCount(
            f"cannot place {n} distinct millisecond timestamps in {video.duration_ms} ms"
        )
    # midpoint of each of n equal buckets, floored to the millisecond grid;
    # strictly increasing and inside [0, duration) for every valid n
    stamps = [((2 * i + 1) * video.duration_ms) // (2 * n) for i in range(n)]
    frames = tuple(Frame(t, f"{video.video_id}@{t}") for t in stamps)
    return FrameCollection(video.video_id, frames)


def frame_trim(env: ToolEnv, frames: FrameCollection, relation: str, reference) -> FrameCollection:
    if relation not in ("before", "after", "within"):
        raise InvalidArgs(f"relation must be before/after/within, got {relation!r}")
    ref = _reference_span(reference)
    if ref is None:
        return frames  # no reference event: nothing to cut against
    if relation == "before":
        kept = [f for f in frames.frames if f.timestamp_ms < ref.start_ms]
    elif relation == "after":
        kept = [f for f in frames.frames if f.timestamp_ms >= ref.end_ms]
    else:
        kept = [f for f in frames.frames if ref.contains_ms(f.timestamp_ms)]
    return FrameCollection(frames.video_id, tuple(kept))


def frame_retrieve(env: ToolEnv, frames: FrameCollection, query: str, top_k) -> FrameCollection:
    top_k = _count(top_k, "top_k")
    if top_k < 1:
        raise InvalidCount(f"top_k must be >= 1, got {top_k}")
    fixture = _fixture_for(env, frames.video_id)
    scored = []
    for f in frames.frames:
        hit = any(
            _query_matches(query, o.label) for o in fixture.visible_objects(f.timestamp_ms)
        )
        scored.append((1.0 if hit else 0.0, f))
    # highest score first, ties broken by earlier timestamp
    ranked = sorted(scored, key=lambda sf: (-sf[0], sf[1].timestamp_ms))
    chosen = [f for _, f in ranked[:top_k]]
    chosen.sort(key=lambda f: f.timestamp_ms)
    return FrameCollection(frames.video_id, tuple(chosen))


def obj_det(env: ToolEnv, frames: FrameCollection, query: str) -> DetectionList:
    if not query:
        raise InvalidArgs("query must be non-empty")
    fixture = _fixture_for(env, frames.video_id)
    detections = []
    for f in frames.frames:
        for track in fixture.visible_objects(f.timestamp_ms):
            if _query_matches(query, track.label):
                detections.append(
                    Detection(f.timestamp_ms, track.label, track.bbox, 1.0)
                )
    return DetectionList(tuple(detections))


def action_rec(env: ToolEnv, frames: FrameCollection) -> ActionSegmentList:
    if not frames.frames:
        raise InvalidArgs("Action_Rec requires at least one frame")
    fixture = _fixture_for(env, frames.video_id)
    extent = frames.envelope()
    notes = fixture.actions_overlapping(extent)
    if not notes:
        # degenerate fixture without an action at these times: minimal span
        return ActionSegmentList(
            tuple(
                ActionSegment(TimeSpan(f.timestamp_ms, f.timestamp_ms + 1), "unlabeled")
                for f in frames.frames
            )
        )
    return ActionSegmentList(tuple(ActionSegment(n.span, n.label) for n in notes))


def img_caption(env: ToolEnv, frames: FrameCollection) -> CaptionList:
    if not frames.frames:
        raise InvalidArgs("Img_Caption requires at least one frame")
    fixture = _fixture_for(env, frames.video_id)
    return CaptionList(
        tuple(Caption(f.timestamp_ms, fixture.caption_at(f.timestamp_ms)) for f in frames.frames)
    )


def context_sum(env: ToolEnv, texts) -> str:
    return "\n".join(as_text_lines(texts))


def answer_gen(env: ToolEnv, question: str, context, frames: FrameCollection, evidence_hint) -> AnswerValue:
    if not question:
        raise InvalidArgs("question must be non-empty")
    fixture = _fixture_for(env, frames.video_id)
    stored = fixture.answers.get(question)
    hint = as_spanset(evidence_hint) if evidence_hint is not None else SpanSet()
    evidence = stored.evidence if stored and stored.evidence else hint
    if not evidence:
        raise EmptyEvidence(f"no evidence for question {question!r} and no hint given")
    bounds = TimeSpan(0, fixture.duration_ms)
    evidence = spanset_clip(spanset_normalize(evidence), bounds)
    if not evidence:
        raise EmptyEvidence("all evidence fell outside the video duration")
    answer = stored.answer if stored else ""
    return AnswerValue(answer=answer, evidence=evidence)


LOCAL_IMPLS = {
    "Video_Load": video_load,
    "Frame_Sample": frame_sample,
    "Frame_Trim": frame_trim,
    "Frame_Retrieve": frame_retrieve,
    "Obj_Det": obj_det,
    "Action_Rec": action_rec,
    "Img_Caption": img_caption,
    "Context_Sum": context_sum,
    "Answer_Gen": answer_gen,
}


def build_local_registry() -> ToolRegistry:
    return ToolRegistry.build(Binding.LOCAL, LOCAL_IMPLS)
