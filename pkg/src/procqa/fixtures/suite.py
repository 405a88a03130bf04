"""Deterministic synthetic videos used as the offline oracle.

A fixture video is an annotated timeline, not pixels: object visibility spans
with boxes, an action track covering the full duration, caption text per
segment, and per-question expected answers with evidence. The perception tools
read these tables, which makes every end-to-end run byte-deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..dataset.loader import (
    Dataset,
    QAItem,
    Source,
    VideoMeta,
    View,
    _parse_item,
    build_dataset,
)
from ..errors import SchemaError, UnknownItem
from ..temporal import SpanSet, TimeSpan, span_from_seconds, spanset_from_seconds
from ..tools.values import VideoHandle


@dataclass(frozen=True)
class ObjectTrack:
    label: str
    span: TimeSpan
    bbox: tuple[int, int, int, int]


@dataclass(frozen=True)
class ActionNote:
    label: str
    span: TimeSpan


@dataclass(frozen=True)
class CaptionNote:
    text: str
    span: TimeSpan


@dataclass(frozen=True)
class Expected:
    answer: str
    evidence: SpanSet


@dataclass(frozen=True)
class FixtureVideo:
    video_id: str
    fps: float
    duration_ms: int
    width: int
    height: int
    activity: str
    view: View
    objects: tuple[ObjectTrack, ...]
    actions: tuple[ActionNote, ...]
    captions: tuple[CaptionNote, ...]
    answers: dict[str, Expected]  # keyed by exact question text

    def handle(self) -> VideoHandle:
        return VideoHandle(
            self.video_id, self.fps, self.duration_ms, self.width, self.height
        )

    def visible_objects(self, timestamp_ms: int) -> list[ObjectTrack]:
        return [o for o in self.objects if o.span.contains_ms(timestamp_ms)]

    def caption_at(self, timestamp_ms: int) -> str:
        for note in self.captions:
            if note.span.contains_ms(timestamp_ms):
                return note.text
        return f"frame at {timestamp_ms / 1000:.3f}s"

    def actions_overlapping(self, span: TimeSpan) -> list[ActionNote]:
        return [a for a in self.actions if a.span.intersection_ms(span) > 0]


@dataclass(frozen=True)
class FixtureSuite:
    fixtures: dict[str, FixtureVideo]
    items: tuple[QAItem, ...]
    expected: dict[str, Expected]

    def to_dataset(self) -> Dataset:
        videos = [
            VideoMeta(
                video_id=f.video_id,
                source=Source.SYNTHETIC,
                duration_ms=f.duration_ms,
                view=f.view,
                activity=f.activity,
                path_or_uri=f.video_id,
            )
            for f in self.fixtures.values()
        ]
        return build_dataset(videos, list(self.items))


def _check_track_coverage(notes, duration_ms: int, path: str):
    """Annotated segments must tile [0, duration) with no gaps or overlaps."""
    cursor = 0
    for i, note in enumerate(notes):
        if note.span.start_ms != cursor:
            raise SchemaError(
                f"{path}[{i}]", f"segment starts at {note.span.start_ms}, expected {cursor}"
            )
        cursor = note.span.end_ms
    if cursor != duration_ms:
        raise SchemaError(path, f"segments cover [0, {cursor}), video lasts {duration_ms}")


def _parse_span_field(obj: dict, path: str) -> TimeSpan:
    try:
        return span_from_seconds(obj["span"])
    except KeyError:
        raise SchemaError(f"{path}.span", "missing field") from None
    except Exception as exc:
        raise SchemaError(f"{path}.span", str(exc)) from exc


def _parse_fixture(obj: dict, path: str) -> FixtureVideo:
    for key in ("video_id", "fps", "duration_ms", "width", "height", "activity", "view"):
        if key not in obj:
            raise SchemaError(f"{path}.{key}", "missing field")
    duration_ms = obj["duration_ms"]
    objects = []
    for i, o in enumerate(obj.get("objects", [])):
        span = _parse_span_field(o, f"{path}.objects[{i}]")
        objects.append(ObjectTrack(o["label"], span, tuple(o["bbox"])))
    actions = []
    for i, a in enumerate(obj.get("actions", [])):
        actions.append(ActionNote(a["label"], _parse_span_field(a, f"{path}.actions[{i}]")))
    captions = []
    for i, c in enumerate(obj.get("captions", [])):
        captions.append(CaptionNote(c["text"], _parse_span_field(c, f"{path}.captions[{i}]")))
    _check_track_coverage(actions, duration_ms, f"{path}.actions")
    _check_track_coverage(captions, duration_ms, f"{path}.captions")
    for i, track in enumerate(objects):
        if track.span.end_ms > duration_ms:
            raise SchemaError(f"{path}.objects[{i}]", "object span exceeds duration")
    answers: dict[str, Expected] = {}
    for i, entry in enumerate(obj.get("answers", [])):
        question = entry.get("question")
        if not question or not isinstance(question, str):
            raise SchemaError(f"{path}.answers[{i}].question", "missing or empty")
        if question in answers:
            raise SchemaError(f"{path}.answers[{i}].question", "duplicate question key")
        answers[question] = Expected(
            answer=entry.get("answer", ""),
            evidence=spanset_from_seconds(entry.get("evidence", [])),
        )
    try:
        view = View(obj["view"])
    except ValueError:
        raise SchemaError(f"{path}.view", f"{obj['view']!r} not one of: ego, exo") from None
    return FixtureVideo(
        video_id=obj["video_id"],
        fps=float(obj["fps"]),
        duration_ms=duration_ms,
        width=obj["width"],
        height=obj["height"],
        activity=obj["activity"],
        view=view,
        objects=tuple(objects),
        actions=tuple(actions),
        captions=tuple(captions),
        answers=answers,
    )


def load_fixture_suite(path: str | Path) -> FixtureSuite:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "fixtures" not in doc:
        raise SchemaError("$", "expected object with a 'fixtures' list")
    fixtures: dict[str, FixtureVideo] = {}
    for i, obj in enumerate(doc["fixtures"]):
        fixture = _parse_fixture(obj, f"$.fixtures[{i}]")
        if fixture.video_id in fixtures:
            raise SchemaError(f"$.fixtures[{i}].video_id", "duplicate fixture id")
        fixtures[fixture.video_id] = fixture
    items = [
        _parse_item(o, f"$.items[{i}]") for i, o in enumerate(doc.get("items", []))
    ]
    for i, item in enumerate(items):
        if item.video_id not in fixtures:
            raise SchemaError(
                f"$.items[{i}].video_id", f"unknown fixture {item.video_id!r}"
            )
    expected: dict[str, Expected] = {}
    known_qa = {item.qa_id for item in items}
    for qa_id, entry in doc.get("expected", {}).items():
        if qa_id not in known_qa:
            raise SchemaError(f"$.expected.{qa_id}", "no item with this qa_id")
        expected[qa_id] = Expected(
            answer=entry.get("answer", ""),
            evidence=spanset_from_seconds(entry.get("evidence", [])),
        )
    return FixtureSuite(fixtures=fixtures, items=tuple(items), expected=expected)


def fixture_oracle(suite: FixtureSuite, qa_id: str) -> Expected:
    """Expected pipeline output for one item under the fixture backend."""
    try:
        return suite.expected[qa_id]
    except KeyError:
        raise UnknownItem(qa_id) from None


def shipped_suite_path() -> Path:
    """The butter suite distributed with the package."""
    return Path(__file__).parent / "data" / "butter_suite.json"
