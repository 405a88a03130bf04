"""Typed runtime values flowing between tool calls.

Each value class carries one of the six structural kinds. Values are frozen;
helpers render any value to deterministic text lines (what the summarizer and
trace digests consume) and to JSON for the wire protocol.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import InvalidArgs
from ..kinds import ValueKind
from ..temporal import SpanSet, TimeSpan, span_to_seconds, spanset_to_seconds


@dataclass(frozen=True)
class VideoHandle:
    video_id: str
    fps: float
    duration_ms: int
    width: int
    height: int

    KIND = ValueKind.VIDEO_HANDLE

    def __post_init__(self):
        if self.fps <= 0:
            raise InvalidArgs(f"fps must be > 0, got {self.fps}")
        if self.duration_ms <= 0:
            raise InvalidArgs(f"duration_ms must be > 0, got {self.duration_ms}")


@dataclass(frozen=True)
class Frame:
    timestamp_ms: int
    image_ref: str


@dataclass(frozen=True)
class FrameCollection:
    video_id: str
    frames: tuple[Frame, ...]

    KIND = ValueKind.FRAME_COLLECTION

    def __post_init__(self):
        stamps = [f.timestamp_ms for f in self.frames]
        if any(b <= a for a, b in zip(stamps, stamps[1:])):
            raise InvalidArgs("frame timestamps must be strictly increasing")

    def timestamps(self) -> list[int]:
        return [f.timestamp_ms for f in self.frames]

    def envelope(self) -> TimeSpan | None:
        """Smallest span containing every frame ([first, last+1))."""
        if not self.frames:
            return None
        return TimeSpan(self.frames[0].timestamp_ms, self.frames[-1].timestamp_ms + 1)


@dataclass(frozen=True)
class Detection:
    timestamp_ms: int
    label: str
    bbox: tuple[int, int, int, int]  # x, y, w, h in pixels
    confidence: float

    def __post_init__(self):
        x, y, w, h = self.bbox
        if w <= 0 or h <= 0:
            raise InvalidArgs(f"bbox sides must be positive, got {self.bbox}")
        if not 0.0 <= self.confidence <= 1.0:
            raise InvalidArgs(f"confidence must be in [0,1], got {self.confidence}")


@dataclass(frozen=True)
class DetectionList:
    detections: tuple[Detection, ...]

    KIND = ValueKind.DETECTION_LIST


@dataclass(frozen=True)
class ActionSegment:
    span: TimeSpan
    description: str


@dataclass(frozen=True)
class ActionSegmentList:
    """Temporally aligned action descriptions; usable wherever spans are."""

    segments: tuple[ActionSegment, ...]

    KIND = ValueKind.SPAN_LIST

    def spans(self) -> list[TimeSpan]:
        return [s.span for s in self.segments]


@dataclass(frozen=True)
class Caption:
    timestamp_ms: int
    text: str


@dataclass(frozen=True)
class CaptionList:
    captions: tuple[Caption, ...]

    KIND = ValueKind.TEXT


@dataclass(frozen=True)
class AnswerValue:
    """Terminal value: the answer text plus its supporting evidence."""

    answer: str
    evidence: SpanSet

    KIND = ValueKind.TEXT


ToolValue = Union[
    VideoHandle,
    FrameCollection,
    DetectionList,
    ActionSegmentList,
    CaptionList,
    AnswerValue,
    SpanSet,
    str,
    int,
    float,
    bool,
]


def value_kind(value: ToolValue) -> ValueKind:
    kind = getattr(value, "KIND", None)
    if kind is not None:
        return kind
    if isinstance(value, (SpanSet, TimeSpan)):
        return ValueKind.SPAN_LIST
    if isinstance(value, str):
        return ValueKind.TEXT
    if isinstance(value, (bool, int, float)):
        return ValueKind.SCORE
    raise InvalidArgs(f"value of type {type(value).__name__} has no kind")


def _fmt_s(ms: int) -> str:
    return f"{ms / 1000:.3f}"


def as_text_lines(value) -> list[str]:
    """Render a value to deterministic text lines for summarization."""
    if isinstance(value, str):
        return [value]
    if isinstance(value, AnswerValue):
        return [value.answer]
    if isinstance(value, CaptionList):
        return [f"{_fmt_s(c.timestamp_ms)}s: {c.text}" for c in value.captions]
    if isinstance(value, ActionSegmentList):
        return [
            f"{_fmt_s(s.span.start_ms)}-{_fmt_s(s.span.end_ms)}s: {s.description}"
            for s in value.segments
        ]
    if isinstance(value, DetectionList):
        return [
            f"{_fmt_s(d.timestamp_ms)}s: {d.label} "
            f"[{d.bbox[0]},{d.bbox[1]},{d.bbox[2]},{d.bbox[3]}] ({d.confidence:.2f})"
            for d in value.detections
        ]
    if isinstance(value, TimeSpan):
        return [f"{_fmt_s(value.start_ms)}-{_fmt_s(value.end_ms)}s"]
    if isinstance(value, SpanSet):
        return [f"{_fmt_s(s.start_ms)}-{_fmt_s(s.end_ms)}s" for s in value]
    if isinstance(value, (list, tuple)):
        lines: list[str] = []
        for item in value:
            lines.extend(as_text_lines(item))
        return lines
    if isinstance(value, (bool, int, float)):
        return [str(value)]
    raise InvalidArgs(f"cannot render {type(value).__name__} as text")


def as_spanset(value) -> SpanSet:
    """Coerce span-kinded values (and lists thereof) to a normalized SpanSet."""
    from ..temporal import spanset_normalize

    if isinstance(value, SpanSet):
        return value
    if isinstance(value, TimeSpan):
        return SpanSet((value,))
    if isinstance(value, ActionSegmentList):
        return spanset_normalize(value.spans())
    if isinstance(value, (list, tuple)):
        spans: list[TimeSpan] = []
        for item in value:
            spans.extend(as_spanset(item).spans)
        return spanset_normalize(spans)
    raise InvalidArgs(f"cannot interpret {type(value).__name__} as spans")


def value_to_jsonable(value):
    """JSON form used for digests, traces, and wire arguments."""
    if isinstance(value, VideoHandle):
        return {
            "video_id": value.video_id,
            "fps": value.fps,
            "duration_ms": value.duration_ms,
            "width": value.width,
            "height": value.height,
        }
    if isinstance(value, FrameCollection):
        return {
            "video_id": value.video_id,
            "frames": [
                {"timestamp_ms": f.timestamp_ms, "image_ref": f.image_ref}
                for f in value.frames
            ],
        }
    if isinstance(value, DetectionList):
        return [
            {
                "timestamp_ms": d.timestamp_ms,
                "label": d.label,
                "bbox": list(d.bbox),
                "confidence": d.confidence,
            }
            for d in value.detections
        ]
    if isinstance(value, ActionSegmentList):
        return [
            {"span": span_to_seconds(s.span), "description": s.description}
            for s in value.segments
        ]
    if isinstance(value, CaptionList):
        return [
            {"timestamp_ms": c.timestamp_ms, "caption": c.text}
            for c in value.captions
        ]
    if isinstance(value, AnswerValue):
        return {"answer": value.answer, "evidence": spanset_to_seconds(value.evidence)}
    if isinstance(value, TimeSpan):
        return span_to_seconds(value)
    if isinstance(value, SpanSet):
        return spanset_to_seconds(value)
    if isinstance(value, (list, tuple)):
        return [value_to_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    raise InvalidArgs(f"cannot serialize {type(value).__name__}")
