"""Fixture-suite ingestion for stub mode.

Reads the documented suite JSON schema directly (objects / actions / captions
tables plus per-question answers); this file format is the only coupling to
the engine side. Spans arrive as [start_seconds, end_seconds] and are held as
closed-open integer-millisecond pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .protocol import seconds_to_ms

Span = tuple[int, int]  # [start_ms, end_ms)


def _span(pair) -> Span:
    start, end = seconds_to_ms(pair[0]), seconds_to_ms(pair[1])
    if not 0 <= start < end:
        raise ValueError(f"invalid span {pair!r}")
    return start, end


def span_contains(span: Span, t: int) -> bool:
    return span[0] <= t < span[1]


def spans_overlap(a: Span, b: Span) -> bool:
    return max(a[0], b[0]) < min(a[1], b[1])


def merge_spans(spans: list[Span]) -> list[Span]:
    merged: list[Span] = []
    for start, end in sorted(spans):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def clip_spans(spans: list[Span], bounds: Span) -> list[Span]:
    kept = []
    for start, end in spans:
        lo, hi = max(start, bounds[0]), min(end, bounds[1])
        if lo < hi:
            kept.append((lo, hi))
    return kept


@dataclass(frozen=True)
class ObjectTrack:
    label: str
    span: Span
    bbox: list[int]


@dataclass(frozen=True)
class Segment:
    label: str
    span: Span


@dataclass(frozen=True)
class StubVideo:
    video_id: str
    fps: float
    duration_ms: int
    width: int
    height: int
    objects: tuple[ObjectTrack, ...]
    actions: tuple[Segment, ...]
    captions: tuple[tuple[str, Span], ...]
    answers: dict[str, dict]  # question -> {"answer": str, "evidence": [Span]}

    def handle_result(self) -> dict:
        return {
            "video_id": self.video_id,
            "fps": self.fps,
            "duration_ms": self.duration_ms,
            "width": self.width,
            "height": self.height,
        }

    def visible_labels(self, t: int) -> list[ObjectTrack]:
        return [o for o in self.objects if span_contains(o.span, t)]

    def caption_at(self, t: int) -> str:
        for text, span in self.captions:
            if span_contains(span, t):
                return text
        return f"frame at {t / 1000:.3f}s"

    def actions_overlapping(self, span: Span) -> list[Segment]:
        return [a for a in self.actions if spans_overlap(a.span, span)]


def load_stub_suite(path: str | Path) -> dict[str, StubVideo]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    videos: dict[str, StubVideo] = {}
    for fx in doc.get("fixtures", []):
        answers = {
            entry["question"]: {
                "answer": entry.get("answer", ""),
                "evidence": [_span(p) for p in entry.get("evidence", [])],
            }
            for entry in fx.get("answers", [])
        }
        videos[fx["video_id"]] = StubVideo(
            video_id=fx["video_id"],
            fps=float(fx["fps"]),
            duration_ms=int(fx["duration_ms"]),
            width=int(fx["width"]),
            height=int(fx["height"]),
            objects=tuple(
                ObjectTrack(o["label"], _span(o["span"]), list(o["bbox"]))
                for o in fx.get("objects", [])
            ),
            actions=tuple(
                Segment(a["label"], _span(a["span"])) for a in fx.get("actions", [])
            ),
            captions=tuple(
                (c["text"], _span(c["span"])) for c in fx.get("captions", [])
            ),
            answers=answers,
        )
    return videos
