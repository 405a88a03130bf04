"""Benchmark dataset loading, validation, and summary statistics.

A dataset file is a single JSON document ``{"videos": [...], "items": [...]}``
with snake_case field names; evidence spans are serialized as
``[start_seconds, end_seconds]`` pairs. Loading validates every structural
invariant and cross-reference so downstream code never re-checks.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from ..errors import ReferentialError, SchemaError, SpanError
from ..jsonutil import atomic_write_text, dump_pretty
from ..temporal import SpanSet, spanset_from_seconds, spanset_to_seconds


class Source(str, Enum):
    CAPTAINCOOK4D = "CaptainCook4D"
    COIN = "COIN"
    EGOPER = "EgoPER"
    SYNTHETIC = "Synthetic"


class View(str, Enum):
    EGO = "ego"
    EXO = "exo"


class QAType(str, Enum):
    PREPARATION = "Preparation"
    EVOLUTION = "Evolution"
    COUNTERFACTUAL = "Counterfactual"
    MISTAKE = "Mistake"


@dataclass(frozen=True)
class VideoMeta:
    video_id: str
    source: Source
    duration_ms: int
    view: View
    activity: str
    path_or_uri: str


@dataclass(frozen=True)
class QAItem:
    qa_id: str
    video_id: str
    qa_type: QAType
    question: str
    gold_answer: str
    gold_evidence: SpanSet
    error_type: str | None = None


@dataclass(frozen=True)
class DatasetStats:
    n_videos: int
    n_qa: int
    mean_duration_s: float
    std_duration_s: float
    qa_type_fractions: dict[QAType, float]
    source_fractions: dict[Source, float]
    n_mistake_videos: int


@dataclass(frozen=True)
class Dataset:
    videos: tuple[VideoMeta, ...]
    items: tuple[QAItem, ...]
    video_by_id: dict[str, VideoMeta] = field(compare=False, default_factory=dict)

    def item(self, qa_id: str) -> QAItem:
        for it in self.items:
            if it.qa_id == qa_id:
                return it
        raise KeyError(qa_id)


def _require(obj: dict, key: str, typ, path: str):
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing field")
    value = obj[key]
    if typ is int and isinstance(value, bool):
        raise SchemaError(f"{path}.{key}", "expected integer, got bool")
    if not isinstance(value, typ):
        raise SchemaError(
            f"{path}.{key}", f"expected {typ.__name__}, got {type(value).__name__}"
        )
    return value


def _enum(cls, raw: str, path: str):
    try:
        return cls(raw)
    except ValueError:
        allowed = ", ".join(m.value for m in cls)
        raise SchemaError(path, f"{raw!r} not one of: {allowed}") from None


def _parse_video(obj: Any, path: str) -> VideoMeta:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected object")
    meta = VideoMeta(
        video_id=_require(obj, "video_id", str, path),
        source=_enum(Source, _require(obj, "source", str, path), f"{path}.source"),
        duration_ms=_require(obj, "duration_ms", int, path),
        view=_enum(View, _require(obj, "view", str, path), f"{path}.view"),
        activity=_require(obj, "activity", str, path),
        path_or_uri=_require(obj, "path_or_uri", str, path),
    )
    if meta.duration_ms <= 0:
        raise SchemaError(f"{path}.duration_ms", "must be > 0")
    return meta


def _parse_item(obj: Any, path: str) -> QAItem:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected object")
    raw_evidence = _require(obj, "gold_evidence", list, path)
    try:
        evidence = spanset_from_seconds(raw_evidence)
    except Exception as exc:
        raise SchemaError(f"{path}.gold_evidence", str(exc)) from exc
    qa_type = _enum(QAType, _require(obj, "qa_type", str, path), f"{path}.qa_type")
    error_type = obj.get("error_type")
    if error_type is not None and not isinstance(error_type, str):
        raise SchemaError(f"{path}.error_type", "expected string")
    if qa_type is QAType.MISTAKE and not error_type:
        raise SchemaError(f"{path}.error_type", "required for Mistake items")
    if qa_type is not QAType.MISTAKE and error_type is not None:
        raise SchemaError(f"{path}.error_type", "only allowed on Mistake items")
    item = QAItem(
        qa_id=_require(obj, "qa_id", str, path),
        video_id=_require(obj, "video_id", str, path),
        qa_type=qa_type,
        question=_require(obj, "question", str, path),
        gold_answer=_require(obj, "gold_answer", str, path),
        gold_evidence=evidence,
        error_type=error_type,
    )
    if not item.gold_evidence:
        raise SchemaError(f"{path}.gold_evidence", "must be non-empty")
    return item


def build_dataset(videos: list[VideoMeta], items: list[QAItem]) -> Dataset:
    """Link and cross-validate already-parsed records."""
    by_id: dict[str, VideoMeta] = {}
    for i, v in enumerate(videos):
        if v.video_id in by_id:
            raise SchemaError(f"$.videos[{i}].video_id", f"duplicate {v.video_id!r}")
        by_id[v.video_id] = v
    seen_qa: set[str] = set()
    for i, it in enumerate(items):
        if it.qa_id in seen_qa:
            raise SchemaError(f"$.items[{i}].qa_id", f"duplicate {it.qa_id!r}")
        seen_qa.add(it.qa_id)
        video = by_id.get(it.video_id)
        if video is None:
            raise ReferentialError(
                f"item {it.qa_id!r} references unknown video {it.video_id!r}"
            )
        last = it.gold_evidence.spans[-1]
        if last.end_ms > video.duration_ms:
            raise SpanError(
                f"item {it.qa_id!r}: evidence ends at {last.end_ms} ms, "
                f"video {video.video_id!r} lasts {video.duration_ms} ms"
            )
    return Dataset(tuple(videos), tuple(items), by_id)


def load_dataset(path: str | Path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected top-level object")
    videos = [
        _parse_video(o, f"$.videos[{i}]")
        for i, o in enumerate(_require(doc, "videos", list, "$"))
    ]
    items = [
        _parse_item(o, f"$.items[{i}]")
        for i, o in enumerate(_require(doc, "items", list, "$"))
    ]
    return build_dataset(videos, items)


def dataset_to_jsonable(ds: Dataset) -> dict:
    return {
        "videos": [
            {
                "video_id": v.video_id,
                "source": v.source.value,
                "duration_ms": v.duration_ms,
                "view": v.view.value,
                "activity": v.activity,
                "path_or_uri": v.path_or_uri,
            }
            for v in ds.videos
        ],
        "items": [
            {
                "qa_id": it.qa_id,
                "video_id": it.video_id,
                "qa_type": it.qa_type.value,
                "question": it.question,
                "gold_answer": it.gold_answer,
                "gold_evidence": spanset_to_seconds(it.gold_evidence),
                **({"error_type": it.error_type} if it.error_type is not None else {}),
            }
            for it in ds.items
        ],
    }


def save_dataset(ds: Dataset, path: str | Path) -> None:
    atomic_write_text(str(path), dump_pretty(dataset_to_jsonable(ds)))


def dataset_stats(ds: Dataset) -> DatasetStats:
    """Recompute all summary statistics exactly from the records.

    Fractions are kept at full precision; rounding belongs to display code.
    Duration spread is the population standard deviation.
    """
    durations_s = [v.duration_ms / 1000.0 for v in ds.videos]
    qa_counts: dict[QAType, int] = {}
    for it in ds.items:
        qa_counts[it.qa_type] = qa_counts.get(it.qa_type, 0) + 1
    src_counts: dict[Source, int] = {}
    for v in ds.videos:
        src_counts[v.source] = src_counts.get(v.source, 0) + 1
    mistake_videos = {it.video_id for it in ds.items if it.qa_type is QAType.MISTAKE}
    n_qa = len(ds.items)
    n_videos = len(ds.videos)
    return DatasetStats(
        n_videos=n_videos,
        n_qa=n_qa,
        mean_duration_s=statistics.fmean(durations_s) if durations_s else 0.0,
        std_duration_s=statistics.pstdev(durations_s) if durations_s else 0.0,
        qa_type_fractions={t: c / n_qa for t, c in qa_counts.items()},
        source_fractions={s: c / n_videos for s, c in src_counts.items()},
        n_mistake_videos=len(mistake_videos),
    )
