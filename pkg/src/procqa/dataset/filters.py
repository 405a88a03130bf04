"""Quality-control filters: redundancy removal and blind-answerable screening.

Redundancy compares action sequences (edit distance) and text embeddings
(cosine) within each activity group. The blind filter asks a backend to answer
from the question alone and discards items a judge scores too well, since
those are answerable by commonsense without watching the video.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from ..errors import DimensionMismatch, MissingAnnotation, ZeroVector
from .loader import QAItem, VideoMeta


@dataclass(frozen=True)
class ActionSequence:
    """Ordered step labels annotated for one video."""

    steps: tuple[str, ...]

    @classmethod
    def of(cls, steps: Iterable[str]) -> "ActionSequence":
        return cls(tuple(steps))


def edit_distance(a: ActionSequence, b: ActionSequence) -> int:
    """Levenshtein distance over step labels, unit cost for all three edits."""
    src, dst = a.steps, b.steps
    if len(src) < len(dst):
        src, dst = dst, src
    previous = list(range(len(dst) + 1))
    for i, step in enumerate(src, start=1):
        current = [i]
        for j, other in enumerate(dst, start=1):
            cost = 0 if step == other else 1
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
            )
        previous = current
    return previous[-1]


def cosine_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    if len(u) != len(v):
        raise DimensionMismatch(f"dim {len(u)} vs {len(v)}")
    dot = math.fsum(x * y for x, y in zip(u, v))
    nu = math.sqrt(math.fsum(x * x for x in u))
    nv = math.sqrt(math.fsum(y * y for y in v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine similarity undefined for zero vectors")
    # rounding can push near-parallel vectors past ±1; clamp to the contract
    return max(-1.0, min(1.0, dot / (nu * nv)))


def normalized_edit_distance(a: ActionSequence, b: ActionSequence) -> float:
    longest = max(len(a.steps), len(b.steps))
    if longest == 0:
        return 0.0
    return edit_distance(a, b) / longest


def redundancy_filter(
    videos: Sequence[VideoMeta],
    sequences: Mapping[str, ActionSequence],
    embeddings: Mapping[str, Sequence[float]],
    edit_thresh: float = 0.2,
    cos_thresh: float = 0.95,
) -> list[str]:
    """Greedily keep videos in input order, dropping near-duplicates.

    Within each activity group a candidate is dropped when, against ANY
    already-kept video, normalized edit distance <= edit_thresh OR cosine
    similarity >= cos_thresh. Videos never compete across activities.
    """
    for v in videos:
        if v.video_id not in sequences:
            raise MissingAnnotation(f"video {v.video_id!r} lacks an action sequence")
        if v.video_id not in embeddings:
            raise MissingAnnotation(f"video {v.video_id!r} lacks an embedding")
    kept: list[str] = []
    kept_by_activity: dict[str, list[str]] = {}
    for v in videos:
        group = kept_by_activity.setdefault(v.activity, [])
        redundant = False
        for other_id in group:
            ned = normalized_edit_distance(sequences[v.video_id], sequences[other_id])
            cos = cosine_similarity(embeddings[v.video_id], embeddings[other_id])
            if ned <= edit_thresh or cos >= cos_thresh:
                redundant = True
                break
        if not redundant:
            group.append(v.video_id)
            kept.append(v.video_id)
    return kept


@dataclass(frozen=True)
class BlindAudit:
    """Per-item record of what the blind screening saw and decided."""

    qa_id: str
    blind_answer: str
    average: float
    dropped: bool


def blind_filter(
    items: Sequence[QAItem],
    answer_fn: Callable[[str], str],
    judge_fn: Callable[[str, str, str], object],
    threshold: float = 3.0,
    parallelism: int = 4,
) -> tuple[list[QAItem], list[BlindAudit]]:
    """Drop items whose question-only answer already scores >= threshold.

    Backend calls run concurrently but results are assembled in input order,
    so the kept/dropped outcome is independent of completion order. Backend
    failures propagate tagged with the offending qa_id.
    """

    def screen(item: QAItem) -> BlindAudit:
        try:
            answer = answer_fn(item.question)
            score = judge_fn(item.question, item.gold_answer, answer)
        except Exception as exc:
            raise type(exc)(f"{item.qa_id}: {exc}") from exc
        average = float(getattr(score, "average"))
        return BlindAudit(item.qa_id, answer, average, dropped=average >= threshold)

    workers = max(1, min(parallelism, len(items) or 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        audits = list(pool.map(screen, items))
    kept = [item for item, audit in zip(items, audits) if not audit.dropped]
    return kept, audits
