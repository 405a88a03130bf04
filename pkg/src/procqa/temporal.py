"""Interval arithmetic over video time.

Spans are closed-open ``[start_ms, end_ms)`` on an integer millisecond grid.
Intersection and union are therefore exact integer counts of milliseconds, and
IoU is an exact rational; floats only appear when a ratio leaves this module.
Seconds exist solely at serialization boundaries (JSON uses
``[start_seconds, end_seconds]`` with 3 decimal places, which round-trips
losslessly to milliseconds).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import InvalidSpan

__all__ = [
    "TimeSpan",
    "SpanSet",
    "span_new",
    "span_iou",
    "spanset_normalize",
    "spanset_clip",
    "span_to_seconds",
    "span_from_seconds",
    "spanset_to_seconds",
    "spanset_from_seconds",
]


@dataclass(frozen=True, order=True)
class TimeSpan:
    """A closed-open interval [start_ms, end_ms) of video time."""

    start_ms: int
    end_ms: int

    def __post_init__(self):
        if isinstance(self.start_ms, bool) or isinstance(self.end_ms, bool):
            raise InvalidSpan("span endpoints must be integers, got bool")
        if not isinstance(self.start_ms, int) or not isinstance(self.end_ms, int):
            raise InvalidSpan(
                f"span endpoints must be integers, got "
                f"({self.start_ms!r}, {self.end_ms!r})"
            )
        if self.start_ms < 0:
            raise InvalidSpan(f"start_ms must be >= 0, got {self.start_ms}")
        if self.end_ms <= self.start_ms:
            raise InvalidSpan(
                f"end_ms must exceed start_ms, got [{self.start_ms}, {self.end_ms})"
            )

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms

    def contains_ms(self, t: int) -> bool:
        return self.start_ms <= t < self.end_ms

    def intersection_ms(self, other: "TimeSpan") -> int:
        """Exact overlap in milliseconds (0 when disjoint)."""
        lo = max(self.start_ms, other.start_ms)
        hi = min(self.end_ms, other.end_ms)
        return max(0, hi - lo)

    def union_ms(self, other: "TimeSpan") -> int:
        """Exact measure of the set union in milliseconds."""
        return self.duration_ms + other.duration_ms - self.intersection_ms(other)


@dataclass(frozen=True)
class SpanSet:
    """A normalized set of spans: sorted, pairwise disjoint, non-adjacent.

    Construct through :func:`spanset_normalize` unless the input is already
    known to be normal; the constructor enforces the invariant.
    """

    spans: tuple[TimeSpan, ...] = ()

    def __post_init__(self):
        for prev, cur in zip(self.spans, self.spans[1:]):
            if cur.start_ms <= prev.end_ms:
                raise InvalidSpan(
                    f"span set not normalized: [{prev.start_ms},{prev.end_ms}) "
                    f"then [{cur.start_ms},{cur.end_ms})"
                )

    def __iter__(self) -> Iterator[TimeSpan]:
        return iter(self.spans)

    def __len__(self) -> int:
        return len(self.spans)

    def __bool__(self) -> bool:
        return bool(self.spans)

    @property
    def covered_ms(self) -> int:
        return sum(s.duration_ms for s in self.spans)

    def bounding_span(self) -> TimeSpan | None:
        if not self.spans:
            return None
        return TimeSpan(self.spans[0].start_ms, self.spans[-1].end_ms)


def span_new(start_ms: int, end_ms: int) -> TimeSpan:
    """Construct a span, rejecting empty and negative intervals."""
    return TimeSpan(start_ms, end_ms)


def span_iou(a: TimeSpan, b: TimeSpan) -> float:
    """|a ∩ b| / |a ∪ b| computed on exact integer milliseconds."""
    inter = a.intersection_ms(b)
    union = a.duration_ms + b.duration_ms - inter
    return inter / union


def span_iou_fraction(a: TimeSpan, b: TimeSpan) -> Fraction:
    """Exact rational IoU; used where downstream sums must stay exact."""
    inter = a.intersection_ms(b)
    union = a.duration_ms + b.duration_ms - inter
    return Fraction(inter, union)


def spanset_normalize(spans: Iterable[TimeSpan]) -> SpanSet:
    """Sort and merge overlapping or touching spans into a SpanSet.

    Because spans are closed-open, touching spans ([2,3) and [3,4)) cover
    contiguous milliseconds and merge; total covered time is preserved.
    """
    ordered = sorted(spans, key=lambda s: (s.start_ms, s.end_ms))
    merged: list[TimeSpan] = []
    for span in ordered:
        if merged and span.start_ms <= merged[-1].end_ms:
            if span.end_ms > merged[-1].end_ms:
                merged[-1] = TimeSpan(merged[-1].start_ms, span.end_ms)
        else:
            merged.append(span)
    return SpanSet(tuple(merged))


def spanset_clip(spanset: SpanSet, bounds: TimeSpan) -> SpanSet:
    """Intersect every span with ``bounds``; spans fully outside are dropped."""
    kept = []
    for span in spanset:
        lo = max(span.start_ms, bounds.start_ms)
        hi = min(span.end_ms, bounds.end_ms)
        if lo < hi:
            kept.append(TimeSpan(lo, hi))
    return SpanSet(tuple(kept))


# -- serialization boundary (seconds with 3 decimals) -------------------------

def _ms_to_seconds(ms: int) -> float:
    return round(ms / 1000.0, 3)


def _seconds_to_ms(seconds: float) -> int:
    ms = round(float(seconds) * 1000)
    # 3-decimal serialization puts valid values on the grid up to float noise
    if abs(float(seconds) * 1000 - ms) > 0.1:
        raise InvalidSpan(f"timestamp {seconds!r} is not on the millisecond grid")
    return ms


def span_to_seconds(span: TimeSpan) -> list[float]:
    return [_ms_to_seconds(span.start_ms), _ms_to_seconds(span.end_ms)]


def span_from_seconds(pair: Sequence[float]) -> TimeSpan:
    if len(pair) != 2:
        raise InvalidSpan(f"expected [start, end], got {pair!r}")
    return TimeSpan(_seconds_to_ms(pair[0]), _seconds_to_ms(pair[1]))


def spanset_to_seconds(spanset: SpanSet) -> list[list[float]]:
    return [span_to_seconds(s) for s in spanset]


def spanset_from_seconds(pairs: Iterable[Sequence[float]]) -> SpanSet:
    return spanset_normalize(span_from_seconds(p) for p in pairs)
