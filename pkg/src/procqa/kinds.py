"""The structural type system of the plan DSL.

Every value flowing between tool calls has exactly one of six kinds; tool
schemas and the static validator are expressed purely in these.
"""

from __future__ import annotations

from enum import Enum


class ValueKind(str, Enum):
    VIDEO_HANDLE = "video-handle"
    FRAME_COLLECTION = "frame-collection"
    DETECTION_LIST = "detection-list"
    TEXT = "text"
    SPAN_LIST = "span-list"
    SCORE = "score"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value
