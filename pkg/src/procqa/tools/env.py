"""Execution environment handed to every tool implementation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover
    from ..dataset.loader import VideoMeta
    from ..fixtures.suite import FixtureSuite
    from .remote import RemoteClient


@dataclass
class ToolEnv:
    """Per-question context: the video under analysis plus one backend."""

    video: Optional["VideoMeta"] = None
    suite: Optional["FixtureSuite"] = None
    remote: Optional["RemoteClient"] = None
