from .env import ToolEnv
from .local import build_local_registry
from .remote import RemoteClient, build_remote_registry
from .spec import TOOL_CONTRACTS, Binding, ParamSpec, ToolRegistry, ToolSpec, param
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
    value_kind,
    value_to_jsonable,
)

__all__ = [
    "TOOL_CONTRACTS",
    "ActionSegment",
    "ActionSegmentList",
    "AnswerValue",
    "Binding",
    "Caption",
    "CaptionList",
    "Detection",
    "DetectionList",
    "Frame",
    "FrameCollection",
    "ParamSpec",
    "RemoteClient",
    "ToolEnv",
    "ToolRegistry",
    "ToolSpec",
    "VideoHandle",
    "as_spanset",
    "as_text_lines",
    "build_local_registry",
    "build_remote_registry",
    "param",
    "value_kind",
    "value_to_jsonable",
]
