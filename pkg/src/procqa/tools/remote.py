"""Remote backend speaking the HTTP+JSON tool wire protocol.

Requests go to ``POST {endpoint}/v1/tools/{tool_name}`` with a canonical-JSON
body ``{"args": {...}, "video_id": "...", "frame_timestamps_ms": [...]}``.
Images are referenced by server-side video_id + timestamps, never inlined.
Responses are ``{"ok": true, "result": ...}`` or
``{"ok": false, "error": {"code": ..., "message": ...}}``.

Transport is injectable so tests replay recorded exchanges without a network;
the default transport uses requests with a per-call timeout, an in-flight cap,
and bounded retry with exponential backoff.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..errors import (
    BackendUnavailable,
    CorruptAsset,
    EmptyEvidence,
    InvalidArgs,
    InvalidCount,
    NotFound,
    ToolError,
)
from ..jsonutil import canonical_json_bytes
from ..temporal import SpanSet, TimeSpan, span_to_seconds, spanset_clip, spanset_from_seconds
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

Transport = Callable[[str, bytes, dict, float], tuple[int, bytes]]

_ERROR_CLASSES = {
    "not_found": NotFound,
    "corrupt_asset": CorruptAsset,
    "unknown_tool": InvalidArgs,
    "invalid_args": InvalidArgs,
    "invalid_count": InvalidCount,
    "empty_evidence": EmptyEvidence,
    "backend_unavailable": BackendUnavailable,
}


def _requests_transport(url: str, body: bytes, headers: dict, timeout_s: float):
    import requests

    try:
        resp = requests.post(url, data=body, headers=headers, timeout=timeout_s)
    except requests.RequestException as exc:
        raise ConnectionError(str(exc)) from exc
    return resp.status_code, resp.content


@dataclass
class RemoteClient:
    endpoint: str
    api_key: Optional[str] = None
    timeout_s: float = 30.0
    retries: int = 2
    backoff_s: float = 0.25
    max_in_flight: int = 8
    transport: Transport = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.transport is None:
            self.transport = _requests_transport
        self.endpoint = self.endpoint.rstrip("/")
        self._gate = threading.Semaphore(self.max_in_flight)

    def _headers(self) -> dict:
        headers = {"content-type": "application/json"}
        if self.api_key:
            headers["authorization"] = f"Bearer {self.api_key}"
        return headers

    def post(self, path: str, payload: dict) -> dict:
        """POST canonical JSON; retry transient failures; map protocol errors."""
        url = f"{self.endpoint}{path}"
        body = canonical_json_bytes(payload)
        last_failure: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff_s * (2 ** (attempt - 1)))
            try:
                with self._gate:
                    status, raw = self.transport(url, body, self._headers(), self.timeout_s)
            except (ConnectionError, TimeoutError, OSError) as exc:
                last_failure = exc
                continue
            if status >= 500:
                last_failure = ConnectionError(f"server error {status}")
                continue
            try:
                doc = json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise BackendUnavailable(f"unparseable response from {url}: {exc}") from exc
            if doc.get("ok"):
                return doc.get("result", {})
            error = doc.get("error") or {}
            code = error.get("code", "")
            message = error.get("message", f"backend error {code!r}")
            raise _ERROR_CLASSES.get(code, ToolError)(message)
        raise BackendUnavailable(
            f"{url} unreachable after {self.retries + 1} attempts: {last_failure}"
        )

    def call_tool(self, tool_name: str, args: dict, video_id: str, frame_timestamps_ms: list[int]) -> dict:
        payload = {
            "args": args,
            "video_id": video_id,
            "frame_timestamps_ms": frame_timestamps_ms,
        }
        return self.post(f"/v1/tools/{tool_name}", payload)


def _client(env: ToolEnv) -> RemoteClient:
    if env.remote is None:
        raise BackendUnavailable("remote backend configured without a client")
    return env.remote


def _reference_payload(reference) -> list[float] | None:
    if isinstance(reference, FrameCollection):
        ref = reference.envelope()
    else:
        ref = as_spanset(reference).bounding_span()
    return span_to_seconds(ref) if ref else None


def _parse_frames(result: dict) -> FrameCollection:
    frames = tuple(
        Frame(f["timestamp_ms"], f["image_ref"]) for f in result.get("frames", [])
    )
    return FrameCollection(result.get("video_id", ""), frames)


def video_load(env: ToolEnv, path: str) -> VideoHandle:
    result = _client(env).call_tool("Video_Load", {"path": path}, "", [])
    return VideoHandle(
        video_id=result["video_id"],
        fps=float(result["fps"]),
        duration_ms=int(result["duration_ms"]),
        width=int(result["width"]),
        height=int(result["height"]),
    )


def frame_sample(env: ToolEnv, video: VideoHandle, n) -> FrameCollection:
    result = _client(env).call_tool("Frame_Sample", {"n": n}, video.video_id, [])
    return _parse_frames(result)


def frame_trim(env: ToolEnv, frames: FrameCollection, relation: str, reference) -> FrameCollection:
    args = {"relation": relation, "reference": _reference_payload(reference)}
    result = _client(env).call_tool(
        "Frame_Trim", args, frames.video_id, frames.timestamps()
    )
    return _parse_frames(result)


def frame_retrieve(env: ToolEnv, frames: FrameCollection, query: str, top_k) -> FrameCollection:
    args = {"query": query, "top_k": top_k}
    result = _client(env).call_tool(
        "Frame_Retrieve", args, frames.video_id, frames.timestamps()
    )
    return _parse_frames(result)


def obj_det(env: ToolEnv, frames: FrameCollection, query: str) -> DetectionList:
    result = _client(env).call_tool(
        "Obj_Det", {"query": query}, frames.video_id, frames.timestamps()
    )
    return DetectionList(
        tuple(
            Detection(
                timestamp_ms=d["timestamp_ms"],
                label=d["label"],
                bbox=tuple(d["bbox"]),
                confidence=float(d["confidence"]),
            )
            for d in result.get("detections", [])
        )
    )


def action_rec(env: ToolEnv, frames: FrameCollection) -> ActionSegmentList:
    result = _client(env).call_tool(
        "Action_Rec", {}, frames.video_id, frames.timestamps()
    )
    segments = []
    for seg in result.get("segments", []):
        span = spanset_from_seconds([seg["span"]]).spans[0]
        segments.append(ActionSegment(span, seg["description"]))
    return ActionSegmentList(tuple(segments))


def img_caption(env: ToolEnv, frames: FrameCollection) -> CaptionList:
    result = _client(env).call_tool(
        "Img_Caption", {}, frames.video_id, frames.timestamps()
    )
    return CaptionList(
        tuple(Caption(c["timestamp_ms"], c["caption"]) for c in result.get("captions", []))
    )


def context_sum(env: ToolEnv, texts) -> str:
    result = _client(env).call_tool(
        "Context_Sum", {"texts": as_text_lines(texts)}, _env_video_id(env), []
    )
    return result.get("summary", "")


def answer_gen(env: ToolEnv, question: str, context, frames: FrameCollection, evidence_hint) -> AnswerValue:
    hint = as_spanset(evidence_hint) if evidence_hint is not None else SpanSet()
    args = {
        "question": question,
        "context": "\n".join(as_text_lines(context)),
        "evidence_hint": [span_to_seconds(s) for s in hint],
    }
    result = _client(env).call_tool(
        "Answer_Gen", args, frames.video_id, frames.timestamps()
    )
    evidence = spanset_from_seconds(result.get("evidence", []))
    if not evidence:
        evidence = hint
    if not evidence:
        raise EmptyEvidence(f"backend returned no evidence for {question!r}")
    if env.video is not None:
        evidence = spanset_clip(evidence, TimeSpan(0, env.video.duration_ms))
        if not evidence:
            raise EmptyEvidence("all evidence fell outside the video duration")
    return AnswerValue(answer=result.get("answer", ""), evidence=evidence)


def _env_video_id(env: ToolEnv) -> str:
    return env.video.video_id if env.video is not None else ""


REMOTE_IMPLS = {
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


def build_remote_registry() -> ToolRegistry:
    return ToolRegistry.build(Binding.REMOTE, REMOTE_IMPLS)
