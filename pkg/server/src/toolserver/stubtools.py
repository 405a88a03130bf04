"""Stub-mode tool execution: deterministic outputs from fixture tables.

Semantics mirror the recorded golden exchanges exactly (messages included);
any drift shows up as a byte-level conformance failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .assets import AssetRegistry
from .protocol import ToolFault, span_to_seconds
from .suite import StubVideo, clip_spans, merge_spans, span_contains

TOOL_NAMES = (
    "Video_Load",
    "Frame_Sample",
    "Frame_Trim",
    "Frame_Retrieve",
    "Obj_Det",
    "Action_Rec",
    "Img_Caption",
    "Context_Sum",
    "Answer_Gen",
)


@dataclass
class StubToolbox:
    videos: dict[str, StubVideo]
    assets: Optional[AssetRegistry] = None

    # -- helpers ---------------------------------------------------------

    def _video(self, video_id: str) -> StubVideo:
        video = self.videos.get(video_id)
        if video is None:
            raise ToolFault("not_found", f"no fixture video {video_id!r}")
        return video

    @staticmethod
    def _count(value, what: str) -> int:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ToolFault("invalid_count", f"{what} must be an integer")
        if isinstance(value, float):
            if not value.is_integer():
                raise ToolFault("invalid_count", f"{what} must be an integer, got {value}")
            value = int(value)
        return value

    @staticmethod
    def _frames_result(video_id: str, stamps: list[int]) -> dict:
        return {
            "video_id": video_id,
            "frames": [
                {"timestamp_ms": t, "image_ref": f"{video_id}@{t}"} for t in stamps
            ],
        }

    @staticmethod
    def _matches(query: str, label: str) -> bool:
        q, l = query.strip().lower(), label.strip().lower()
        return bool(q) and (q in l or l in q)

    # -- dispatch ---------------------------------------------------------

    def call(self, tool: str, args: dict, video_id: str, stamps: list[int]) -> dict:
        handler = getattr(self, f"_tool_{tool.lower()}", None)
        if tool not in TOOL_NAMES or handler is None:
            raise ToolFault("unknown_tool", f"no tool named {tool!r}")
        return handler(args, video_id, stamps)

    # -- the nine tools ----------------------------------------------------

    def _tool_video_load(self, args, video_id, stamps) -> dict:
        path = args.get("path", "")
        if self.assets is not None:
            asset = self.assets.lookup(path)
            if asset is not None:
                return asset.handle_result()
        if path in self.videos:
            return self.videos[path].handle_result()
        raise ToolFault("not_found", f"no fixture video {path!r}")

    def _tool_frame_sample(self, args, video_id, stamps) -> dict:
        video = self._video(video_id)
        n = self._count(args.get("n", 50), "n")
        if n < 1:
            raise ToolFault("invalid_count", f"n must be >= 1, got {n}")
        if n > video.duration_ms:
            raise ToolFault(
                "invalid_count",
                f"cannot place {n} distinct millisecond timestamps in {video.duration_ms} ms",
            )
        sampled = [((2 * i + 1) * video.duration_ms) // (2 * n) for i in range(n)]
        return self._frames_result(video_id, sampled)

    def _tool_frame_trim(self, args, video_id, stamps) -> dict:
        relation = args.get("relation", "")
        if relation not in ("before", "after", "within"):
            raise ToolFault("invalid_args", f"relation must be before/after/within, got {relation!r}")
        reference = args.get("reference")
        if reference is None:
            return self._frames_result(video_id, list(stamps))
        start_ms = round(float(reference[0]) * 1000)
        end_ms = round(float(reference[1]) * 1000)
        if relation == "before":
            kept = [t for t in stamps if t < start_ms]
        elif relation == "after":
            kept = [t for t in stamps if t >= end_ms]
        else:
            kept = [t for t in stamps if span_contains((start_ms, end_ms), t)]
        return self._frames_result(video_id, kept)

    def _tool_frame_retrieve(self, args, video_id, stamps) -> dict:
        video = self._video(video_id)
        query = args.get("query", "")
        top_k = self._count(args.get("top_k", 5), "top_k")
        if top_k < 1:
            raise ToolFault("invalid_count", f"top_k must be >= 1, got {top_k}")
        scored = [
            (
                1.0
                if any(self._matches(query, o.label) for o in video.visible_labels(t))
                else 0.0,
                t,
            )
            for t in stamps
        ]
        ranked = sorted(scored, key=lambda st: (-st[0], st[1]))
        chosen = sorted(t for _, t in ranked[:top_k])
        return self._frames_result(video_id, chosen)

    def _tool_obj_det(self, args, video_id, stamps) -> dict:
        video = self._video(video_id)
        query = args.get("query", "")
        if not query:
            raise ToolFault("invalid_args", "query must be non-empty")
        detections = [
            {
                "timestamp_ms": t,
                "label": track.label,
                "bbox": track.bbox,
                "confidence": 1.0,
            }
            for t in stamps
            for track in video.visible_labels(t)
            if self._matches(query, track.label)
        ]
        return {"detections": detections}

    def _tool_action_rec(self, args, video_id, stamps) -> dict:
        video = self._video(video_id)
        if not stamps:
            raise ToolFault("invalid_args", "Action_Rec requires at least one frame")
        extent = (stamps[0], stamps[-1] + 1)
        notes = video.actions_overlapping(extent)
        if notes:
            segments = [
                {"span": span_to_seconds(n.span), "description": n.label} for n in notes
            ]
        else:
            segments = [
                {"span": span_to_seconds((t, t + 1)), "description": "unlabeled"}
                for t in stamps
            ]
        return {"segments": segments}

    def _tool_img_caption(self, args, video_id, stamps) -> dict:
        video = self._video(video_id)
        if not stamps:
            raise ToolFault("invalid_args", "Img_Caption requires at least one frame")
        return {
            "captions": [
                {"timestamp_ms": t, "caption": video.caption_at(t)} for t in stamps
            ]
        }

    def _tool_context_sum(self, args, video_id, stamps) -> dict:
        texts = args.get("texts", [])
        if not isinstance(texts, list) or any(not isinstance(t, str) for t in texts):
            raise ToolFault("invalid_args", "texts must be a list of strings")
        return {"summary": "\n".join(texts)}

    def _tool_answer_gen(self, args, video_id, stamps) -> dict:
        video = self._video(video_id)
        question = args.get("question", "")
        if not question:
            raise ToolFault("invalid_args", "question must be non-empty")
        stored = video.answers.get(question)
        hint = [
            (round(float(a) * 1000), round(float(b) * 1000))
            for a, b in args.get("evidence_hint", [])
        ]
        evidence = stored["evidence"] if stored and stored["evidence"] else hint
        evidence = clip_spans(merge_spans(evidence), (0, video.duration_ms))
        if not evidence:
            raise ToolFault(
                "empty_evidence",
                f"no evidence for question {question!r} and no hint given",
            )
        answer = stored["answer"] if stored else ""
        return {
            "answer": answer,
            "evidence": [span_to_seconds(span) for span in evidence],
        }
