"""Content-addressed video assets: registration, metadata, frame access.

The server owns decoding. Registration hashes the bytes (so duplicate uploads
return the same id), probes fps / duration / resolution with OpenCV, and
caches the file. Frames are decoded lazily and resized to 224x224 for model
inference; the engine only ever sees timestamps and opaque refs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .protocol import ToolFault

INFERENCE_SIDE = 224


@dataclass(frozen=True)
class Asset:
    video_id: str
    fps: float
    duration_ms: int
    width: int
    height: int
    path: Path

    def handle_result(self) -> dict:
        return {
            "video_id": self.video_id,
            "fps": self.fps,
            "duration_ms": self.duration_ms,
            "width": self.width,
            "height": self.height,
        }


class AssetRegistry:
    def __init__(self, cache_dir: str | Path):
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self._assets: dict[str, Asset] = {}

    def lookup(self, video_id: str) -> Optional[Asset]:
        return self._assets.get(video_id)

    def register(self, data: bytes) -> Asset:
        if not data:
            raise ToolFault("corrupt_asset", "empty upload")
        video_id = "sha256:" + hashlib.sha256(data).hexdigest()
        existing = self._assets.get(video_id)
        if existing is not None:
            return existing
        path = self.cache_dir / f"{video_id.replace(':', '_')}.mp4"
        path.write_bytes(data)
        try:
            fps, n_frames, width, height = _probe(path)
        except ToolFault:
            path.unlink(missing_ok=True)
            raise
        duration_ms = round(n_frames / fps * 1000)
        asset = Asset(video_id, fps, duration_ms, width, height, path)
        self._assets[video_id] = asset
        return asset

    def frame(self, video_id: str, timestamp_ms: int, side: int = INFERENCE_SIDE):
        """Decode one frame and resize to side x side (BGR ndarray)."""
        import cv2

        asset = self._assets.get(video_id)
        if asset is None:
            raise ToolFault("not_found", f"no registered asset {video_id!r}")
        cap = cv2.VideoCapture(str(asset.path))
        try:
            cap.set(cv2.CAP_PROP_POS_MSEC, float(timestamp_ms))
            got, frame = cap.read()
            if not got:
                raise ToolFault(
                    "invalid_args", f"no frame at {timestamp_ms} ms in {video_id!r}"
                )
            return cv2.resize(frame, (side, side))
        finally:
            cap.release()


def _probe(path: Path) -> tuple[float, int, int, int]:
    import cv2

    cap = cv2.VideoCapture(str(path))
    try:
        if not cap.isOpened():
            raise ToolFault("corrupt_asset", f"cannot decode {path.name}")
        fps = cap.get(cv2.CAP_PROP_FPS)
        n_frames = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
        width = int(cap.get(cv2.CAP_PROP_FRAME_WIDTH))
        height = int(cap.get(cv2.CAP_PROP_FRAME_HEIGHT))
        if fps <= 0 or n_frames <= 0 or width <= 0 or height <= 0:
            raise ToolFault("corrupt_asset", f"no decodable stream in {path.name}")
        return fps, n_frames, width, height
    finally:
        cap.release()
