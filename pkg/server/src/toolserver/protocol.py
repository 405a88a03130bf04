"""Wire-protocol encoding: canonical JSON bodies and the error envelope.

Conformance is byte-level: every response is rendered as canonical JSON
(sorted keys, compact separators, UTF-8) so recorded exchanges can be compared
with ==.
"""

from __future__ import annotations

import json
from typing import Any


class ToolFault(Exception):
    """A protocol-level tool error with a stable code and message."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_json_bytes(obj: Any) -> bytes:
    return canonical_json(obj).encode("utf-8")


def ok_payload(result: Any) -> dict:
    return {"ok": True, "result": result}


def error_payload(code: str, message: str) -> dict:
    return {"ok": False, "error": {"code": code, "message": message}}


def ms_to_seconds(ms: int) -> float:
    return round(ms / 1000.0, 3)


def seconds_to_ms(seconds: float) -> int:
    return round(float(seconds) * 1000)


def span_to_seconds(span: tuple[int, int]) -> list[float]:
    return [ms_to_seconds(span[0]), ms_to_seconds(span[1])]
