"""Canonical JSON helpers.

The wire protocol and the golden-exchange suite compare bodies byte for byte,
so every JSON document that crosses a process boundary is rendered through
canonical_json: sorted keys, no whitespace, UTF-8 without ASCII escaping.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Any


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_json_bytes(obj: Any) -> bytes:
    return canonical_json(obj).encode("utf-8")


def dump_pretty(obj: Any) -> str:
    """Stable human-facing rendering for files we also diff byte-wise."""
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    """Write via temp file + rename so readers never observe a partial file."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
