"""Byte-level conformance against the shared golden wire exchanges."""

from __future__ import annotations

import pytest

from conftest import load_goldens
from toolserver.protocol import canonical_json_bytes

GOLDENS = load_goldens()


@pytest.mark.parametrize("golden", GOLDENS, ids=lambda g: g["name"])
def test_golden_exchange_byte_identical(client, golden):
    response = client.post(
        f"/v1/tools/{golden['tool']}",
        content=canonical_json_bytes(golden["request"]),
        headers={"content-type": "application/json"},
    )
    assert response.status_code == 200
    assert response.content == canonical_json_bytes(golden["response"])


def test_every_tool_covered_by_goldens():
    from toolserver import TOOL_NAMES

    covered = {g["tool"] for g in GOLDENS if g["response"]["ok"]}
    assert covered == set(TOOL_NAMES)


def test_success_and_error_paths_present():
    assert any(g["response"]["ok"] for g in GOLDENS)
    assert any(not g["response"]["ok"] for g in GOLDENS)
