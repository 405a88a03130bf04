from __future__ import annotations

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from toolserver import ServerConfig, create_app

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
SUITE_PATH = REPO_ROOT / "src" / "procqa" / "fixtures" / "data" / "butter_suite.json"
GOLDEN_WIRE_DIR = REPO_ROOT / "goldens" / "wire"


def load_goldens() -> list[dict]:
    return [
        json.loads(path.read_text(encoding="utf-8"))
        for path in sorted(GOLDEN_WIRE_DIR.glob("*.json"))
    ]


@pytest.fixture(scope="session")
def app(tmp_path_factory):
    cache = tmp_path_factory.mktemp("assets")
    return create_app(ServerConfig(stub=True, suite_path=str(SUITE_PATH), asset_cache_dir=str(cache)))


@pytest.fixture(scope="session")
def client(app) -> TestClient:
    return TestClient(app)
