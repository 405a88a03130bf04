from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

from procqa.config import RunConfig
from procqa.fixtures.suite import load_fixture_suite, shipped_suite_path
from procqa.orchestrator.runner import build_run_context
from procqa.tools.env import ToolEnv
from procqa.tools.local import build_local_registry

REPO_ROOT = Path(__file__).resolve().parent.parent
GOLDEN_WIRE_DIR = REPO_ROOT / "goldens" / "wire"


@pytest.fixture(scope="session")
def butter_suite():
    return load_fixture_suite(shipped_suite_path())


@pytest.fixture(scope="session")
def butter_dataset(butter_suite):
    return butter_suite.to_dataset()


@pytest.fixture()
def local_registry():
    return build_local_registry()


@pytest.fixture()
def fixture_env(butter_suite, butter_dataset):
    video = butter_dataset.videos[0]
    return ToolEnv(video=video, suite=butter_suite)


@pytest.fixture()
def fixture_ctx(butter_suite, tmp_path):
    config = RunConfig(output_dir=str(tmp_path / "out"))
    return build_run_context(config, suite=butter_suite)


def load_goldens() -> list[dict]:
    goldens = []
    for path in sorted(GOLDEN_WIRE_DIR.glob("*.json")):
        goldens.append(json.loads(path.read_text(encoding="utf-8")))
    return goldens
