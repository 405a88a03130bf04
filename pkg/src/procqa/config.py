"""Run configuration shared by the CLI and the benchmark runner.

Endpoints and the API key come from PROCQA_* environment variables unless a
flag overrides them, keeping secrets out of argv and letting CI default to the
fixture backend with no configuration at all.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError

ENV_TOOL_ENDPOINT = "PROCQA_TOOL_ENDPOINT"
ENV_PLANNER_ENDPOINT = "PROCQA_PLANNER_ENDPOINT"
ENV_JUDGE_ENDPOINT = "PROCQA_JUDGE_ENDPOINT"
ENV_API_KEY = "PROCQA_API_KEY"


@dataclass
class RunConfig:
    dataset_path: str = ""
    backend_mode: str = "fixture"  # fixture | remote
    planner_mode: str = "template"  # template | llm
    frames_n: int = 50
    top_k: int = 4
    parallelism: int = 1
    matching: str = "optimal"  # optimal | greedy
    edit_thresh: float = 0.2
    cos_thresh: float = 0.95
    blind_thresh: float = 3.0
    tool_endpoint: Optional[str] = None
    planner_endpoint: Optional[str] = None
    judge_endpoint: Optional[str] = None
    api_key: Optional[str] = None
    task_graph_path: Optional[str] = None
    output_dir: Optional[str] = None
    object_hint: Optional[str] = None
    planner_retries: int = 2

    def __post_init__(self):
        self.tool_endpoint = self.tool_endpoint or os.environ.get(ENV_TOOL_ENDPOINT)
        self.planner_endpoint = self.planner_endpoint or os.environ.get(
            ENV_PLANNER_ENDPOINT
        )
        self.judge_endpoint = self.judge_endpoint or os.environ.get(ENV_JUDGE_ENDPOINT)
        self.api_key = self.api_key or os.environ.get(ENV_API_KEY)

    def validate(self) -> "RunConfig":
        if self.backend_mode not in ("fixture", "remote"):
            raise ConfigError(f"unknown backend mode {self.backend_mode!r}")
        if self.planner_mode not in ("template", "llm"):
            raise ConfigError(f"unknown planner mode {self.planner_mode!r}")
        if self.matching not in ("optimal", "greedy"):
            raise ConfigError(f"unknown matching policy {self.matching!r}")
        if self.frames_n < 1:
            raise ConfigError("frames n must be >= 1")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if self.backend_mode == "remote" and not self.tool_endpoint:
            raise ConfigError(
                f"remote backend requires an endpoint ({ENV_TOOL_ENDPOINT} or --tool-endpoint)"
            )
        if self.planner_mode == "llm" and not self.planner_endpoint:
            raise ConfigError(
                f"llm planner requires an endpoint ({ENV_PLANNER_ENDPOINT} or --planner-endpoint)"
            )
        return self
