"""FastAPI application implementing the tool wire protocol.

Endpoints: GET /v1/health, POST /v1/assets, POST /v1/tools/{tool}. Every JSON
response body is canonical (sorted keys, compact separators) so recorded
exchanges compare byte for byte. Tool-domain failures return HTTP 200 with an
ok=false envelope; asset decode failures return 422; transport-level problems
are left to the framework (5xx).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Request, Response

from .assets import AssetRegistry
from .models import ModelConfig, load_model_toolbox
from .protocol import ToolFault, canonical_json, error_payload, ok_payload
from .stubtools import StubToolbox
from .suite import load_stub_suite


@dataclass
class ServerConfig:
    stub: bool = True
    suite_path: Optional[str] = None
    asset_cache_dir: str = "asset_cache"
    models: ModelConfig = field(default_factory=ModelConfig)


def _json_response(payload: dict, status: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status,
        media_type="application/json",
    )


def create_app(config: ServerConfig) -> FastAPI:
    assets = AssetRegistry(config.asset_cache_dir)
    if config.stub:
        videos = load_stub_suite(config.suite_path) if config.suite_path else {}
        toolbox = StubToolbox(videos=videos, assets=assets)
    else:
        toolbox = load_model_toolbox(config.models)  # raises without model assets

    app = FastAPI(title="procqa-tool-server", docs_url=None, redoc_url=None)

    @app.get("/v1/health")
    def health() -> Response:
        return _json_response({"ok": True})

    @app.post("/v1/assets")
    async def register_asset(request: Request) -> Response:
        data = await request.body()
        try:
            asset = assets.register(data)
        except ToolFault as fault:
            return _json_response(error_payload(fault.code, fault.message), status=422)
        return _json_response(ok_payload(asset.handle_result()))

    @app.post("/v1/tools/{tool_name}")
    async def call_tool(tool_name: str, request: Request) -> Response:
        raw = await request.body()
        try:
            body = json.loads(raw.decode("utf-8"))
            if not isinstance(body, dict):
                raise ValueError("body must be a JSON object")
            args = body.get("args", {})
            video_id = body.get("video_id", "")
            stamps = list(body.get("frame_timestamps_ms", []))
        except (ValueError, UnicodeDecodeError) as exc:
            return _json_response(error_payload("invalid_args", f"bad request body: {exc}"))
        try:
            result = toolbox.call(tool_name, args, video_id, stamps)
        except ToolFault as fault:
            return _json_response(error_payload(fault.code, fault.message))
        return _json_response(ok_payload(result))

    return app
