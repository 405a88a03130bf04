from .app import ServerConfig, create_app
from .assets import Asset, AssetRegistry
from .protocol import ToolFault, canonical_json, canonical_json_bytes
from .stubtools import TOOL_NAMES, StubToolbox
from .suite import StubVideo, load_stub_suite

__all__ = [
    "Asset",
    "AssetRegistry",
    "ServerConfig",
    "StubToolbox",
    "StubVideo",
    "TOOL_NAMES",
    "ToolFault",
    "canonical_json",
    "canonical_json_bytes",
    "create_app",
    "load_stub_suite",
]
