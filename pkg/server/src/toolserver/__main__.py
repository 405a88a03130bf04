"""Serve the tool protocol: python -m toolserver --stub --suite suite.json"""

from __future__ import annotations

import argparse

import uvicorn

from .app import ServerConfig, create_app


def main() -> None:
    parser = argparse.ArgumentParser(prog="toolserver")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8731)
    parser.add_argument("--stub", action="store_true", help="deterministic fixture mode")
    parser.add_argument("--suite", default=None, help="fixture suite JSON (stub mode)")
    parser.add_argument("--asset-cache", default="asset_cache")
    args = parser.parse_args()
    config = ServerConfig(
        stub=args.stub, suite_path=args.suite, asset_cache_dir=args.asset_cache
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
