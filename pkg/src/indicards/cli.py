"""Command line entry point: configure and run the HTTP service."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional

import uvicorn

from .api import create_app
from .errors import IndicardsError
from .recommend import default_rules, load_rules_file

DEFAULT_PORT = 8080
DEFAULT_DATA_DIR = "./data"


@dataclass
class ServeConfig:
    port: int = DEFAULT_PORT
    data_dir: str = DEFAULT_DATA_DIR
    rules_file: Optional[str] = None
    host: str = "127.0.0.1"
    static_dir: Optional[str] = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="indicards",
        description="Indicator specification card authoring service",
    )
    parser.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("ISC_PORT", DEFAULT_PORT)),
        help="listen port (env ISC_PORT, default %(default)s)",
    )
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("ISC_DATA_DIR", DEFAULT_DATA_DIR),
        help="storage directory (env ISC_DATA_DIR, default %(default)s)",
    )
    parser.add_argument(
        "--rules-file",
        default=os.environ.get("ISC_RULES_FILE"),
        help="override the built-in recommendation rules (env ISC_RULES_FILE)",
    )
    parser.add_argument(
        "--host",
        default=os.environ.get("ISC_HOST", "127.0.0.1"),
        help="bind address (default loopback)",
    )
    parser.add_argument(
        "--static-dir",
        default=os.environ.get("ISC_STATIC_DIR"),
        help="serve a built frontend from this directory at /",
    )
    return parser


def serve(config: ServeConfig) -> None:
    """Validate configuration, build the app, and block serving it."""
    rules = load_rules_file(config.rules_file) if config.rules_file else default_rules()
    app = create_app(config.data_dir, rules, static_dir=config.static_dir)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = ServeConfig(
        port=args.port,
        data_dir=args.data_dir,
        rules_file=args.rules_file,
        host=args.host,
        static_dir=args.static_dir,
    )
    try:
        serve(config)
    except IndicardsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
