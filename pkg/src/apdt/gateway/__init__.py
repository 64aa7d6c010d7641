from .api import serve_api
from .app import ApdtService, ServiceConfig
from .cli import build_parser, main, run_cli
from .events import EventBus

__all__ = [
    "ApdtService",
    "EventBus",
    "ServiceConfig",
    "build_parser",
    "main",
    "run_cli",
    "serve_api",
]
