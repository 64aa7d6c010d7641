"""Minimal threaded JSON-over-HTTP server shared by the controller facade
and the gateway.

Synchronous by design: domain modules are single-writer, request volumes
are desk-scale, and a thread per connection keeps server-sent event
streams trivial (one long-lived handler writing chunks).
"""

from __future__ import annotations

import json
import re
import socket
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable, Iterator, Optional
from urllib.parse import parse_qs, urlsplit

from .errors import ApdtError, BindFailure


class Request:
    def __init__(self, method: str, path: str, query: dict, headers, body: Optional[bytes]):
        self.method = method
        self.path = path
        self.query = query  # str -> list[str]
        self.headers = headers
        self.body = body
        self.params: dict[str, str] = {}

    def q(self, name: str, default: Optional[str] = None) -> Optional[str]:
        vals = self.query.get(name)
        return vals[0] if vals else default

    def json(self) -> dict:
        if not self.body:
            return {}
        try:
            return json.loads(self.body)
        except json.JSONDecodeError as e:
            raise ApdtErrorBadJson(str(e)) from e


class ApdtErrorBadJson(ApdtError):
    code = "bad_json"
    http_status = 400


class EventStream:
    """Marker return value: handler wants a text/event-stream response."""

    def __init__(self, events: Iterator[str]):
        self.events = events


Handler = Callable[[Request], object]


class JsonHttpServer:
    def __init__(self, host: str = "127.0.0.1", port: int = 0, auth_token: Optional[str] = None):
        self._routes: list[tuple[str, re.Pattern, Handler]] = []
        self.auth_token = auth_token
        kit = self

        class _Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, fmt, *args):  # quiet by default
                pass

            def _dispatch(self, method: str):
                try:
                    kit._handle(self, method)
                except (BrokenPipeError, ConnectionResetError):
                    pass

            def do_GET(self):
                self._dispatch("GET")

            def do_POST(self):
                self._dispatch("POST")

            def do_DELETE(self):
                self._dispatch("DELETE")

        try:
            self._httpd = ThreadingHTTPServer((host, port), _Handler)
        except OSError as e:
            raise BindFailure(f"cannot bind {host}:{port}: {e}") from e
        self._httpd.daemon_threads = True
        self._thread: Optional[threading.Thread] = None

    @property
    def address(self) -> tuple[str, int]:
        return self._httpd.server_address[:2]

    @property
    def base_url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}"

    def route(self, method: str, pattern: str, handler: Handler) -> None:
        """Register a handler; `{name}` path segments become request params."""
        regex = re.sub(r"\{(\w+)\}", r"(?P<\1>[^/]+)", pattern)
        self._routes.append((method, re.compile(f"^{regex}$"), handler))

    def start(self) -> None:
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()

    def serve_forever(self) -> None:
        self._httpd.serve_forever()

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()

    # -- internals ---------------------------------------------------------

    def _handle(self, h: BaseHTTPRequestHandler, method: str) -> None:
        parts = urlsplit(h.path)
        path = parts.path
        query = parse_qs(parts.query)

        if self.auth_token is not None:
            supplied = h.headers.get("Authorization", "")
            if supplied != f"Bearer {self.auth_token}":
                self._send_json(h, 401, {"error": "auth_rejected", "detail": "bad bearer token"})
                return

        body = None
        length = int(h.headers.get("Content-Length") or 0)
        if length:
            body = h.rfile.read(length)

        for m, regex, handler in self._routes:
            if m != method:
                continue
            match = regex.match(path)
            if not match:
                continue
            req = Request(method, path, query, h.headers, body)
            req.params = match.groupdict()
            try:
                result = handler(req)
            except ApdtError as e:
                self._send_json(h, e.http_status, e.to_json())
                return
            if isinstance(result, EventStream):
                self._stream(h, result)
                return
            status = 200
            if isinstance(result, tuple):
                status, result = result
            self._send_json(h, status, result)
            return

        self._send_json(h, 404, {"error": "not_found", "detail": f"no route {method} {path}"})

    @staticmethod
    def _send_json(h: BaseHTTPRequestHandler, status: int, obj) -> None:
        payload = json.dumps(obj).encode()
        h.send_response(status)
        h.send_header("Content-Type", "application/json")
        h.send_header("Content-Length", str(len(payload)))
        h.send_header("Access-Control-Allow-Origin", "*")
        h.end_headers()
        h.wfile.write(payload)

    @staticmethod
    def _stream(h: BaseHTTPRequestHandler, stream: EventStream) -> None:
        # Chunked framing so streaming clients see each event the moment it
        # is written instead of waiting for a read buffer to fill.
        h.send_response(200)
        h.send_header("Content-Type", "text/event-stream")
        h.send_header("Cache-Control", "no-cache")
        h.send_header("Access-Control-Allow-Origin", "*")
        h.send_header("Transfer-Encoding", "chunked")
        h.end_headers()
        try:
            for chunk in stream.events:
                data = chunk.encode()
                h.wfile.write(f"{len(data):X}\r\n".encode() + data + b"\r\n")
                h.wfile.flush()
            h.wfile.write(b"0\r\n\r\n")
        except (BrokenPipeError, ConnectionResetError, socket.timeout):
            pass
