"""HTTP/1.1 surface: POST /infer, GET /healthz, /readyz, /metrics.

When the security chain requires mTLS the listener wraps its socket with a
TLS 1.2+ context that demands a client certificate; the peer identity is
then the certificate's common name.
"""
from __future__ import annotations

import json
import ssl
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..errors import QueueFullError
from ..telemetry.exposition import render_exposition
from .batching import InferenceRequest
from .service import InferenceService

_STATUS_BY_ERROR = {
    "throttled": 429,
    "malformed": 401,
    "bad_signature": 401,
    "expired": 401,
    "unknown_key": 401,
    "bad_issuer": 401,
    "bad_claims": 401,
    "forbidden": 403,
    "invalid_input": 400,
}


class ServingApp:
    def __init__(self, service: InferenceService, host: str = "127.0.0.1",
                 port: int = 0, ssl_context: ssl.SSLContext | None = None,
                 request_timeout_s: float = 30.0):
        self.service = service
        self.request_timeout_s = request_timeout_s
        app = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, *args):  # quiet by default
                pass

            def _send_json(self, status: int, body: dict) -> None:
                data = json.dumps(body).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def _peer(self) -> str:
                sock = self.connection
                if isinstance(sock, ssl.SSLSocket):
                    cert = sock.getpeercert()
                    if cert:
                        for rdn in cert.get("subject", ()):
                            for key, value in rdn:
                                if key == "commonName":
                                    return value
                return f"{self.client_address[0]}:{self.client_address[1]}"

            def do_GET(self) -> None:
                if self.path == "/healthz":
                    probe = app.service.lifecycle.probe()
                    self._send_json(200, {"live": probe.live, "state": probe.state})
                elif self.path == "/readyz":
                    probe = app.service.lifecycle.probe()
                    status = 200 if probe.ready else 503
                    self._send_json(status, {"ready": probe.ready, "state": probe.state,
                                             "cause": probe.cause})
                elif self.path == "/metrics":
                    app.service.refresh_gauges()
                    text = render_exposition(app.service.registry).encode()
                    self.send_response(200)
                    self.send_header("Content-Type", "text/plain; version=0.0.4")
                    self.send_header("Content-Length", str(len(text)))
                    self.end_headers()
                    self.wfile.write(text)
                else:
                    self._send_json(404, {"error": "not found"})

            def do_POST(self) -> None:
                if self.path == "/infer":
                    self._handle_infer()
                elif self.path == "/admin/keep-warm":
                    app.service.keep_warm_ping()
                    self._send_json(200, {"state": app.service.lifecycle.state})
                else:
                    self._send_json(404, {"error": "not found"})

            def _handle_infer(self) -> None:
                try:
                    length = int(self.headers.get("Content-Length", "0"))
                    body = json.loads(self.rfile.read(length) or b"{}")
                    records = body["records"]
                except (ValueError, KeyError) as exc:
                    self._send_json(400, {"error": f"bad request body: {exc}"})
                    return
                token = None
                auth = self.headers.get("Authorization", "")
                if auth.startswith("Bearer "):
                    token = auth[len("Bearer "):]
                request_id = body.get("id") or uuid.uuid4().hex
                try:
                    request = InferenceRequest(request_id=request_id, features=records,
                                               token=token, peer=self._peer())
                except Exception as exc:
                    self._send_json(400, {"error": f"bad records: {exc}"})
                    return
                try:
                    ticket = app.service.submit(request)
                except QueueFullError:
                    self._send_json(429, {"error": "backpressure", "id": request_id})
                    return
                try:
                    payload = ticket.future.result(timeout=app.request_timeout_s)
                except Exception as exc:
                    self._send_json(500, {"error": f"timeout or failure: {exc}",
                                          "id": request_id})
                    return
                if "error" in payload:
                    status = _STATUS_BY_ERROR.get(payload["error"], 500)
                    self._send_json(status, payload)
                    return
                if len(payload["results"]) == 1:
                    flat = dict(payload["results"][0])
                    flat.update(id=payload["id"], model_version=payload["model_version"],
                                latency_ms=payload["latency_ms"])
                    self._send_json(200, flat)
                else:
                    self._send_json(200, payload)

        self.server = ThreadingHTTPServer((host, port), Handler)
        if ssl_context is not None:
            self.server.socket = ssl_context.wrap_socket(self.server.socket,
                                                         server_side=True)
        self.host, self.port = self.server.server_address[:2]
        self._thread: threading.Thread | None = None

    def start(self) -> "ServingApp":
        self._thread = threading.Thread(target=self.server.serve_forever,
                                        name="http-server", daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self.server.shutdown()
        self.server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
