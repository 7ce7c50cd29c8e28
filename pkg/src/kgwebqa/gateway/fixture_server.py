"""In-process HTTP server exposing the model-service protocol over the mocks.

Lets the HTTP transport, retry behavior, and protocol shape be exercised
without any real model service. Failures can be injected per path to test
retry and error handling.
"""

from __future__ import annotations

import json
import threading
from collections import Counter
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .mock import (MockEmbeddingBackend, MockGenerationBackend,
                   MockScoringBackend, MockSpanBackend)


class ModelFixtureServer:
    def __init__(self, embedder=None, scorer=None, spanner=None, generator=None):
        self.embedder = embedder or MockEmbeddingBackend()
        self.scorer = scorer or MockScoringBackend()
        self.spanner = spanner or MockSpanBackend()
        self.generator = generator or MockGenerationBackend()
        self.hits: Counter[str] = Counter()
        self._fail_queue: dict[str, list[int]] = {}
        self._lock = threading.Lock()
        self._server = ThreadingHTTPServer(("127.0.0.1", 0), self._make_handler())
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "ModelFixtureServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "ModelFixtureServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()

    def fail_next(self, path: str, statuses: list[int]) -> None:
        """Make the next requests to ``path`` fail with the given statuses."""
        with self._lock:
            self._fail_queue.setdefault(path, []).extend(statuses)

    def _pop_failure(self, path: str) -> int | None:
        with self._lock:
            queue = self._fail_queue.get(path)
            return queue.pop(0) if queue else None

    def _handle(self, path: str, payload: dict) -> dict:
        if path == "/embed":
            return {"vectors": self.embedder.embed(payload["texts"])}
        if path == "/score":
            return {"scores": self.scorer.score(payload["tier"], payload["query"],
                                                payload["passages"])}
        if path == "/spans":
            spans = self.spanner.extract(payload["query"], payload["document"],
                                         payload["max_spans"])
            return {"spans": [{"start": s, "end": e} for s, e in spans]}
        if path == "/generate":
            return {"text": self.generator.generate(payload["prompt"],
                                                    payload["max_tokens"])}
        raise KeyError(path)

    def _make_handler(self):
        server = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                server.hits[self.path] += 1
                forced = server._pop_failure(self.path)
                if forced is not None:
                    self._send(forced, {"error": f"injected failure {forced}"})
                    return
                length = int(self.headers.get("Content-Length", 0))
                try:
                    payload = json.loads(self.rfile.read(length))
                    body = server._handle(self.path, payload)
                except KeyError:
                    self._send(404, {"error": f"no such endpoint: {self.path}"})
                except (ValueError, TypeError) as exc:
                    self._send(400, {"error": str(exc)})
                else:
                    self._send(200, body)

            def _send(self, status: int, body: dict):
                data = json.dumps(body).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        return Handler
