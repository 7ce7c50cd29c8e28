"""Local HTTP server playing both search engine and web for offline runs.

It answers the search protocol (POST with ``{"query", "k"}``) from a canned
manifest and serves page bodies at ``/pages/<name>``, so the whole retrieval
stack can run against it by pointing SEARCH_API_ENDPOINT at
``<base_url>/search``. Per-path hit counters make cache behavior testable.
"""

from __future__ import annotations

import json
import threading
from collections import Counter
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .cache import normalize_query


class FixtureWebServer:
    def __init__(self, search_results: dict[str, list[dict]] | None = None,
                 pages: dict[str, str] | None = None):
        """``search_results``: query -> result dicts; ``pages``: name -> HTML.

        Result dicts may use ``{"page": <name>}`` instead of ``"url"``; the
        URL is then filled in with this server's address at startup.
        """
        self.search_results = {
            normalize_query(q): results for q, results in (search_results or {}).items()
        }
        self.pages = dict(pages or {})
        self.hits: Counter[str] = Counter()
        self._server = ThreadingHTTPServer(("127.0.0.1", 0), self._make_handler())
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    @property
    def search_endpoint(self) -> str:
        return f"{self.base_url}/search"

    def page_url(self, name: str) -> str:
        return f"{self.base_url}/pages/{name}"

    def start(self) -> "FixtureWebServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "FixtureWebServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()

    def _results_for(self, query: str) -> list[dict]:
        raw = self.search_results.get(normalize_query(query), [])
        results = []
        for i, item in enumerate(raw, start=1):
            entry = dict(item)
            if "page" in entry:
                entry["url"] = self.page_url(entry.pop("page"))
            entry.setdefault("rank", i)
            entry.setdefault("title", "")
            entry.setdefault("snippet", "")
            results.append(entry)
        return results

    def _make_handler(self):
        server = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                server.hits[self.path] += 1
                if self.path != "/search":
                    self._send(404, json.dumps({"error": "not found"}), "application/json")
                    return
                length = int(self.headers.get("Content-Length", 0))
                payload = json.loads(self.rfile.read(length))
                results = server._results_for(payload.get("query", ""))
                results = results[: int(payload.get("k", len(results)))]
                self._send(200, json.dumps(results), "application/json")

            def do_GET(self):
                server.hits[self.path] += 1
                if self.path.startswith("/pages/"):
                    name = self.path[len("/pages/"):]
                    body = server.pages.get(name)
                    if body is not None:
                        self._send(200, body, "text/html; charset=utf-8")
                        return
                self._send(404, "not found", "text/plain")

            def _send(self, status: int, body: str, content_type: str):
                data = body.encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", content_type)
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        return Handler
