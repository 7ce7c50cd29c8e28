"""Search backends: live HTTP engine, replay-from-cache, plus the caching layer.

The engine protocol is a single POST of ``{"query": ..., "k": ...}`` that
returns a JSON list of ``{"url", "title", "snippet", "rank"}`` objects in
rank order. The API key, when required, travels only in the Authorization
header and is read from the environment, never from flags.
"""

from __future__ import annotations

import json

import requests

from ..errors import RetrievalError
from .cache import NS_SEARCH, PersistentCache, normalize_query
from .types import SearchResult


class HttpSearchBackend:
    def __init__(self, endpoint: str, api_key: str | None = None, timeout: float = 15.0):
        if not endpoint:
            raise RetrievalError("no search endpoint configured "
                                 "(set SEARCH_API_ENDPOINT)")
        self.endpoint = endpoint
        self.api_key = api_key
        self.timeout = timeout

    def search(self, query: str, k: int) -> list[SearchResult]:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(self.endpoint, json={"query": query, "k": k},
                                 headers=headers, timeout=self.timeout)
        except requests.RequestException as exc:
            raise RetrievalError(f"search engine unreachable: {exc}") from exc
        if not 200 <= resp.status_code < 300:
            raise RetrievalError(
                f"search engine returned HTTP {resp.status_code}",
                status=resp.status_code,
            )
        return _parse_results(resp.json(), k)


def _parse_results(raw, k: int) -> list[SearchResult]:
    if not isinstance(raw, list):
        raise RetrievalError("search engine response must be a JSON list")
    ordered = sorted(raw, key=lambda item: int(item["rank"]))
    # ranks are renumbered so they are always unique and contiguous from 1
    return [
        SearchResult(url=item["url"], rank=position,
                     title=item.get("title", ""), snippet=item.get("snippet", ""))
        for position, item in enumerate(ordered[:k], start=1)
    ]


class CachingSearchClient:
    """Serves results from the persistent cache, falling back to a backend.

    Cache entries are keyed by the normalized query and store the result
    list together with the ``k`` they were fetched at; a request for more
    results than were cached goes back to the engine.
    """

    def __init__(self, backend: HttpSearchBackend | None, cache: PersistentCache):
        self.backend = backend
        self.cache = cache

    def search(self, query: str, k: int) -> tuple[list[SearchResult], bool]:
        """Return (results, served_from_cache)."""
        if not query.strip():
            raise ValueError("query must be non-empty")
        key = normalize_query(query)
        cached = self.cache.get(NS_SEARCH, key)
        if cached is not None:
            entry = json.loads(cached)
            if entry["k"] >= k or len(entry["results"]) < entry["k"]:
                results = [SearchResult(**r) for r in entry["results"]]
                return results[:k], True
        if self.backend is None:
            raise RetrievalError(
                f"query not in cache and no live backend configured: {query!r}"
            )
        results = self.backend.search(query, k)
        self.cache.put(NS_SEARCH, key, json.dumps({
            "k": k,
            "results": [vars(r) for r in results],
        }))
        return results, False


def replay_client(cache: PersistentCache) -> CachingSearchClient:
    """A client that only ever answers from the cache (offline replay)."""
    return CachingSearchClient(backend=None, cache=cache)
