"""Page fetching with the persistent cache in front of the network."""

from __future__ import annotations

import threading
from urllib.parse import urlsplit

import requests

from ..errors import RetrievalError
from .cache import NS_PAGE, PersistentCache, canonical_url


class PageFetcher:
    def __init__(self, cache: PersistentCache, timeout: float = 15.0,
                 user_agent: str = "kgwebqa/0.1"):
        self.cache = cache
        self.timeout = timeout
        self.user_agent = user_agent
        self._lock = threading.Lock()
        self.network_calls = 0
        self.cache_hits = 0

    def fetch(self, url: str) -> str:
        """Return the raw HTML body of ``url``, caching it for later runs."""
        parts = urlsplit(url)
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise ValueError(f"malformed URL: {url!r}")
        key = canonical_url(url)
        cached = self.cache.get(NS_PAGE, key)
        if cached is not None:
            with self._lock:
                self.cache_hits += 1
            return cached
        with self._lock:
            self.network_calls += 1
        try:
            resp = requests.get(url, timeout=self.timeout,
                                headers={"User-Agent": self.user_agent})
        except requests.RequestException as exc:
            raise RetrievalError(f"fetch failed for {url}: {exc}") from exc
        if not 200 <= resp.status_code < 300:
            raise RetrievalError(f"fetch of {url} returned HTTP {resp.status_code}",
                                 status=resp.status_code)
        body = resp.text
        self.cache.put(NS_PAGE, key, body)
        return body
