"""Persistent key-value cache for search results and fetched pages.

Backed by a single sqlite file so entries survive across runs, multiple
readers and writers are safe (last write wins), and the CLI can report
stats without custom tooling. Entries carry a stored-at timestamp; a TTL of
``None`` (the default) never expires, matching offline evaluation where the
corpus is frozen.
"""

from __future__ import annotations

import re
import sqlite3
import threading
import time
from pathlib import Path
from urllib.parse import urlsplit, urlunsplit

NS_SEARCH = "search"
NS_PAGE = "page"

_WS = re.compile(r"\s+")


def normalize_query(query: str) -> str:
    return _WS.sub(" ", query.strip()).lower()


def canonical_url(url: str) -> str:
    """Lowercase scheme/host, drop the fragment, default empty path to /."""
    parts = urlsplit(url)
    return urlunsplit((parts.scheme.lower(), parts.netloc.lower(),
                       parts.path or "/", parts.query, ""))


class PersistentCache:
    def __init__(self, path: str | Path, ttl_seconds: float | None = None):
        self.path = Path(path)
        self.ttl_seconds = ttl_seconds
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        with self._lock:
            self._conn.execute("PRAGMA journal_mode=WAL")
            self._conn.execute(
                "CREATE TABLE IF NOT EXISTS entries ("
                " namespace TEXT NOT NULL,"
                " key TEXT NOT NULL,"
                " value TEXT NOT NULL,"
                " stored_at REAL NOT NULL,"
                " PRIMARY KEY (namespace, key))"
            )
            self._conn.commit()

    def get(self, namespace: str, key: str) -> str | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT value, stored_at FROM entries WHERE namespace=? AND key=?",
                (namespace, key),
            ).fetchone()
        if row is None:
            return None
        value, stored_at = row
        if self.ttl_seconds is not None and time.time() - stored_at > self.ttl_seconds:
            return None
        return value

    def put(self, namespace: str, key: str, value: str) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO entries (namespace, key, value, stored_at)"
                " VALUES (?, ?, ?, ?)",
                (namespace, key, value, time.time()),
            )
            self._conn.commit()

    def stats(self) -> dict:
        with self._lock:
            rows = self._conn.execute(
                "SELECT namespace, COUNT(*) FROM entries GROUP BY namespace"
            ).fetchall()
        by_namespace = {ns: count for ns, count in rows}
        return {
            "path": str(self.path),
            "entries": sum(by_namespace.values()),
            "namespaces": by_namespace,
            "ttl_seconds": self.ttl_seconds,
        }

    def clear(self) -> int:
        with self._lock:
            removed = self._conn.execute("SELECT COUNT(*) FROM entries").fetchone()[0]
            self._conn.execute("DELETE FROM entries")
            self._conn.commit()
        return removed

    def close(self) -> None:
        with self._lock:
            self._conn.close()
