"""Data shapes flowing through the web retrieval pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

ORIGIN_SPLITTER = "paragraph-splitter"
ORIGIN_EVIDENCE = "evidence-extractor"
ORIGIN_KG = "kg"


@dataclass(frozen=True)
class SearchResult:
    url: str
    rank: int
    title: str = ""
    snippet: str = ""


@dataclass(frozen=True)
class Quote:
    """A candidate evidence passage with provenance and stage scores."""

    text: str
    origin: str
    source_url: str | None = None
    page_rank: int = 0
    char_offset: int = 0
    filter_score: float | None = None
    rerank_score: float | None = None

    def as_dict(self) -> dict:
        return {
            "text": self.text,
            "origin": self.origin,
            "source_url": self.source_url,
            "page_rank": self.page_rank,
            "char_offset": self.char_offset,
            "filter_score": self.filter_score,
            "rerank_score": self.rerank_score,
        }


@dataclass
class RetrievalTrace:
    """Per-stage wall times (seconds) and candidate counts for one retrieval."""

    search_seconds: float = 0.0
    fetch_seconds: float = 0.0
    extract_seconds: float = 0.0
    filter_rerank_seconds: float = 0.0
    dedup_seconds: float = 0.0
    pages_fetched: int = 0
    pages_failed: int = 0
    candidates_splitter: int = 0
    candidates_evidence: int = 0
    candidates_after_filter: int = 0
    final_quotes: int = 0
    search_cache_hit: bool = False
    page_cache_hits: int = 0
    errors: list[str] = field(default_factory=list)

    @property
    def total_seconds(self) -> float:
        return (self.search_seconds + self.fetch_seconds + self.extract_seconds
                + self.filter_rerank_seconds + self.dedup_seconds)

    def as_dict(self) -> dict:
        return {
            "seconds": {
                "search": self.search_seconds,
                "fetch": self.fetch_seconds,
                "extract": self.extract_seconds,
                "filter_rerank": self.filter_rerank_seconds,
                "dedup": self.dedup_seconds,
                "total": self.total_seconds,
            },
            "counts": {
                "pages_fetched": self.pages_fetched,
                "pages_failed": self.pages_failed,
                "candidates_splitter": self.candidates_splitter,
                "candidates_evidence": self.candidates_evidence,
                "candidates_after_filter": self.candidates_after_filter,
                "final_quotes": self.final_quotes,
            },
            "cache": {
                "search_hit": self.search_cache_hit,
                "page_hits": self.page_cache_hits,
            },
            "errors": list(self.errors),
        }
