from .cache import PersistentCache, canonical_url, normalize_query
from .dedup import deduplicate
from .evidence import extract_evidence
from .fetch import PageFetcher
from .html import extract_blocks, page_text
from .pipeline import WebRetrievalConfig, retrieve_web
from .rerank import filter_and_rerank
from .search import CachingSearchClient, HttpSearchBackend, replay_client
from .split import split_blocks, split_paragraphs
from .types import (ORIGIN_EVIDENCE, ORIGIN_KG, ORIGIN_SPLITTER, Quote,
                    RetrievalTrace, SearchResult)

__all__ = [
    "PersistentCache",
    "canonical_url",
    "normalize_query",
    "deduplicate",
    "extract_evidence",
    "PageFetcher",
    "extract_blocks",
    "page_text",
    "WebRetrievalConfig",
    "retrieve_web",
    "filter_and_rerank",
    "CachingSearchClient",
    "HttpSearchBackend",
    "replay_client",
    "split_blocks",
    "split_paragraphs",
    "ORIGIN_EVIDENCE",
    "ORIGIN_KG",
    "ORIGIN_SPLITTER",
    "Quote",
    "RetrievalTrace",
    "SearchResult",
]
