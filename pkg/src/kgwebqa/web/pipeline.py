"""End-to-end web retrieval: search, fetch, extract, rerank, deduplicate.

Pages are fetched and parsed concurrently, then all candidate quotes are
merged in deterministic (page rank, character offset, origin) order before
any scoring, so the final quote list does not depend on thread timing. A
failing page is logged and skipped; only the search step itself is fatal.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .. import textseg
from ..errors import PipelineError
from .dedup import DEFAULT_THRESHOLD, deduplicate
from .evidence import extract_evidence
from .fetch import PageFetcher
from .html import extract_blocks, page_text
from .rerank import DEFAULT_KEEP_FILTER, DEFAULT_KEEP_FINAL, filter_and_rerank
from .search import CachingSearchClient
from .split import split_blocks
from .types import ORIGIN_EVIDENCE, ORIGIN_SPLITTER, Quote, RetrievalTrace, SearchResult

logger = logging.getLogger(__name__)

_ORIGIN_ORDER = {ORIGIN_SPLITTER: 0, ORIGIN_EVIDENCE: 1}


@dataclass
class WebRetrievalConfig:
    search_k: int = 10
    keep_filter: int = DEFAULT_KEEP_FILTER
    keep_final: int = DEFAULT_KEEP_FINAL
    max_quote_tokens: int = 128
    evidence_spans_per_page: int = 3
    splitter_mode: str = "adaptive"
    dedup_threshold: float = DEFAULT_THRESHOLD
    parallelism: int = 8


def retrieve_web(query: str, cfg: WebRetrievalConfig, *, gateway,
                 search_client: CachingSearchClient, fetcher: PageFetcher,
                 clock=time.perf_counter) -> tuple[list[Quote], RetrievalTrace]:
    """Top quotes for ``query`` plus the per-stage trace.

    Degraded states (no search results, every page failing) return an empty
    quote list with the trace rather than raising.
    """
    if not query.strip():
        raise ValueError("query must be non-empty")
    trace = RetrievalTrace()

    started = clock()
    results, cache_hit = search_client.search(query, cfg.search_k)
    trace.search_cache_hit = cache_hit
    trace.search_seconds = max(clock() - started, 0.0)

    cache_hits_before = fetcher.cache_hits
    started = clock()
    pages = _fetch_pages(results, fetcher, cfg.parallelism, trace)
    trace.fetch_seconds = max(clock() - started, 0.0)
    trace.pages_fetched = len(pages)
    trace.page_cache_hits = fetcher.cache_hits - cache_hits_before

    started = clock()
    candidates = _extract_candidates(query, pages, cfg, gateway, trace)
    trace.extract_seconds = max(clock() - started, 0.0)

    if not candidates:
        trace.final_quotes = 0
        return [], trace

    started = clock()
    reranked = filter_and_rerank(gateway, query, candidates,
                                 keep_filter=cfg.keep_filter,
                                 keep_final=cfg.keep_final)
    trace.filter_rerank_seconds = max(clock() - started, 0.0)
    trace.candidates_after_filter = len(reranked)

    started = clock()
    unique = deduplicate(gateway, reranked, threshold=cfg.dedup_threshold)
    trace.dedup_seconds = max(clock() - started, 0.0)

    final = [
        replace(q, text=textseg.truncate_to_tokens(q.text, cfg.max_quote_tokens))
        for q in unique[:cfg.keep_final]
    ]
    trace.final_quotes = len(final)
    return final, trace


def _fetch_pages(results: list[SearchResult], fetcher: PageFetcher,
                 parallelism: int, trace: RetrievalTrace) -> list[tuple[SearchResult, str]]:
    if not results:
        return []

    def fetch_one(result: SearchResult):
        try:
            return result, fetcher.fetch(result.url)
        except (PipelineError, ValueError) as exc:
            logger.warning("skipping page %s: %s", result.url, exc)
            trace.errors.append(f"{result.url}: {exc}")
            return result, None

    with ThreadPoolExecutor(max_workers=max(1, min(parallelism, len(results)))) as pool:
        fetched = list(pool.map(fetch_one, results))
    trace.pages_failed = sum(1 for _, body in fetched if body is None)
    fetched = [(r, body) for r, body in fetched if body is not None]
    fetched.sort(key=lambda item: item[0].rank)
    return fetched


def _extract_candidates(query: str, pages: list[tuple[SearchResult, str]],
                        cfg: WebRetrievalConfig, gateway,
                        trace: RetrievalTrace) -> list[Quote]:
    if not pages:
        return []

    def extract_one(item: tuple[SearchResult, str]):
        result, body = item
        blocks = extract_blocks(body)
        splitter = split_blocks(blocks, mode=cfg.splitter_mode)
        evidence = extract_evidence(gateway, query, page_text(blocks),
                                    max_spans=cfg.evidence_spans_per_page)
        quotes = [
            replace(q, source_url=result.url, page_rank=result.rank)
            for q in splitter + evidence
        ]
        return quotes, len(splitter), len(evidence)

    with ThreadPoolExecutor(max_workers=max(1, min(cfg.parallelism, len(pages)))) as pool:
        extracted = list(pool.map(extract_one, pages))

    candidates: list[Quote] = []
    for quotes, n_splitter, n_evidence in extracted:
        candidates.extend(quotes)
        trace.candidates_splitter += n_splitter
        trace.candidates_evidence += n_evidence
    candidates.sort(key=lambda q: (q.page_rank, q.char_offset,
                                   _ORIGIN_ORDER.get(q.origin, 2), q.text))
    return candidates
