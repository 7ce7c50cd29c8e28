"""Two-stage relevance cascade: cheap filtration, then expensive reranking.

The cheap pairwise scorer prunes the candidate pool to ``keep_filter``
passages; only those survivors pay for the expensive scorer. Both sort
stages tie-break on the candidates' original pool position, so when the
pool already fits under ``keep_filter`` the cascade output ordering is
identical to reranking everything directly.
"""

from __future__ import annotations

from dataclasses import replace

from ..errors import ConfigError
from .types import Quote

DEFAULT_KEEP_FILTER = 70
DEFAULT_KEEP_FINAL = 5


def filter_and_rerank(gateway, query: str, candidates: list[Quote],
                      keep_filter: int = DEFAULT_KEEP_FILTER,
                      keep_final: int = DEFAULT_KEEP_FINAL) -> list[Quote]:
    """Rerank the filtered survivors, best first.

    Returns every survivor (up to ``keep_filter``) with both stage scores
    populated; the final ``keep_final`` cut happens after deduplication,
    downstream. ``keep_final`` is validated here because the two knobs
    travel together.
    """
    if keep_filter < 1 or keep_final < 1:
        raise ConfigError("keep_filter and keep_final must be positive")
    if keep_final > keep_filter:
        raise ConfigError(
            f"keep_final ({keep_final}) must not exceed keep_filter ({keep_filter})"
        )
    if not candidates:
        return []

    cheap = gateway.score_pair("cheap", query, [q.text for q in candidates])
    scored = [
        (replace(quote, filter_score=score), position)
        for position, (quote, score) in enumerate(zip(candidates, cheap))
    ]
    scored.sort(key=lambda item: (-item[0].filter_score, item[1]))
    survivors = scored[:keep_filter]

    expensive = gateway.score_pair("expensive", query,
                                   [q.text for q, _ in survivors])
    reranked = [
        (replace(quote, rerank_score=score), position)
        for (quote, position), score in zip(survivors, expensive)
    ]
    reranked.sort(key=lambda item: (-item[0].rerank_score, item[1]))
    return [quote for quote, _ in reranked]
