"""Query-aware evidence span extraction over a page's text."""

from __future__ import annotations

import logging

from ..errors import BackendError
from .types import ORIGIN_EVIDENCE, Quote

logger = logging.getLogger(__name__)


def extract_evidence(gateway, query: str, page_text: str,
                     max_spans: int = 3) -> list[Quote]:
    """Quotes cut verbatim from ``page_text`` by the span-extraction backend.

    An unavailable backend degrades to an empty list with a warning: the
    splitter stream alone is a known-good configuration, so one failing
    model must not sink the whole retrieval.
    """
    if not page_text:
        return []
    try:
        spans = gateway.extract_spans(query, page_text, max_spans)
    except BackendError as exc:
        logger.warning("evidence extraction unavailable, continuing without it: %s", exc)
        return []
    return [
        Quote(text=page_text[start:end], origin=ORIGIN_EVIDENCE, char_offset=start)
        for start, end in spans
        if page_text[start:end].strip()
    ]
