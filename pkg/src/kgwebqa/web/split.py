"""Heuristic paragraph splitter producing candidate quotes from a page.

Default ("adaptive") mode: passages come from line breaks and ``<p>``-level
block boundaries; anything under 10 tokens is discarded and anything over
80 tokens is re-chunked on sentence boundaries so no chunk exceeds 80
tokens. Chunks keep the original sentence order and each ends on a sentence
boundary whenever the sentence itself fits the budget; only a sentence
longer than 80 tokens is hard-split.

"baseline" mode reproduces the coarser legacy behavior for ablations:
newline-delimited blocks only, lines under 50 characters dropped, longer
lines truncated to their first 1200 characters followed by "...". The
10/80 token bounds do not apply in this mode.
"""

from __future__ import annotations

from .. import textseg
from .html import Block, extract_blocks
from .types import ORIGIN_SPLITTER, Quote

MIN_TOKENS = 10
MAX_TOKENS = 80
BASELINE_MIN_CHARS = 50
BASELINE_MAX_CHARS = 1200

SPLITTER_MODES = ("adaptive", "baseline")


def split_paragraphs(html: str, mode: str = "adaptive") -> list[Quote]:
    """Candidate quotes of a raw HTML page (offsets refer to the page text)."""
    return split_blocks(extract_blocks(html), mode=mode)


def split_blocks(blocks: list[Block], mode: str = "adaptive") -> list[Quote]:
    if mode not in SPLITTER_MODES:
        raise ValueError(f"splitter mode must be one of {SPLITTER_MODES}")
    quotes: list[Quote] = []
    for block in blocks:
        if mode == "baseline":
            quotes.extend(_baseline_quotes(block))
            continue
        n = textseg.token_count(block.text)
        if n < MIN_TOKENS:
            continue
        if n <= MAX_TOKENS:
            quotes.append(_quote(block.text, block.offset))
        else:
            for start, end in _chunk_spans(block.text):
                quotes.append(_quote(block.text[start:end], block.offset + start))
    return quotes


def _quote(text: str, offset: int) -> Quote:
    return Quote(text=text, origin=ORIGIN_SPLITTER, char_offset=offset)


def _baseline_quotes(block: Block) -> list[Quote]:
    if len(block.text) < BASELINE_MIN_CHARS:
        return []
    text = block.text
    if len(text) > BASELINE_MAX_CHARS:
        text = text[:BASELINE_MAX_CHARS] + "..."
    return [_quote(text, block.offset)]


def _chunk_spans(text: str) -> list[tuple[int, int]]:
    """Spans of sentence-respecting chunks of <= MAX_TOKENS tokens each.

    Sentences are packed greedily; a single over-long sentence is hard-split
    at token boundaries. A trailing or undersized chunk is merged into a
    neighbor when the budget allows, otherwise dropped (the under-10-token
    rule applies to chunks just as to whole passages).
    """
    pieces: list[tuple[int, int, int]] = []  # (start, end, tokens)
    for start, end in textseg.sentence_spans(text):
        n = textseg.token_count(text[start:end])
        if n <= MAX_TOKENS:
            pieces.append((start, end, n))
        else:
            spans = textseg.token_spans(text[start:end])
            for i in range(0, n, MAX_TOKENS):
                group = spans[i:i + MAX_TOKENS]
                pieces.append((start + group[0][0], start + group[-1][1], len(group)))

    chunks: list[tuple[int, int, int]] = []
    current: list[tuple[int, int, int]] = []
    current_tokens = 0
    for piece in pieces:
        if current and current_tokens + piece[2] > MAX_TOKENS:
            chunks.append((current[0][0], current[-1][1], current_tokens))
            current, current_tokens = [], 0
        current.append(piece)
        current_tokens += piece[2]
    if current:
        chunks.append((current[0][0], current[-1][1], current_tokens))

    merged: list[tuple[int, int, int]] = []
    for chunk in chunks:
        if merged and chunk[2] < MIN_TOKENS and merged[-1][2] + chunk[2] <= MAX_TOKENS:
            prev = merged.pop()
            merged.append((prev[0], chunk[1], prev[2] + chunk[2]))
        else:
            merged.append(chunk)
    out = []
    for i, chunk in enumerate(merged):
        if chunk[2] < MIN_TOKENS:
            nxt = merged[i + 1] if i + 1 < len(merged) else None
            if nxt and chunk[2] + nxt[2] <= MAX_TOKENS:
                merged[i + 1] = (chunk[0], nxt[1], chunk[2] + nxt[2])
            continue
        out.append((chunk[0], chunk[1]))
    return out
