"""Tokenization and sentence segmentation shared by the whole pipeline.

A "token" is a whitespace-delimited chunk; every token threshold in the
pipeline (the 10/80 splitter bounds, the 128-token quote cap) counts tokens
this way so the numbers are deterministic and independent of any model
tokenizer.

Sentence boundaries: a run of ``.``, ``!`` or ``?`` followed by whitespace or
end of text, unless the preceding word is a known abbreviation or a single
letter (initials). The same rule is used to chunk long passages, to truncate
quotes, and to split answers into citable sentences, so offsets agree across
modules.
"""

from __future__ import annotations

import re

_BOUNDARY = re.compile(r"[.!?]+(?=\s|$)")
_TOKEN = re.compile(r"\S+")

# Lowercase, without the trailing period. Kept deliberately small; a guard
# that is too eager merges real sentences, which is the worse failure mode.
_ABBREVIATIONS = {
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc",
    "e.g", "i.e", "cf", "fig", "al", "inc", "ltd", "co", "u.s", "u.k",
    "approx", "dept",
}


def tokenize(text: str) -> list[str]:
    return text.split()


def token_count(text: str) -> int:
    return len(text.split())


def token_spans(text: str) -> list[tuple[int, int]]:
    """Character (start, end) of every whitespace-delimited token."""
    return [(m.start(), m.end()) for m in _TOKEN.finditer(text)]


def _is_abbreviation(text: str, punct_start: int) -> bool:
    head = text[:punct_start]
    parts = head.rsplit(None, 1)
    word = parts[-1] if parts else head
    word = word.lstrip("\"'([{").lower()
    if not word:
        return False
    if len(word) == 1 and word.isalpha():
        return True
    return word in _ABBREVIATIONS


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of the sentences of ``text``.

    Spans are trimmed of surrounding whitespace and include the terminal
    punctuation. Trailing text without terminal punctuation forms a final
    sentence. Every non-space character belongs to exactly one span.
    """
    spans: list[tuple[int, int]] = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        if _is_abbreviation(text, m.start()):
            continue
        end = m.end()
        s = start
        while s < end and text[s].isspace():
            s += 1
        if s < end:
            spans.append((s, end))
        start = end
    s = start
    n = len(text)
    while s < n and text[s].isspace():
        s += 1
    if s < n:
        e = n
        while e > s and text[e - 1].isspace():
            e -= 1
        spans.append((s, e))
    return spans


def sentences(text: str) -> list[str]:
    return [text[s:e] for s, e in sentence_spans(text)]


def truncate_to_tokens(text: str, max_tokens: int) -> str:
    """Cut ``text`` to at most ``max_tokens`` tokens.

    The cut lands on the last sentence boundary at or before the budget;
    when even the first sentence exceeds it, the text is hard-cut after the
    ``max_tokens``-th token. Text at or under budget is returned unchanged.
    """
    if max_tokens < 1:
        raise ValueError("max_tokens must be positive")
    tspans = token_spans(text)
    if len(tspans) <= max_tokens:
        return text
    cut = None
    total = 0
    for s, e in sentence_spans(text):
        n = token_count(text[s:e])
        if total + n > max_tokens:
            break
        total += n
        cut = e
    if cut is None:
        cut = tspans[max_tokens - 1][1]
    return text[:cut]
