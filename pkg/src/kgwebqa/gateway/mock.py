"""Deterministic in-process model backends.

Every mock is a pure function of its inputs, reproducible across processes
and platforms, so pipelines built on them yield byte-identical outputs:

* embeddings: SHAKE-256 of the UTF-8 text is expanded to ``dim`` big-endian
  uint64 words, each mapped to [-1, 1) via ``u / 2**63 - 1``, then the vector
  is L2-normalized;
* cheap scoring: Jaccard similarity of the lowercased token sets;
* expensive scoring: Jaccard scaled by ``0.75 + 0.25 * length_ratio`` where
  length_ratio = min/max of the two token counts, so the two tiers produce
  different orderings (a cascade that mixes them up is detectable) while a
  disjoint-vocabulary pair still scores exactly 0.0;
* spans: the sentences with the highest query-token overlap;
* generation: echoes the first reference of a composition prompt, or judges
  a support-check prompt by token containment.
"""

from __future__ import annotations

import hashlib
import re
import threading

import numpy as np

from .. import textseg

MOCK_EMBEDDING_DIM = 384


def hash_unit_vector(text: str, dim: int = MOCK_EMBEDDING_DIM) -> np.ndarray:
    """The documented deterministic embedding of ``text``."""
    raw = hashlib.shake_256(text.encode("utf-8")).digest(dim * 8)
    words = np.frombuffer(raw, dtype=">u8").astype(np.float64)
    values = words / 2.0**63 - 1.0
    return values / np.linalg.norm(values)


class MockEmbeddingBackend:
    def __init__(self, dim: int = MOCK_EMBEDDING_DIM):
        self.dim = dim
        self._cache: dict[str, list[float]] = {}
        self._lock = threading.Lock()

    def embed(self, texts: list[str]) -> list[list[float]]:
        out = []
        for text in texts:
            with self._lock:
                vec = self._cache.get(text)
            if vec is None:
                vec = hash_unit_vector(text, self.dim).tolist()
                with self._lock:
                    self._cache[text] = vec
            out.append(vec)
        return out


def _token_set(text: str) -> set[str]:
    return {t.lower() for t in text.split()}


def jaccard(query: str, passage: str) -> float:
    a, b = _token_set(query), _token_set(passage)
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


class MockScoringBackend:
    def score(self, tier: str, query: str, passages: list[str]) -> list[float]:
        if tier not in ("cheap", "expensive"):
            raise ValueError(f"unknown scorer tier: {tier!r}")
        scores = []
        for passage in passages:
            base = jaccard(query, passage)
            if tier == "expensive":
                nq, np_ = len(query.split()), len(passage.split())
                ratio = min(nq, np_) / max(nq, np_) if nq and np_ else 0.0
                base *= 0.75 + 0.25 * ratio
            scores.append(base)
        return scores


class MockSpanBackend:
    """Returns the sentences with maximal query-token overlap, best first."""

    def extract(self, query: str, document: str,
                max_spans: int) -> list[tuple[int, int]]:
        if not document:
            return []
        qtokens = _token_set(query)
        scored = []
        for start, end in textseg.sentence_spans(document):
            overlap = len(qtokens & _token_set(document[start:end]))
            scored.append((-overlap, start, end))
        scored.sort()
        return [(s, e) for _, s, e in scored[:max_spans]]


_GLM_REF1 = re.compile(r"Reference \[1\]: (.*?)(?= \\Reference \[2\]: | \\Question: )", re.S)
_NUMBERED_REF1 = re.compile(r"^1: (.*)$", re.M)
_JUDGE_MARKER = 'Output "Yes" if the Answer is supported by the Context.'
_JUDGE_FIELDS = re.compile(r"\n {4}Answer: (.*?)\n {4}Context: (.*)\Z", re.S)
_WORD = re.compile(r"[a-z0-9]+")


class MockGenerationBackend:
    """Template generator: cites reference [1] and echoes its first 20 tokens.

    Support-check prompts (recognized by their instruction line) are judged
    instead: "Yes" iff every word of the Answer occurs in the Context.
    """

    def generate(self, prompt: str, max_tokens: int) -> str:
        if _JUDGE_MARKER in prompt:
            return self._judge(prompt)
        reference = None
        m = _GLM_REF1.search(prompt)
        if m:
            reference = m.group(1)
        else:
            m = _NUMBERED_REF1.search(prompt)
            if m:
                reference = m.group(1)
        if reference is None:
            reference = prompt
        head = " ".join(reference.split()[:20])
        text = f"Answer based on reference [1]: {head}"
        return " ".join(text.split()[:max_tokens])

    @staticmethod
    def _judge(prompt: str) -> str:
        m = _JUDGE_FIELDS.search(prompt)
        if not m:
            return "No"
        answer_words = set(_WORD.findall(m.group(1).lower()))
        context_words = set(_WORD.findall(m.group(2).lower()))
        return "Yes" if answer_words and answer_words <= context_words else "No"
