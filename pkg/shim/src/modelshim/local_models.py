"""Self-contained deterministic models, no downloads required.

These exist so the server can run (and its protocol be exercised) on
machines without model weights or network access. They are honest little
text models, not mocks of any specific neural network: hashed character
n-grams for embeddings, weighted lexical overlap for relevance, and
best-sentence selection for span extraction. Outputs are pure functions of
the inputs, identical across processes and platforms.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

_WORD = re.compile(r"\S+")
_SENTENCE_END = re.compile(r"[.!?]+(?=\s|$)")


def _tokens(text: str) -> list[str]:
    return [t.lower() for t in text.split()]


class NgramHashEmbedder:
    """Signed hashing of character trigrams into a fixed-width unit vector."""

    name = "local:ngram-hash"

    def __init__(self, dim: int = 384):
        self.dim = dim

    def encode(self, texts: list[str]) -> list[list[float]]:
        return [self._one(t) for t in texts]

    def _one(self, text: str) -> list[float]:
        vec = np.zeros(self.dim, dtype=np.float64)
        padded = f"  {text.lower()} "
        for i in range(len(padded) - 2):
            gram = padded[i:i + 3].encode("utf-8")
            digest = hashlib.blake2b(gram, digest_size=8).digest()
            bucket = int.from_bytes(digest[:4], "big") % self.dim
            sign = 1.0 if digest[4] & 1 else -1.0
            vec[bucket] += sign
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            vec[0] = 1.0
            norm = 1.0
        return (vec / norm).tolist()


class TokenF1Scorer:
    """Cheap tier: harmonic mean of token overlap precision and recall."""

    name = "local:token-f1"

    def score(self, query: str, passages: list[str]) -> list[float]:
        q = set(_tokens(query))
        scores = []
        for passage in passages:
            p = set(_tokens(passage))
            if not q or not p:
                scores.append(1.0 if q == p else 0.0)
                continue
            overlap = len(q & p)
            if overlap == 0:
                scores.append(0.0)
                continue
            precision = overlap / len(p)
            recall = overlap / len(q)
            scores.append(2 * precision * recall / (precision + recall))
        return scores


class WeightedOverlapScorer:
    """Expensive tier: character-mass weighted overlap F1.

    Longer shared tokens count for more, which separates passages that
    contain the query's substantive words from ones sharing only glue
    words; a passage echoing the queried fact verbatim dominates.
    """

    name = "local:weighted-overlap"

    @staticmethod
    def _mass(tokens: set[str]) -> float:
        return float(sum(len(t) for t in tokens))

    def score(self, query: str, passages: list[str]) -> list[float]:
        q = set(_tokens(query))
        q_mass = self._mass(q)
        scores = []
        for passage in passages:
            p = set(_tokens(passage))
            p_mass = self._mass(p)
            shared = self._mass(q & p)
            if shared == 0.0 or q_mass == 0.0 or p_mass == 0.0:
                scores.append(0.0)
                continue
            precision = shared / p_mass
            recall = shared / q_mass
            scores.append(2 * precision * recall / (precision + recall))
        return scores


class BestSentenceSpanner:
    """Spans are whole sentences ranked by query-token overlap."""

    name = "local:best-sentence"

    def extract(self, query: str, document: str,
                max_spans: int) -> list[tuple[int, int]]:
        if not document:
            return []
        spans = self._sentence_spans(document)
        if not spans:
            return []
        q = set(_tokens(query))
        ranked = sorted(
            spans,
            key=lambda se: (-len(q & set(_tokens(document[se[0]:se[1]]))), se[0]),
        )
        return ranked[:max_spans]

    @staticmethod
    def _sentence_spans(text: str) -> list[tuple[int, int]]:
        spans = []
        start = 0
        for match in _SENTENCE_END.finditer(text):
            end = match.end()
            chunk = text[start:end]
            lead = len(chunk) - len(chunk.lstrip())
            if chunk.strip():
                spans.append((start + lead, end))
            start = end
        tail = text[start:]
        if tail.strip():
            lead = len(tail) - len(tail.lstrip())
            spans.append((start + lead, start + len(tail.rstrip())))
        return spans


_REF_GLM = re.compile(r"Reference \[1\]: (.*?)(?= \\Reference \[2\]: | \\Question: )",
                      re.S)
_REF_NUMBERED = re.compile(r"^1: (.*)$", re.M)


class EchoGenerator:
    """Deterministic generator quoting the first reference of the prompt."""

    name = "local:echo"

    def generate(self, prompt: str, max_tokens: int) -> str:
        match = _REF_GLM.search(prompt) or _REF_NUMBERED.search(prompt)
        source = match.group(1) if match else prompt
        head = " ".join(source.split()[:24])
        text = f"According to reference [1], {head}"
        return " ".join(text.split()[:max_tokens])


def build_local_model(capability: str, identifier: str, dim: int = 384):
    table = {
        "local:ngram-hash": lambda: NgramHashEmbedder(dim=dim),
        "local:token-f1": TokenF1Scorer,
        "local:weighted-overlap": WeightedOverlapScorer,
        "local:best-sentence": BestSentenceSpanner,
        "local:echo": EchoGenerator,
    }
    try:
        return table[identifier]()
    except KeyError:
        raise ValueError(f"unknown local model for {capability}: {identifier!r}") from None
