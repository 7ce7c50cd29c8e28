"""Gateway facade: one handle for the four model capabilities.

Each capability (embedding, pairwise scoring, span extraction, generation)
is backed independently by either the deterministic mocks or an HTTP
service, so real embeddings can mix with a mock generator. All calls are
validated and accounted in a shared :class:`CallLedger`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..errors import BackendError, GenerationError
from .http import (HttpEmbeddingBackend, HttpGenerationBackend,
                   HttpScoringBackend, HttpSpanBackend)
from .ledger import CallLedger
from .mock import (MockEmbeddingBackend, MockGenerationBackend,
                   MockScoringBackend, MockSpanBackend)

MOCK = "mock"


@dataclass
class GatewayConfig:
    """Backend selector per capability: ``"mock"`` or an ``http(s)://`` URL."""

    embed: str = MOCK
    score: str = MOCK
    spans: str = MOCK
    generate: str = MOCK
    timeout: float = 30.0
    max_inflight: int = 8

    def as_dict(self) -> dict:
        return {"embed": self.embed, "score": self.score,
                "spans": self.spans, "generate": self.generate}


class ModelGateway:
    def __init__(self, embedder, scorer, spanner, generator,
                 ledger: CallLedger | None = None):
        self._embedder = embedder
        self._scorer = scorer
        self._spanner = spanner
        self._generator = generator
        self.ledger = ledger if ledger is not None else CallLedger()

    def embed(self, texts: list[str]) -> list[list[float]]:
        if not texts:
            raise ValueError("embed requires at least one text")
        return self._timed("embed", lambda: self._embedder.embed(list(texts)))

    def score_pair(self, tier: str, query: str, passages: list[str]) -> list[float]:
        if tier not in ("cheap", "expensive"):
            raise ValueError(f"unknown scorer tier: {tier!r}")
        if not passages:
            raise ValueError("score_pair requires at least one passage")
        return self._timed(f"score:{tier}",
                           lambda: self._scorer.score(tier, query, list(passages)))

    def extract_spans(self, query: str, document: str,
                      max_spans: int = 3) -> list[tuple[int, int]]:
        if max_spans < 1:
            raise ValueError("max_spans must be positive")
        if not document:
            return []
        spans = self._timed("spans",
                            lambda: self._spanner.extract(query, document, max_spans))
        for start, end in spans:
            if not (0 <= start < end <= len(document)):
                raise BackendError(
                    f"span backend returned invalid offsets ({start}, {end}) "
                    f"for a document of length {len(document)}",
                    capability="spans",
                )
        return spans

    def generate(self, prompt: str, max_tokens: int = 256) -> str:
        if not prompt:
            raise ValueError("generate requires a non-empty prompt")
        if max_tokens < 1:
            raise ValueError("max_tokens must be positive")
        started = time.perf_counter()
        try:
            text = self._generator.generate(prompt, max_tokens)
        except (BackendError, GenerationError):
            self.ledger.record("generate", time.perf_counter() - started, ok=False)
            raise
        self.ledger.record("generate", time.perf_counter() - started, ok=True)
        return text

    def _timed(self, capability: str, call):
        started = time.perf_counter()
        try:
            result = call()
        except BackendError:
            self.ledger.record(capability, time.perf_counter() - started, ok=False)
            raise
        self.ledger.record(capability, time.perf_counter() - started, ok=True)
        return result


def _build_backend(selector: str, mock_cls, http_cls, cfg: GatewayConfig):
    if selector == MOCK:
        return mock_cls()
    if selector.startswith(("http://", "https://")):
        return http_cls(selector, timeout=cfg.timeout, max_inflight=cfg.max_inflight)
    raise ValueError(f"backend selector must be 'mock' or an http(s) URL, got {selector!r}")


def build_gateway(config: GatewayConfig | None = None,
                  ledger: CallLedger | None = None) -> ModelGateway:
    cfg = config or GatewayConfig()
    return ModelGateway(
        embedder=_build_backend(cfg.embed, MockEmbeddingBackend, HttpEmbeddingBackend, cfg),
        scorer=_build_backend(cfg.score, MockScoringBackend, HttpScoringBackend, cfg),
        spanner=_build_backend(cfg.spans, MockSpanBackend, HttpSpanBackend, cfg),
        generator=_build_backend(cfg.generate, MockGenerationBackend,
                                 HttpGenerationBackend, cfg),
        ledger=ledger,
    )
