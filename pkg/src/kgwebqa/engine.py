"""End-to-end orchestration: retrieve evidence per mode, compose, account.

Modes select the knowledge sources: ``kg`` uses only the graph search,
``web`` only the web retriever, ``kg+web`` both. Whatever the mode, the
composer is invoked exactly once per question.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .beam import BeamConfig, ReasoningPath, beam_search, serialize_subgraph
from .compose import (DEFAULT_TOTAL_REFERENCES, ComposedAnswer, ReferenceSet,
                      build_references, compose)
from .errors import ConfigError, DataError
from .kg import KnowledgeGraph
from .web.fetch import PageFetcher
from .web.pipeline import WebRetrievalConfig, retrieve_web
from .web.search import CachingSearchClient
from .web.types import Quote, RetrievalTrace

MODES = ("kg", "web", "kg+web")


@dataclass
class EngineConfig:
    mode: str = "kg+web"
    beam: BeamConfig = field(default_factory=BeamConfig)
    web: WebRetrievalConfig = field(default_factory=WebRetrievalConfig)
    refs_total: int = DEFAULT_TOTAL_REFERENCES
    prompt_style: str = "glm"
    max_answer_tokens: int = 256

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.refs_total < 1:
            raise ConfigError("refs-total must be positive")


@dataclass
class AnswerResult:
    answer: ComposedAnswer
    references: ReferenceSet
    subgraph_text: str | None
    paths: list[ReasoningPath]
    quotes: list[Quote]
    trace: RetrievalTrace
    llm_calls: int
    runtime_seconds: float
    notices: list[str] = field(default_factory=list)


class QAEngine:
    def __init__(self, config: EngineConfig, gateway, kg: KnowledgeGraph | None = None,
                 search_client: CachingSearchClient | None = None,
                 fetcher: PageFetcher | None = None, clock=time.perf_counter):
        uses_kg = config.mode in ("kg", "kg+web")
        uses_web = config.mode in ("web", "kg+web")
        if uses_kg and kg is None:
            raise ConfigError(f"mode {config.mode!r} requires a knowledge graph")
        if uses_web and (search_client is None or fetcher is None):
            raise ConfigError(f"mode {config.mode!r} requires a search backend and fetcher")
        self.config = config
        self.gateway = gateway
        self.kg = kg
        self.search_client = search_client
        self.fetcher = fetcher
        self.clock = clock

    def answer(self, question: str, topic_entities: list[str] | None = None) -> AnswerResult:
        if not question.strip():
            raise DataError("question must be non-empty")
        cfg = self.config
        started = self.clock()
        notices: list[str] = []

        paths: list[ReasoningPath] = []
        subgraph_text: str | None = None
        if cfg.mode in ("kg", "kg+web"):
            if topic_entities:
                paths = beam_search(self.kg, question, topic_entities, cfg.beam,
                                    gateway=self.gateway)
            else:
                notices.append("no topic entities supplied; skipping graph retrieval")
            if topic_entities and not paths:
                notices.append("no subgraph found for the topic entities")
            if paths:
                subgraph_text = serialize_subgraph(paths)

        quotes: list[Quote] = []
        trace = RetrievalTrace()
        if cfg.mode in ("web", "kg+web"):
            quotes, trace = retrieve_web(question, cfg.web, gateway=self.gateway,
                                         search_client=self.search_client,
                                         fetcher=self.fetcher, clock=self.clock)
            if not quotes:
                notices.append("web retrieval returned no quotes")

        references = build_references(subgraph_text, quotes, total=cfg.refs_total)
        if not references:
            raise DataError(
                "no references available to compose from"
                + (f" ({'; '.join(notices)})" if notices else "")
            )

        llm_before = self.gateway.ledger.llm_calls
        answer = compose(self.gateway, question, references,
                         style=cfg.prompt_style, max_tokens=cfg.max_answer_tokens)
        llm_calls = self.gateway.ledger.llm_calls - llm_before

        return AnswerResult(
            answer=answer,
            references=references,
            subgraph_text=subgraph_text,
            paths=paths,
            quotes=quotes,
            trace=trace,
            llm_calls=llm_calls,
            runtime_seconds=max(self.clock() - started, 0.0),
            notices=notices,
        )
