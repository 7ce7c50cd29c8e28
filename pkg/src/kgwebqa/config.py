"""Run configuration with flags > config file > environment precedence.

The search API key is deliberately environment-only (SEARCH_API_KEY), never
a flag, so it stays out of shell history; SEARCH_API_ENDPOINT selects the
engine. Everything else can come from a JSON config file or per-command
flags.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field, fields
from pathlib import Path

from .beam import BeamConfig
from .engine import EngineConfig, QAEngine
from .errors import ConfigError
from .gateway import GatewayConfig, build_gateway
from .kg import KnowledgeGraph
from .web.cache import PersistentCache
from .web.fetch import PageFetcher
from .web.pipeline import WebRetrievalConfig
from .web.search import CachingSearchClient, HttpSearchBackend

ENV_SEARCH_KEY = "SEARCH_API_KEY"
ENV_SEARCH_ENDPOINT = "SEARCH_API_ENDPOINT"

DEFAULT_CACHE_PATH = "~/.cache/kgwebqa/cache.sqlite"


@dataclass
class RunConfig:
    mode: str = "kg+web"
    kg_path: str | None = None
    cache_path: str = DEFAULT_CACHE_PATH
    backend_embed: str = "mock"
    backend_score: str = "mock"
    backend_spans: str = "mock"
    backend_generate: str = "mock"
    beam_width: int = 3
    beam_depth: int = 3
    direction_policy: str = "both"
    refs_total: int = 5
    keep_filter: int = 70
    keep_final: int = 5
    search_k: int = 10
    prompt_style: str = "glm"
    splitter_mode: str = "adaptive"
    parallelism: int = 8
    eval_parallelism: int = 1
    max_answer_tokens: int = 256
    clock: str = "wall"
    search_endpoint: str | None = None
    search_api_key: str | None = None

    def __post_init__(self):
        for name in ("beam_width", "beam_depth", "refs_total", "keep_filter",
                     "keep_final", "search_k", "parallelism", "eval_parallelism",
                     "max_answer_tokens"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.clock not in ("wall", "fixed"):
            raise ConfigError("clock must be 'wall' or 'fixed'")
        if self.mode in ("kg", "kg+web") and not self.kg_path:
            raise ConfigError(f"mode {self.mode!r} requires --kg")


def load_config(overrides: dict, config_file: str | None = None) -> RunConfig:
    """Merge defaults <- environment <- config file <- explicit overrides."""
    values: dict = {}
    if os.environ.get(ENV_SEARCH_ENDPOINT):
        values["search_endpoint"] = os.environ[ENV_SEARCH_ENDPOINT]
    if os.environ.get(ENV_SEARCH_KEY):
        values["search_api_key"] = os.environ[ENV_SEARCH_KEY]
    if config_file:
        try:
            loaded = json.loads(Path(config_file).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {config_file}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"config file {config_file} must hold a JSON object")
        known = {f.name for f in fields(RunConfig)}
        unknown = set(loaded) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "search_api_key" in loaded:
            raise ConfigError("search_api_key may only come from the environment")
        values.update(loaded)
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


class TickClock:
    """Deterministic clock: every reading advances by one millisecond.

    Lets timed pipelines produce byte-identical outputs across runs while
    keeping all measured intervals positive.
    """

    def __init__(self, step: float = 0.001):
        self.step = step
        self._ticks = 0
        self._lock = threading.Lock()

    def __call__(self) -> float:
        with self._lock:
            self._ticks += 1
            return self._ticks * self.step


def make_clock(kind: str):
    return TickClock() if kind == "fixed" else time.perf_counter


@dataclass
class Runtime:
    """Everything a command needs, wired from one RunConfig."""

    config: RunConfig
    gateway: object
    engine: QAEngine
    cache: PersistentCache
    kg: KnowledgeGraph | None
    clock: object = field(default=None)


def build_runtime(cfg: RunConfig) -> Runtime:
    clock = make_clock(cfg.clock)
    gateway = build_gateway(GatewayConfig(
        embed=cfg.backend_embed, score=cfg.backend_score,
        spans=cfg.backend_spans, generate=cfg.backend_generate,
    ))

    kg = KnowledgeGraph.load(cfg.kg_path) if cfg.kg_path else None

    cache = PersistentCache(Path(cfg.cache_path).expanduser())
    backend = None
    if cfg.search_endpoint:
        backend = HttpSearchBackend(cfg.search_endpoint, api_key=cfg.search_api_key)
    search_client = CachingSearchClient(backend=backend, cache=cache)
    fetcher = PageFetcher(cache)

    engine_cfg = EngineConfig(
        mode=cfg.mode,
        beam=BeamConfig(width=cfg.beam_width, depth=cfg.beam_depth,
                        direction_policy=cfg.direction_policy),
        web=WebRetrievalConfig(search_k=cfg.search_k, keep_filter=cfg.keep_filter,
                               keep_final=cfg.keep_final,
                               splitter_mode=cfg.splitter_mode,
                               parallelism=cfg.parallelism),
        refs_total=cfg.refs_total,
        prompt_style=cfg.prompt_style,
        max_answer_tokens=cfg.max_answer_tokens,
    )
    engine = QAEngine(engine_cfg, gateway, kg=kg,
                      search_client=search_client, fetcher=fetcher, clock=clock)
    return Runtime(config=cfg, gateway=gateway, engine=engine, cache=cache,
                   kg=kg, clock=clock)
