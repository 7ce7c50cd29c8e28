"""FastAPI app implementing the model-service JSON protocol.

    POST /embed    {"texts": [...]}                     -> {"vectors": [[...], ...]}
    POST /score    {"tier", "query", "passages"}        -> {"scores": [...]}
    POST /spans    {"query", "document", "max_spans"}   -> {"spans": [{"start","end"}]}
    POST /generate {"prompt", "max_tokens"}             -> {"text": "..."}
    GET  /healthz                                       -> {"capabilities", "models"}

Every non-2xx response body is ``{"error": "..."}``. Inference is
serialized per device behind one lock and larger batches are chunked to
``max_batch_size`` server-side, so callers never need to care about batch
limits.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import ShimConfig
from .hf_models import (HfCrossEncoderScorer, HfEmbedder, HfGenerator,
                        HfSpanExtractor, ModelLoadError)
from .local_models import build_local_model


class EmbedRequest(BaseModel):
    texts: list[str] = Field(min_length=1)


class ScoreRequest(BaseModel):
    tier: str
    query: str
    passages: list[str] = Field(min_length=1)


class SpansRequest(BaseModel):
    query: str
    document: str
    max_spans: int = Field(ge=1, default=3)


class GenerateRequest(BaseModel):
    prompt: str = Field(min_length=1)
    max_tokens: int = Field(ge=1, default=256)


class ModelRegistry:
    """Loads and owns one model per capability; fails fast on load errors."""

    def __init__(self, config: ShimConfig):
        self.config = config
        self._infer_lock = threading.Lock()  # inference serialized per device
        self.embedder = self._load("embed", config.embed)
        self.scorers = {
            "cheap": self._load("score", config.score_cheap),
            "expensive": self._load("score", config.score_expensive),
        }
        self.spanner = self._load("spans", config.spans)
        self.generator = self._load("generate", config.generate) if config.generate else None

    def _load(self, capability: str, identifier: str):
        if identifier.startswith("local:"):
            return build_local_model(capability, identifier,
                                     dim=self.config.embedding_dim)
        loaders = {
            "embed": HfEmbedder,
            "score": HfCrossEncoderScorer,
            "spans": HfSpanExtractor,
            "generate": HfGenerator,
        }
        return loaders[capability](identifier, self.config.device)

    @property
    def capabilities(self) -> list[str]:
        caps = ["embed", "score", "spans"]
        if self.generator is not None:
            caps.append("generate")
        return caps

    def model_names(self) -> dict:
        return {
            "embed": self.embedder.name,
            "score_cheap": self.scorers["cheap"].name,
            "score_expensive": self.scorers["expensive"].name,
            "spans": self.spanner.name,
            "generate": self.generator.name if self.generator else None,
        }

    def _chunked(self, items: list, call) -> list:
        size = self.config.max_batch_size
        out: list = []
        for i in range(0, len(items), size):
            out.extend(call(items[i:i + size]))
        return out

    def embed(self, texts: list[str]) -> list[list[float]]:
        with self._infer_lock:
            return self._chunked(texts, self.embedder.encode)

    def score(self, tier: str, query: str, passages: list[str]) -> list[float]:
        scorer = self.scorers[tier]
        with self._infer_lock:
            return self._chunked(passages, lambda chunk: scorer.score(query, chunk))

    def extract(self, query: str, document: str, max_spans: int):
        with self._infer_lock:
            return self.spanner.extract(query, document, max_spans)

    def generate(self, prompt: str, max_tokens: int) -> str:
        with self._infer_lock:
            return self.generator.generate(prompt, max_tokens)


def create_app(config: ShimConfig) -> FastAPI:
    registry = ModelRegistry(config)  # raises ModelLoadError before serving
    app = FastAPI(title="model-shim", docs_url=None, redoc_url=None)
    app.state.registry = registry

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors())})

    @app.exception_handler(Exception)
    async def _server_error(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={"error": str(exc)})

    @app.get("/healthz")
    async def healthz():
        return {"capabilities": registry.capabilities,
                "models": registry.model_names()}

    @app.post("/embed")
    async def embed(body: EmbedRequest):
        return {"vectors": registry.embed(body.texts)}

    @app.post("/score")
    async def score(body: ScoreRequest):
        if body.tier not in registry.scorers:
            return JSONResponse(status_code=400,
                                content={"error": f"unknown tier {body.tier!r}"})
        return {"scores": registry.score(body.tier, body.query, body.passages)}

    @app.post("/spans")
    async def spans(body: SpansRequest):
        found = registry.extract(body.query, body.document, body.max_spans)
        return {"spans": [{"start": s, "end": e} for s, e in found]}

    @app.post("/generate")
    async def generate(body: GenerateRequest):
        if registry.generator is None:
            return JSONResponse(status_code=503,
                                content={"error": "generator capability disabled"})
        return {"text": registry.generate(body.prompt, body.max_tokens)}

    return app


__all__ = ["create_app", "ModelRegistry", "ModelLoadError"]
