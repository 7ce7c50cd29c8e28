"""HTTP backends speaking the model-service JSON protocol.

Endpoints relative to the base URL:

    POST /embed    {"texts": [...]}                          -> {"vectors": [[...], ...]}
    POST /score    {"tier", "query", "passages": [...]}      -> {"scores": [...]}
    POST /spans    {"query", "document", "max_spans"}        -> {"spans": [{"start","end"}, ...]}
    POST /generate {"prompt", "max_tokens"}                  -> {"text": "..."}

Non-2xx responses carry ``{"error": "..."}``. Transport failures and 5xx
responses are retried (2 retries, exponential backoff); 4xx responses are
not. In-flight requests per backend are bounded by a semaphore.
"""

from __future__ import annotations

import threading
import time

import requests

from ..errors import BackendError, GenerationError

DEFAULT_TIMEOUT = 30.0
DEFAULT_RETRIES = 2
DEFAULT_BACKOFF = 0.25
DEFAULT_MAX_INFLIGHT = 8


class _HttpCapability:
    def __init__(self, base_url: str, capability: str, timeout: float = DEFAULT_TIMEOUT,
                 retries: int = DEFAULT_RETRIES, backoff: float = DEFAULT_BACKOFF,
                 max_inflight: int = DEFAULT_MAX_INFLIGHT):
        self.base_url = base_url.rstrip("/")
        self.capability = capability
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self._slots = threading.Semaphore(max_inflight)

    def _post(self, path: str, payload: dict) -> dict:
        url = f"{self.base_url}{path}"
        attempts = self.retries + 1
        last_error: str = "unknown error"
        last_status: int | None = None
        with self._slots:
            for attempt in range(attempts):
                try:
                    resp = requests.post(url, json=payload, timeout=self.timeout)
                except requests.RequestException as exc:
                    last_error = str(exc)
                else:
                    if 200 <= resp.status_code < 300:
                        return resp.json()
                    last_status = resp.status_code
                    try:
                        last_error = resp.json().get("error", resp.text)
                    except ValueError:
                        last_error = resp.text
                    if 400 <= resp.status_code < 500:
                        raise self._error(last_error, retries=attempt, status=last_status)
                if attempt < attempts - 1:
                    time.sleep(self.backoff * 2**attempt)
        raise self._error(last_error, retries=self.retries, status=last_status)

    def _error(self, message: str, retries: int, status: int | None) -> BackendError:
        return BackendError(
            f"{self.capability} backend at {self.base_url} failed: {message}",
            capability=self.capability, retries=retries, status=status,
        )


class HttpEmbeddingBackend(_HttpCapability):
    def __init__(self, base_url: str, **kwargs):
        super().__init__(base_url, "embed", **kwargs)

    def embed(self, texts: list[str]) -> list[list[float]]:
        body = self._post("/embed", {"texts": texts})
        return body["vectors"]


class HttpScoringBackend(_HttpCapability):
    def __init__(self, base_url: str, **kwargs):
        super().__init__(base_url, "score", **kwargs)

    def score(self, tier: str, query: str, passages: list[str]) -> list[float]:
        body = self._post("/score", {"tier": tier, "query": query, "passages": passages})
        return body["scores"]


class HttpSpanBackend(_HttpCapability):
    def __init__(self, base_url: str, **kwargs):
        super().__init__(base_url, "spans", **kwargs)

    def extract(self, query: str, document: str, max_spans: int) -> list[tuple[int, int]]:
        body = self._post("/spans", {"query": query, "document": document,
                                     "max_spans": max_spans})
        return [(span["start"], span["end"]) for span in body["spans"]]


class HttpGenerationBackend(_HttpCapability):
    def __init__(self, base_url: str, **kwargs):
        super().__init__(base_url, "generate", **kwargs)

    def generate(self, prompt: str, max_tokens: int) -> str:
        try:
            body = self._post("/generate", {"prompt": prompt, "max_tokens": max_tokens})
        except BackendError as exc:
            raise GenerationError(str(exc), prompt_length=len(prompt),
                                  retries=exc.retries, status=exc.status) from exc
        return body["text"]
