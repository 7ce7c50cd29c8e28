"""Shim configuration: one model identifier per capability.

Identifiers starting with ``local:`` resolve to the built-in deterministic
models and need no downloads; any other identifier is treated as a
Hugging Face model id and loaded through the optional heavy dependencies.
The defaults mirror the reference setup this server is meant to stand in
for: a small bi-encoder for embeddings, a 22M-parameter cross-encoder as
the cheap scoring tier, a large cross-encoder as the expensive tier, and a
reading-comprehension model for span extraction. ``--models local`` swaps
every capability to the self-contained models in one flag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

REFERENCE_MODELS = {
    "embed": "sentence-transformers/all-MiniLM-L6-v2",
    "score_cheap": "cross-encoder/ms-marco-MiniLM-L-6-v2",
    "score_expensive": "cross-encoder/nli-deberta-v3-large",
    "spans": "deepset/deberta-v3-large-squad2",
    "generate": "local:echo",
}

LOCAL_MODELS = {
    "embed": "local:ngram-hash",
    "score_cheap": "local:token-f1",
    "score_expensive": "local:weighted-overlap",
    "spans": "local:best-sentence",
    "generate": "local:echo",
}


class ShimConfigError(Exception):
    pass


@dataclass
class ShimConfig:
    embed: str = REFERENCE_MODELS["embed"]
    score_cheap: str = REFERENCE_MODELS["score_cheap"]
    score_expensive: str = REFERENCE_MODELS["score_expensive"]
    spans: str = REFERENCE_MODELS["spans"]
    generate: str | None = REFERENCE_MODELS["generate"]
    device: str = "cpu"
    max_batch_size: int = 32
    host: str = "127.0.0.1"
    port: int = 8040
    embedding_dim: int = 384
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.max_batch_size < 1:
            raise ShimConfigError("max_batch_size must be positive")
        if not (0 <= self.port <= 65535):
            raise ShimConfigError("port out of range")


def load_shim_config(path: str | Path | None = None, overrides: dict | None = None,
                     use_local: bool = False) -> ShimConfig:
    """Read YAML/JSON config and apply flag overrides.

    ``use_local`` swaps the model defaults to the built-in deterministic
    models; the config file and explicit overrides still win over it.
    """
    values: dict = dict(LOCAL_MODELS) if use_local else {}
    if path:
        text = Path(path).read_text(encoding="utf-8")
        loaded = (json.loads(text) if str(path).endswith(".json")
                  else yaml.safe_load(text))
        if not isinstance(loaded, dict):
            raise ShimConfigError(f"config file {path} must hold a mapping")
        known = {f.name for f in fields(ShimConfig)}
        unknown = set(loaded) - known
        if unknown:
            raise ShimConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return ShimConfig(**values)
    except TypeError as exc:
        raise ShimConfigError(str(exc)) from exc
