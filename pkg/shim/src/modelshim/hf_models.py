"""Hugging Face model adapters, imported lazily.

Each adapter normalizes one model family onto the shim's internal
interface. Loading happens at startup; any failure (missing weights, no
network, bad identifier) raises ModelLoadError so the server refuses to
start with a diagnostic instead of serving a broken capability.
"""

from __future__ import annotations


class ModelLoadError(Exception):
    pass


class HfEmbedder:
    def __init__(self, identifier: str, device: str):
        try:
            from sentence_transformers import SentenceTransformer
            self._model = SentenceTransformer(identifier, device=device)
        except Exception as exc:
            raise ModelLoadError(f"cannot load embedding model {identifier!r}: {exc}") from exc
        self.name = identifier

    def encode(self, texts: list[str]) -> list[list[float]]:
        vectors = self._model.encode(texts, normalize_embeddings=True,
                                     show_progress_bar=False)
        return [v.tolist() for v in vectors]


class HfCrossEncoderScorer:
    def __init__(self, identifier: str, device: str):
        try:
            from sentence_transformers import CrossEncoder
            self._model = CrossEncoder(identifier, device=device)
        except Exception as exc:
            raise ModelLoadError(f"cannot load cross-encoder {identifier!r}: {exc}") from exc
        self.name = identifier

    def score(self, query: str, passages: list[str]) -> list[float]:
        pairs = [(query, passage) for passage in passages]
        return [float(s) for s in self._model.predict(pairs)]


class HfSpanExtractor:
    def __init__(self, identifier: str, device: str):
        try:
            from transformers import pipeline
            self._pipe = pipeline("question-answering", model=identifier,
                                  device=-1 if device == "cpu" else device)
        except Exception as exc:
            raise ModelLoadError(f"cannot load span model {identifier!r}: {exc}") from exc
        self.name = identifier

    def extract(self, query: str, document: str,
                max_spans: int) -> list[tuple[int, int]]:
        outputs = self._pipe(question=query, context=document, top_k=max_spans,
                             handle_impossible_answer=False)
        if isinstance(outputs, dict):
            outputs = [outputs]
        spans: list[tuple[int, int]] = []
        for out in sorted(outputs, key=lambda o: -o["score"]):
            start, end = int(out["start"]), int(out["end"])
            if end <= start:
                continue
            if any(not (end <= s or e <= start) for s, e in spans):
                continue  # keep spans non-overlapping, best first
            spans.append((start, end))
        return spans[:max_spans]


class HfGenerator:
    def __init__(self, identifier: str, device: str):
        try:
            from transformers import pipeline
            self._pipe = pipeline("text-generation", model=identifier,
                                  device=-1 if device == "cpu" else device)
        except Exception as exc:
            raise ModelLoadError(f"cannot load generator {identifier!r}: {exc}") from exc
        self.name = identifier

    def generate(self, prompt: str, max_tokens: int) -> str:
        out = self._pipe(prompt, max_new_tokens=max_tokens, do_sample=False,
                         return_full_text=False)
        return out[0]["generated_text"]
