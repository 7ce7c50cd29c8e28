"""Near-duplicate removal over bi-encoder embeddings.

Quotes are scanned in rank order; a quote is dropped iff its embedding has
cosine similarity strictly above the threshold with any quote already kept,
so the higher-ranked member of a near-duplicate pair survives. A pair at
exactly the threshold is kept. Applying the pass twice is a no-op.
"""

from __future__ import annotations

import numpy as np

from .types import Quote

DEFAULT_THRESHOLD = 0.9


def deduplicate(gateway, quotes: list[Quote],
                threshold: float = DEFAULT_THRESHOLD) -> list[Quote]:
    if not quotes:
        return []
    vectors = [np.asarray(v, dtype=np.float64)
               for v in gateway.embed([q.text for q in quotes])]
    kept: list[Quote] = []
    kept_vectors: list[np.ndarray] = []
    for quote, vector in zip(quotes, vectors):
        if any(_cosine(vector, other) > threshold for other in kept_vectors):
            continue
        kept.append(quote)
        kept_vectors.append(vector)
    return kept


def _cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))
