"""Independent reference implementations used to cross-check the pipeline.

Everything here is deliberately written from scratch against the stated
selection rules, in a different style from the production code (plain
tuples, dicts, and ``sorted`` calls), so shared bugs are unlikely.
"""

from __future__ import annotations

import hashlib
import math

_DIR_RANK = {"outgoing": 0, "incoming": 1}


# ---------------------------------------------------------------------------
# Mock embedding recomputation (documented rule, no numpy)
# ---------------------------------------------------------------------------


def reference_hash_vector(text: str, dim: int = 384) -> list[float]:
    raw = hashlib.shake_256(text.encode("utf-8")).digest(dim * 8)
    values = []
    for i in range(dim):
        word = int.from_bytes(raw[i * 8:(i + 1) * 8], "big")
        values.append(word / 2.0**63 - 1.0)
    norm = math.sqrt(sum(v * v for v in values))
    return [v / norm for v in values]


def reference_cosine(u: list[float], v: list[float]) -> float:
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return sum(a * b for a, b in zip(u, v)) / (nu * nv)


def reference_jaccard(query: str, passage: str) -> float:
    a = {t.lower() for t in query.split()}
    b = {t.lower() for t in passage.split()}
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


# ---------------------------------------------------------------------------
# Beam search reference
# ---------------------------------------------------------------------------
#
# Scores use the same float64 cosine expression as production so that this
# oracle isolates the selection logic; the score values themselves are
# cross-checked against reference_hash_vector/reference_cosine separately.


def _numpy_cosine(u, v) -> float:
    import numpy as np
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return min(1.0, max(-1.0, float(np.dot(u, v) / (nu * nv))))


def _score_map(gateway, question: str, labels) -> dict[str, float]:
    labels = sorted(set(labels))
    if not labels:
        return {}
    vectors = gateway.embed([question] + labels)
    q = vectors[0]
    return {label: _numpy_cosine(q, vec) for label, vec in zip(labels, vectors[1:])}


def _incident(graph, entity: str, policy: str):
    pairs = graph.relations_of(entity)
    if policy == "outgoing-only":
        pairs = {(r, d) for r, d in pairs if d == "outgoing"}
    return sorted(pairs)


def _hop(frontier: str, relation: str, neighbor: str, direction: str):
    if direction == "outgoing":
        return (frontier, relation, neighbor, direction)
    return (neighbor, relation, frontier, direction)


def _path_score(scores) -> float:
    flat = [s for pair in scores for s in pair]
    return sum(flat) / len(flat) if flat else 0.0


def reference_beam_search(graph, question: str, topic_entities, width: int,
                          depth: int, policy: str, gateway):
    """Step-by-step simulation of the two-stage global top-N selection.

    A path is ``(origin, hops, scores)`` with hops as 4-tuples. Returns the
    set of hop-tuple signatures of the retained paths (paths with >= 1 hop).
    """
    beam = []
    for entity in dict.fromkeys(topic_entities):
        if graph.has_entity(entity):
            beam.append((entity, (), ()))
    if not beam:
        return set()

    cache: dict[str, float] = {}

    def scores_for(labels):
        missing = [l for l in labels if l not in cache]
        cache.update(_score_map(gateway, question, missing))
        return {l: cache[l] for l in labels}

    for _ in range(depth):
        live = []
        parked = []
        for position, path in enumerate(beam):
            frontier = _frontier(path)
            incident = _incident(graph, frontier, policy)
            if incident:
                live.append((position, path, frontier, incident))
            elif path[1]:
                parked.append(path)
        if not live:
            break

        rel_scores = scores_for({r for _, _, _, inc in live for r, _ in inc})
        stage1 = sorted(
            (
                (-rel_scores[rel], rel, _DIR_RANK[direction], position, path, frontier, direction)
                for position, path, frontier, inc in live
                for rel, direction in inc
            ),
            key=lambda c: c[:4],
        )[:width]

        entity_labels = set()
        expansions = []
        for neg_rel, rel, _, position, path, frontier, direction in stage1:
            neighbors = sorted(graph.neighbors_of(frontier, rel, direction))
            entity_labels.update(neighbors)
            expansions.append((neg_rel, rel, position, path, frontier, direction, neighbors))
        ent_scores = scores_for(entity_labels)
        stage2 = sorted(
            (
                (-ent_scores[nb], rel, nb, _DIR_RANK[direction], position,
                 path, frontier, direction, -neg_rel)
                for neg_rel, rel, position, path, frontier, direction, neighbors in expansions
                for nb in neighbors
            ),
            key=lambda c: c[:5],
        )[:width]

        extended = []
        for neg_ent, rel, nb, _, _, path, frontier, direction, rel_score in stage2:
            hop = _hop(frontier, rel, nb, direction)
            extended.append((path[0], path[1] + (hop,),
                             path[2] + ((rel_score, -neg_ent),)))

        pool = extended + parked
        pool.sort(key=lambda p: (-_path_score(p[2]), p[1], p[0]))
        beam = pool[:width]
        if not beam:
            break

    return {path[1] for path in beam if path[1]}


def _frontier(path) -> str:
    if not path[1]:
        return path[0]
    last = path[1][-1]
    return last[2] if last[3] == "outgoing" else last[0]


def exhaustive_paths(graph, topic_entities, depth: int, policy: str):
    """Every >= 1 hop path that reaches ``depth`` or dead-ends earlier."""
    results = set()

    def walk(path, frontier, level):
        if level == depth:
            if path:
                results.add(tuple(path))
            return
        incident = _incident(graph, frontier, policy)
        if not incident:
            if path:
                results.add(tuple(path))
            return
        for relation, direction in incident:
            for neighbor in sorted(graph.neighbors_of(frontier, relation, direction)):
                hop = _hop(frontier, relation, neighbor, direction)
                walk(path + [hop], neighbor, level + 1)

    for entity in dict.fromkeys(topic_entities):
        if graph.has_entity(entity):
            walk([], entity, 0)
    return results


# ---------------------------------------------------------------------------
# Dedup reference
# ---------------------------------------------------------------------------


def greedy_keep_indices(cosine_matrix, threshold: float) -> list[int]:
    """Greedy scan in given order; drop iff cosine with any kept > threshold."""
    kept: list[int] = []
    for i in range(len(cosine_matrix)):
        if all(cosine_matrix[i][j] <= threshold for j in kept):
            kept.append(i)
    return kept
