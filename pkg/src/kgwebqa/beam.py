"""LLM-free subgraph retrieval: embedding-pruned beam search over the KG.

Starting from the question's topic entities, the search alternates two
pruning stages per hop, both driven purely by embedding cosine similarity
(no generator is ever invoked):

1. relation expansion: every beam path contributes its frontier entity's
   incident relations; candidates are scored by question-relation cosine
   and the best ``width`` (path, relation, direction) pairs survive
   globally across the whole beam;
2. entity expansion: each surviving pair contributes its neighbor
   entities; candidates are scored by question-entity cosine and the best
   ``width`` extended paths survive globally.

This repeats until ``depth`` hops are reached or nothing can be extended.
A path whose frontier has no relations is frozen and keeps competing for
beam slots on its path score (mean of all its relation and entity scores).
Ties break on lexicographic (relation, entity) labels, then direction
(outgoing first), then beam position, so runs are fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kg import INCOMING, OUTGOING, KnowledgeGraph, Triple

DIRECTION_POLICIES = ("both", "outgoing-only")
_DIRECTION_RANK = {OUTGOING: 0, INCOMING: 1}


@dataclass
class BeamConfig:
    width: int = 3
    depth: int = 3
    direction_policy: str = "both"

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("beam width must be >= 1")
        if self.depth < 1:
            raise ValueError("beam depth must be >= 1")
        if self.direction_policy not in DIRECTION_POLICIES:
            raise ValueError(f"direction_policy must be one of {DIRECTION_POLICIES}")


@dataclass(frozen=True)
class Hop:
    head: str
    relation: str
    tail: str
    direction: str

    @property
    def source(self) -> str:
        return self.head if self.direction == OUTGOING else self.tail

    @property
    def target(self) -> str:
        return self.tail if self.direction == OUTGOING else self.head

    def as_triple(self) -> Triple:
        return Triple(self.head, self.relation, self.tail)


@dataclass(frozen=True)
class ReasoningPath:
    origin: str
    hops: tuple[Hop, ...] = ()
    hop_scores: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if len(self.hops) != len(self.hop_scores):
            raise ValueError("one (relation, entity) score pair per hop required")
        source = self.origin
        for hop in self.hops:
            if hop.source != source:
                raise ValueError("hops must be contiguous")
            source = hop.target

    @property
    def frontier(self) -> str:
        return self.hops[-1].target if self.hops else self.origin

    @property
    def score(self) -> float:
        """Arithmetic mean of all relation and entity scores along the path."""
        if not self.hop_scores:
            return 0.0
        flat = [s for pair in self.hop_scores for s in pair]
        return sum(flat) / len(flat)

    def extended(self, hop: Hop, relation_score: float,
                 entity_score: float) -> "ReasoningPath":
        return ReasoningPath(self.origin, self.hops + (hop,),
                             self.hop_scores + ((relation_score, entity_score),))

    def signature(self) -> tuple:
        return tuple((h.head, h.relation, h.tail, h.direction) for h in self.hops)

    def triples(self) -> list[Triple]:
        return [h.as_triple() for h in self.hops]


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    # clamp the rounding spill so scores stay inside [-1, 1]
    return min(1.0, max(-1.0, float(np.dot(u, v) / (nu * nv))))


def score_candidates(gateway, question: str, labels: list[str]) -> list[float]:
    """Question-label cosine similarity for every label, via one embed call."""
    if not labels:
        raise ValueError("labels must be non-empty")
    vectors = gateway.embed([question] + list(labels))
    q = vectors[0]
    return [cosine(q, v) for v in vectors[1:]]


class _ScoreCache:
    """Deduplicates embedding lookups across beam iterations."""

    def __init__(self, gateway, question: str):
        self._gateway = gateway
        self._question = question
        self._scores: dict[str, float] = {}

    def scores(self, labels: set[str]) -> dict[str, float]:
        missing = sorted(label for label in labels if label not in self._scores)
        if missing:
            values = score_candidates(self._gateway, self._question, missing)
            self._scores.update(zip(missing, values))
        return {label: self._scores[label] for label in labels}


def _path_order_key(path: ReasoningPath) -> tuple:
    return (-path.score, path.signature(), path.origin)


def beam_search(graph: KnowledgeGraph, question: str, topic_entities: list[str],
                config: BeamConfig | None = None, *, gateway) -> list[ReasoningPath]:
    """Retrieve the top reasoning paths for ``question`` anchored at the topic entities.

    Returns an empty list when no topic entity exists in the graph (the
    distinct no-subgraph outcome). Paths come back sorted by score, best
    first, and never exceed the configured beam width.
    """
    if not topic_entities:
        raise ValueError("topic_entities must be non-empty")
    cfg = config or BeamConfig()

    seeds = []
    seen = set()
    for entity in topic_entities:
        if entity in seen or not graph.has_entity(entity):
            continue
        seen.add(entity)
        seeds.append(ReasoningPath(origin=entity))
    if not seeds:
        return []

    cache = _ScoreCache(gateway, question)
    beam: list[ReasoningPath] = seeds

    for _ in range(cfg.depth):
        expandable: list[tuple[int, ReasoningPath, list[tuple[str, str]]]] = []
        frozen: list[ReasoningPath] = []
        for idx, path in enumerate(beam):
            incident = graph.relations_of(path.frontier)
            if cfg.direction_policy == "outgoing-only":
                incident = {rd for rd in incident if rd[1] == OUTGOING}
            if incident:
                expandable.append((idx, path, sorted(incident)))
            elif path.hops:
                frozen.append(path)
        if not expandable:
            break

        # Stage 1: global top-N (path, relation, direction) pairs.
        relation_scores = cache.scores(
            {rel for _, _, incident in expandable for rel, _ in incident}
        )
        relation_candidates = [
            (-relation_scores[rel], rel, _DIRECTION_RANK[direction], idx, path, direction)
            for idx, path, incident in expandable
            for rel, direction in incident
        ]
        relation_candidates.sort(key=lambda c: c[:4])
        kept_pairs = relation_candidates[:cfg.width]

        # Stage 2: global top-N extended paths by entity score.
        neighbor_sets = [
            (neg_score, rel, direction, idx, path,
             sorted(graph.neighbors_of(path.frontier, rel, direction)))
            for neg_score, rel, _, idx, path, direction in kept_pairs
        ]
        entity_scores = cache.scores(
            {e for *_, neighbors in neighbor_sets for e in neighbors}
        )
        entity_candidates = [
            (-entity_scores[entity], rel, entity, _DIRECTION_RANK[direction], idx,
             path, -neg_rel_score, direction)
            for neg_rel_score, rel, direction, idx, path, neighbors in neighbor_sets
            for entity in neighbors
        ]
        entity_candidates.sort(key=lambda c: c[:5])

        extended = []
        for neg_ent, rel, entity, _, _, path, rel_score, direction in \
                entity_candidates[:cfg.width]:
            frontier = path.frontier
            head, tail = (frontier, entity) if direction == OUTGOING else (entity, frontier)
            hop = Hop(head, rel, tail, direction)
            extended.append(path.extended(hop, rel_score, -neg_ent))

        beam = sorted(extended + frozen, key=_path_order_key)[:cfg.width]
        if not beam:
            break

    survivors = [p for p in beam if p.hops]
    return sorted(survivors, key=_path_order_key)


def subgraph_triples(paths: list[ReasoningPath]) -> list[Triple]:
    """Deduplicated triples in first-occurrence order over score-sorted paths."""
    ordered = sorted(paths, key=_path_order_key)
    out: list[Triple] = []
    seen: set[Triple] = set()
    for path in ordered:
        for triple in path.triples():
            if triple not in seen:
                seen.add(triple)
                out.append(triple)
    return out


def serialize_subgraph(paths: list[ReasoningPath]) -> str:
    """Render the retrieved triples as ``('head', 'relation', 'tail')`` text."""
    return ", ".join(
        f"('{t.head}', '{t.relation}', '{t.tail}')" for t in subgraph_triples(paths)
    )
