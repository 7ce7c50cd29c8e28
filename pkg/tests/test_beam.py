import random

import pytest

from kgwebqa.beam import (BeamConfig, Hop, ReasoningPath, beam_search,
                          score_candidates, serialize_subgraph)
from kgwebqa.errors import BackendError
from kgwebqa.gateway import build_gateway
from kgwebqa.kg import KnowledgeGraph, Triple

from conftest import make_random_graph
from oracles import (exhaustive_paths, reference_beam_search, reference_cosine,
                     reference_hash_vector)

QUESTION = "Are the Laleli Mosque and Esma Sultan Mansion located in the same neighborhood?"


def _signatures(paths):
    return {p.signature() for p in paths}


def test_score_candidates_identity_label(gateway):
    question = "what is the capital of France"
    scores = score_candidates(gateway, question, ["irrelevant", question])
    assert abs(scores[1] - 1.0) < 1e-6
    assert scores[0] < 1.0


def test_score_candidates_single_label(gateway):
    assert len(score_candidates(gateway, "q", ["only"])) == 1


def test_score_candidates_matches_recomputed_cosines(gateway):
    rng = random.Random(9)
    labels = [f"label {rng.randrange(10**6)}" for _ in range(20)]
    scores = score_candidates(gateway, "some question", labels)
    qvec = reference_hash_vector("some question")
    for label, score in zip(labels, scores):
        assert abs(score - reference_cosine(qvec, reference_hash_vector(label))) < 1e-9


def test_score_candidates_requires_labels(gateway):
    with pytest.raises(ValueError):
        score_candidates(gateway, "q", [])


def test_score_candidates_propagates_backend_failure():
    class FailingEmbed:
        def embed(self, texts):
            raise BackendError("boom", capability="embed")

    from kgwebqa.gateway import ModelGateway, MockGenerationBackend, \
        MockScoringBackend, MockSpanBackend
    gw = ModelGateway(FailingEmbed(), MockScoringBackend(), MockSpanBackend(),
                      MockGenerationBackend())
    with pytest.raises(BackendError):
        score_candidates(gw, "q", ["a"])


def test_single_choice_path_needs_no_pruning(gateway):
    graph = KnowledgeGraph([Triple("A", "r", "B")])
    paths = beam_search(graph, "q", ["A"],
                        BeamConfig(width=1, depth=1, direction_policy="outgoing-only"),
                        gateway=gateway)
    assert len(paths) == 1
    assert paths[0].signature() == (("A", "r", "B", "outgoing"),)
    assert len(paths[0].hop_scores) == 1


def test_unknown_topic_entity_yields_no_subgraph(gateway, mansion_graph):
    assert beam_search(mansion_graph, "q", ["Atlantis"], gateway=gateway) == []


def test_empty_topic_entities_rejected(gateway, mansion_graph):
    with pytest.raises(ValueError):
        beam_search(mansion_graph, "q", [], gateway=gateway)


def test_mansion_fixture_contains_architect_triple(gateway, mansion_graph):
    paths = beam_search(mansion_graph, QUESTION, ["Esma Sultan Mansion"],
                        BeamConfig(width=3, depth=3), gateway=gateway)
    assert paths
    wanted = Triple("Esma Sultan Mansion", "architecture.structure.architect",
                    "Balyan family")
    assert any(wanted in p.triples() for p in paths)


def test_paths_are_sorted_contiguous_and_edge_backed(gateway, mansion_graph):
    paths = beam_search(mansion_graph, QUESTION,
                        ["Esma Sultan Mansion", "Laleli Mosque"],
                        BeamConfig(width=3, depth=3), gateway=gateway)
    scores = [p.score for p in paths]
    assert scores == sorted(scores, reverse=True)
    triples = mansion_graph.triples
    for path in paths:
        assert len(path.hops) <= 3
        for hop in path.hops:
            assert hop.as_triple() in triples


def test_zero_llm_calls_in_beam_search(mansion_graph):
    gw = build_gateway()
    beam_search(mansion_graph, QUESTION, ["Esma Sultan Mansion"], gateway=gw)
    assert gw.ledger.llm_calls == 0


def test_deterministic_across_runs(gateway, mansion_graph):
    runs = [
        beam_search(mansion_graph, QUESTION, ["Esma Sultan Mansion"],
                    BeamConfig(width=3, depth=3), gateway=build_gateway())
        for _ in range(3)
    ]
    assert [_signatures(r) for r in runs] == [_signatures(runs[0])] * 3
    assert [[p.score for p in r] for r in runs] == [[p.score for p in runs[0]]] * 3


@pytest.mark.parametrize("policy", ["both", "outgoing-only"])
def test_matches_reference_implementation_on_random_graphs(policy):
    gw = build_gateway()
    rng = random.Random(42)
    for _ in range(30):
        graph = make_random_graph(rng, max_entities=20, max_edges=45)
        entities = sorted(graph.entities)
        seeds = rng.sample(entities, min(len(entities), rng.randint(1, 2)))
        question = f"question {rng.randrange(100)}"
        for width in (1, 2, 3):
            for depth in (1, 2, 3):
                got = _signatures(beam_search(
                    graph, question, seeds,
                    BeamConfig(width=width, depth=depth, direction_policy=policy),
                    gateway=gw))
                want = reference_beam_search(graph, question, seeds, width,
                                             depth, policy, gw)
                assert got == want, (width, depth, policy, seeds)


def test_monotone_pruning_returns_every_path(gateway):
    rng = random.Random(1234)
    for _ in range(15):
        graph = make_random_graph(rng, max_entities=8, max_edges=10)
        entities = sorted(graph.entities)
        seeds = [rng.choice(entities)]
        for policy in ("both", "outgoing-only"):
            everything = exhaustive_paths(graph, seeds, 2, policy)
            got = _signatures(beam_search(
                graph, "q", seeds,
                BeamConfig(width=len(everything) + 50, depth=2,
                           direction_policy=policy),
                gateway=gateway))
            assert got == everything


def test_dead_end_paths_survive_frozen(gateway):
    graph = KnowledgeGraph([Triple("A", "r1", "B"), Triple("A", "r2", "C"),
                            Triple("C", "r3", "D")])
    paths = beam_search(graph, "q", ["A"],
                        BeamConfig(width=3, depth=3, direction_policy="outgoing-only"),
                        gateway=gateway)
    signatures = _signatures(paths)
    assert (("A", "r1", "B", "outgoing"),) in signatures
    assert (("A", "r2", "C", "outgoing"), ("C", "r3", "D", "outgoing")) in signatures


def test_isolated_seed_contributes_nothing(gateway):
    graph = KnowledgeGraph([Triple("A", "r", "B"), Triple("X", "rx", "Y")])
    paths = beam_search(graph, "q", ["B"],
                        BeamConfig(width=2, depth=2, direction_policy="outgoing-only"),
                        gateway=gateway)
    assert paths == []


def test_serialize_single_triple():
    path = ReasoningPath("A", (Hop("A", "r", "B", "outgoing"),), ((0.5, 0.5),))
    assert serialize_subgraph([path]) == "('A', 'r', 'B')"


def test_serialize_deduplicates_across_paths():
    hop = Hop("A", "r", "B", "outgoing")
    p1 = ReasoningPath("A", (hop,), ((0.9, 0.9),))
    p2 = ReasoningPath("A", (hop,), ((0.1, 0.1),))
    assert serialize_subgraph([p1, p2]) == "('A', 'r', 'B')"


def test_serialize_table_style_listing(mansion_graph):
    first = ReasoningPath(
        "Esma Sultan Mansion",
        (Hop("Esma Sultan Mansion", "architecture.architect.structures_designed",
             "Balyan family", "outgoing"),),
        ((0.9, 0.9),),
    )
    second = ReasoningPath(
        "Esma Sultan Mansion",
        (Hop("Esma Sultan Mansion", "architecture.structure.architect",
             "Balyan family", "outgoing"),),
        ((0.5, 0.5),),
    )
    text = serialize_subgraph([first, second])
    assert text.startswith(
        "('Esma Sultan Mansion', 'architecture.architect.structures_designed', "
        "'Balyan family'), "
    )
    assert text.endswith(
        "('Esma Sultan Mansion', 'architecture.structure.architect', 'Balyan family')"
    )


def test_serialize_empty_is_empty_string():
    assert serialize_subgraph([]) == ""


def test_reasoning_path_validates_contiguity():
    with pytest.raises(ValueError):
        ReasoningPath("A", (Hop("B", "r", "C", "outgoing"),), ((0.1, 0.1),))


def test_beam_config_validation():
    with pytest.raises(ValueError):
        BeamConfig(width=0)
    with pytest.raises(ValueError):
        BeamConfig(depth=0)
    with pytest.raises(ValueError):
        BeamConfig(direction_policy="sideways")
