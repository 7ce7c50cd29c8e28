import random

import pytest

from kgwebqa.gateway import build_gateway
from kgwebqa.kg import KnowledgeGraph, Triple

# Triples mirroring the worked subgraph example used throughout the tests.
MANSION_TRIPLES = [
    ("Esma Sultan Mansion", "architecture.architect.structures_designed", "Balyan family"),
    ("Esma Sultan Mansion", "architecture.structure.architect", "Balyan family"),
    ("Laleli Mosque", "religion.place_of_worship.religion", "Islam"),
    ("Balyan family", "architecture.structure.architect", "Esma Sultan Mansion"),
    ("Balyan family", "architecture.structure.architect", "Beylerbeyi Palace"),
    ("Balyan family", "architecture.structure.architect", "Dolmabahce Mosque"),
    ("Beylerbeyi Palace", "architecture.architectural_style.examples", "Ottoman architecture"),
    ("Dolmabahce Clock Tower", "architecture.architectural_style.examples", "Ottoman architecture"),
    ("Dolmabahce Clock Tower", "architecture.structure.architectural_style", "Ottoman architecture"),
]


@pytest.fixture
def gateway():
    return build_gateway()


@pytest.fixture
def mansion_graph():
    return KnowledgeGraph(Triple(*t) for t in MANSION_TRIPLES)


def make_random_graph(rng: random.Random, max_entities: int = 50,
                      max_relations: int = 6, max_edges: int = 90) -> KnowledgeGraph:
    n_entities = rng.randint(2, max_entities)
    n_relations = rng.randint(1, max_relations)
    entities = [f"e{i}" for i in range(n_entities)]
    relations = [f"rel{j}" for j in range(n_relations)]
    n_edges = rng.randint(1, max_edges)
    triples = {
        (rng.choice(entities), rng.choice(relations), rng.choice(entities))
        for _ in range(n_edges)
    }
    return KnowledgeGraph(Triple(*t) for t in triples)


def make_sentence(rng: random.Random, n_tokens: int, prefix: str = "w") -> str:
    words = [f"{prefix}{rng.randrange(1000)}" for _ in range(n_tokens - 1)]
    return " ".join(words + [f"{prefix}end."])


def make_html_fixture(rng: random.Random) -> str:
    """One random HTML page mixing paragraph sizes, tags, and noise."""
    parts = ["<html><head><title>t</title><style>p{color:red}</style></head><body>"]
    for _ in range(rng.randint(1, 8)):
        kind = rng.choice(["tiny", "small", "mid", "long", "noise"])
        if kind == "tiny":
            body = make_sentence(rng, rng.randint(2, 9))
        elif kind == "small":
            body = make_sentence(rng, rng.randint(10, 40))
        elif kind == "mid":
            body = " ".join(make_sentence(rng, rng.randint(10, 40)) for _ in range(2))
        elif kind == "long":
            body = " ".join(
                make_sentence(rng, rng.randint(5, 40))
                for _ in range(rng.randint(3, 10))
            )
        else:
            body = "<script>var x = 1;</script>"
        wrapper = rng.choice(["<p>{}</p>", "<div>{}</div>", "{}\n", "<p><b>{}</b></p>"])
        parts.append(wrapper.format(body))
    parts.append("</body></html>")
    return "".join(parts)
