from .core import MOCK, GatewayConfig, ModelGateway, build_gateway
from .ledger import CallLedger
from .mock import (MOCK_EMBEDDING_DIM, MockEmbeddingBackend,
                   MockGenerationBackend, MockScoringBackend, MockSpanBackend,
                   hash_unit_vector, jaccard)

__all__ = [
    "MOCK",
    "GatewayConfig",
    "ModelGateway",
    "build_gateway",
    "CallLedger",
    "MOCK_EMBEDDING_DIM",
    "MockEmbeddingBackend",
    "MockGenerationBackend",
    "MockScoringBackend",
    "MockSpanBackend",
    "hash_unit_vector",
    "jaccard",
]
