"""Citation-grounded QA over web search and a local knowledge graph."""

__version__ = "0.1.0"

from .beam import BeamConfig, ReasoningPath, beam_search, serialize_subgraph
from .compose import (ComposedAnswer, Reference, ReferenceSet,
                      build_references, compose, parse_citations, render_prompt)
from .engine import AnswerResult, EngineConfig, QAEngine
from .errors import (BackendError, ConfigError, DataError, GenerationError,
                     PipelineError, RetrievalError)
from .evaluation import (DatasetItem, aggregate_annotations, citation_accuracy,
                         classify_citations, hits_at_1, judge_citation,
                         llm_guided_search_call_bound, load_dataset, run_eval)
from .gateway import CallLedger, GatewayConfig, ModelGateway, build_gateway
from .kg import KnowledgeGraph, Triple

__all__ = [
    "__version__",
    "BeamConfig",
    "ReasoningPath",
    "beam_search",
    "serialize_subgraph",
    "ComposedAnswer",
    "Reference",
    "ReferenceSet",
    "build_references",
    "compose",
    "parse_citations",
    "render_prompt",
    "AnswerResult",
    "EngineConfig",
    "QAEngine",
    "BackendError",
    "ConfigError",
    "DataError",
    "GenerationError",
    "PipelineError",
    "RetrievalError",
    "DatasetItem",
    "aggregate_annotations",
    "citation_accuracy",
    "classify_citations",
    "hits_at_1",
    "judge_citation",
    "llm_guided_search_call_bound",
    "load_dataset",
    "run_eval",
    "CallLedger",
    "GatewayConfig",
    "ModelGateway",
    "build_gateway",
    "KnowledgeGraph",
    "Triple",
]
