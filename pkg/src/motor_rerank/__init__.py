"""
MOTOR Re-ranking Package

This package implements multimodal retrieval with optimal-transport re-ranking for
retrieval-augmented generation over grounded captions: top-k image retrieval,
composite similarity over findings, Sinkhorn OT scoring, context assembly and an
offline evaluation kit.
"""

from .base import MotorComponent
from .config import MotorSettings, configure_logging, load_motor_settings
from .core import (
    BoundingBox,
    CandidateRecord,
    EmbeddingVector,
    GroundedCaption,
    GroundedFinding,
    QueryContext,
    RerankConfig,
    validate_query,
    validate_record,
)
from .errors import MotorError
from .evalkit import AblationHarness, SyntheticCorpusSpec, generate_synthetic_corpus
from .pipeline import GenerationClient, GenerationRequest, MotorPipeline, assemble_prompt, run_query
from .rerank import CandidateScore, Reranker
from .retrieval import RetrievalResult, retrieve_top_k
from .store import CorpusIngester, CorpusStore, ingest_corpus, load_corpus, load_query_dir
from .transport import TransportPlan, build_cost_matrix, exact_ot_bruteforce, sinkhorn

__version__ = "0.2.0"
__all__ = [
    "AblationHarness",
    "BoundingBox",
    "CandidateRecord",
    "CandidateScore",
    "CorpusIngester",
    "CorpusStore",
    "EmbeddingVector",
    "GenerationClient",
    "GenerationRequest",
    "GroundedCaption",
    "GroundedFinding",
    "MotorComponent",
    "MotorError",
    "MotorPipeline",
    "MotorSettings",
    "QueryContext",
    "RerankConfig",
    "Reranker",
    "RetrievalResult",
    "SyntheticCorpusSpec",
    "TransportPlan",
    "assemble_prompt",
    "build_cost_matrix",
    "configure_logging",
    "exact_ot_bruteforce",
    "generate_synthetic_corpus",
    "ingest_corpus",
    "load_corpus",
    "load_motor_settings",
    "load_query_dir",
    "retrieve_top_k",
    "run_query",
    "sinkhorn",
    "validate_query",
    "validate_record",
]
