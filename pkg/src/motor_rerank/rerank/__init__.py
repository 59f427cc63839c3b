"""
MOTOR Rerank Module

Composite multimodal similarity, OT scoring and context selection.
"""

from .models import CandidateScore
from .reranker import Reranker, composite_similarity, rerank, score_candidate, select_context

__all__ = [
    "CandidateScore",
    "Reranker",
    "composite_similarity",
    "rerank",
    "score_candidate",
    "select_context",
]
