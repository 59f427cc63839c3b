"""
MOTOR Core Module

Domain types shared by all MOTOR modules, with validation.
"""

from .models import (
    DEFAULT_TEXT_DIM,
    DEFAULT_VISUAL_DIM,
    PRESETS,
    SCORING_METHODS,
    BoundingBox,
    CandidateRecord,
    EmbeddingVector,
    GroundedCaption,
    GroundedFinding,
    QueryContext,
    RerankConfig,
)
from .validation import check_record_dims, validate_query, validate_record

__all__ = [
    "DEFAULT_TEXT_DIM",
    "DEFAULT_VISUAL_DIM",
    "PRESETS",
    "SCORING_METHODS",
    "BoundingBox",
    "CandidateRecord",
    "EmbeddingVector",
    "GroundedCaption",
    "GroundedFinding",
    "QueryContext",
    "RerankConfig",
    "check_record_dims",
    "validate_query",
    "validate_record",
]
