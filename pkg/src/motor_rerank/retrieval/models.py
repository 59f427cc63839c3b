"""
MOTOR Retrieval Type Definitions
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class RetrievalResult:
    """One first-stage hit: ranks start at 1, similarity is the image cosine."""

    record_id: str
    initial_rank: int
    similarity: float
