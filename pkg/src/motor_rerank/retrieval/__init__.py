"""
MOTOR Retrieval Module

First-stage top-k retrieval by image-embedding cosine similarity.
"""

from .models import RetrievalResult
from .retriever import retrieve_top_k

__all__ = ["RetrievalResult", "retrieve_top_k"]
