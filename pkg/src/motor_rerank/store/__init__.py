"""
MOTOR Embedding Store Module

The in-memory corpus, cosine similarity kernels and the corpus file formats.
"""

from .corpus import CorpusStore
from .ingest import (
    CorpusIngester,
    ingest_corpus,
    load_corpus,
    load_planted,
    load_queries,
    load_query_dir,
    save_corpus,
    save_planted,
    save_queries,
)
from .models import FindingRow, QueryRow, RecordRow
from .similarity import cosine_similarity, similarity_matrix

__all__ = [
    "CorpusStore",
    "CorpusIngester",
    "FindingRow",
    "QueryRow",
    "RecordRow",
    "cosine_similarity",
    "ingest_corpus",
    "load_corpus",
    "load_planted",
    "load_queries",
    "load_query_dir",
    "save_corpus",
    "save_planted",
    "save_queries",
    "similarity_matrix",
]
