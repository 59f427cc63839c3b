"""
MOTOR Retriever

Exhaustive top-k cosine retrieval over the image embeddings of a CorpusStore.
"""
import logging
from typing import List

import numpy as np

from ..core.models import EmbeddingVector
from ..errors import DimensionMismatch, InvalidConfig
from ..store.corpus import CorpusStore
from ..store.similarity import cosine_similarity
from .models import RetrievalResult

logger = logging.getLogger("motor.retrieval")


def retrieve_top_k(store: CorpusStore, query_image: EmbeddingVector, k: int) -> List[RetrievalResult]:
    """
    Retrieve the k records whose image embeddings are most similar to the query.

    Ties keep insertion order. An empty store returns an empty list.

    Args:
        store: Corpus to scan
        query_image: Query image embedding
        k: Number of results wanted

    Returns:
        min(k, len(store)) results, similarity descending, ranks 1..n

    Raises:
        InvalidConfig: If k < 1
        DimensionMismatch: If the query dim differs from the store's visual_dim
    """
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise InvalidConfig(f"k must be a positive integer, got {k!r}")
    if query_image.dim != store.visual_dim:
        raise DimensionMismatch(store.visual_dim, query_image.dim, "query image embedding")
    if len(store) == 0:
        logger.info("empty store; retrieval returns no candidates")
        return []

    sims = np.array([cosine_similarity(query_image, r.image_embedding) for r in store], dtype=np.float64)
    order = np.argsort(-sims, kind="stable")[:k]
    records = store.records
    return [
        RetrievalResult(record_id=records[i].id, initial_rank=rank, similarity=float(sims[i]))
        for rank, i in enumerate(order, start=1)
    ]
