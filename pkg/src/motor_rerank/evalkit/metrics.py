"""
Evaluation metrics.

Metrics work on ranked id lists, so they apply equally to the initial retrieval
order and to the re-ranked order recorded in a request trace.
"""
from typing import Any, List, Mapping, Optional, Sequence

import numpy as np

from ..errors import MisalignedSamples, MissingQuery, NotAPermutation
from ..pipeline.models import GenerationRequest
from .models import PlantedMetrics

ORDERINGS = ("final", "initial")


def change_rate(
    initial: Sequence[Sequence[str]],
    reranked: Sequence[Sequence[str]],
    depth: Optional[int] = None,
) -> float:
    """
    Fraction of samples whose re-ranked order differs from the initial order.

    Args:
        initial: Initial ranked id list per sample
        reranked: Re-ranked id list per sample
        depth: Compare only the top-``depth`` prefix; None compares the full list

    Returns:
        Value in [0, 1]; 0.0 when there are no samples

    Raises:
        MisalignedSamples: If the sample counts differ
        NotAPermutation: If a re-ranked list is not a permutation of its initial list
    """
    if len(initial) != len(reranked):
        raise MisalignedSamples(f"{len(initial)} initial samples vs {len(reranked)} re-ranked samples")
    if depth is not None and depth < 1:
        raise MisalignedSamples(f"depth must be positive, got {depth}")
    if not initial:
        return 0.0
    changed = 0
    for index, (before, after) in enumerate(zip(initial, reranked)):
        if len(before) != len(after) or sorted(before) != sorted(after) or len(set(before)) != len(before):
            raise NotAPermutation(f"sample {index}: re-ranked ids are not a permutation of the initial ids")
        cut = len(before) if depth is None else depth
        if list(before[:cut]) != list(after[:cut]):
            changed += 1
    return changed / len(initial)


def _query_id(query: Any) -> str:
    return getattr(query, "query_id", query)


def _ranking(request: GenerationRequest, ordering: str) -> List[str]:
    return request.trace.final_ranking if ordering == "final" else request.trace.initial_ranking


def planted_precision(
    queries: Sequence[Any],
    requests: Sequence[GenerationRequest],
    planted: Mapping[str, Sequence[str]],
    s: int,
    ordering: str = "final",
) -> PlantedMetrics:
    """
    Precision at s and mean reciprocal rank against planted relevant ids.

    precision_at_s averages |top-s & planted| / min(s, |planted|); a query whose
    planted ids were never retrieved contributes 0 to both metrics.

    Args:
        queries: QueryContext objects or query ids, aligned with ``requests``
        requests: One GenerationRequest per query
        planted: Query id to relevant record ids
        s: Cut-off
        ordering: "final" (re-ranked) or "initial" (retrieval order)

    Raises:
        MisalignedSamples: If queries and requests differ in length
        MissingQuery: If a query has no planted ids
    """
    if len(queries) != len(requests):
        raise MisalignedSamples(f"{len(queries)} queries vs {len(requests)} requests")
    if ordering not in ORDERINGS:
        raise ValueError(f"ordering must be one of {', '.join(ORDERINGS)}, got {ordering!r}")
    if s < 1:
        raise ValueError(f"s must be positive, got {s}")
    if not queries:
        return {"precision_at_s": 0.0, "mrr": 0.0}

    precisions = []
    reciprocal_ranks = []
    for query, request in zip(queries, requests):
        query_id = _query_id(query)
        relevant = set(planted.get(query_id) or ())
        if not relevant:
            raise MissingQuery(f"query {query_id!r} has no planted relevant ids")
        ranking = _ranking(request, ordering)
        hits = sum(1 for record_id in ranking[:s] if record_id in relevant)
        precisions.append(hits / min(s, len(relevant)))
        first = next((pos for pos, record_id in enumerate(ranking, start=1) if record_id in relevant), None)
        reciprocal_ranks.append(1.0 / first if first else 0.0)
    return {
        "precision_at_s": float(np.mean(precisions)),
        "mrr": float(np.mean(reciprocal_ranks)),
    }
