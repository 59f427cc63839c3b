"""
MOTOR Reranker

This module composes the multimodal similarity between a query and each retrieved
candidate, scores candidates by entropic OT cost, and reorders them by ascending
cost. Two comparison methods share the same entry points: "mean-cosine" scores a
candidate by the mean of its cost matrix, "none" keeps the retrieval order.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..base import MotorComponent
from ..core.models import CandidateRecord, QueryContext, RerankConfig
from ..errors import DuplicateId, InvalidConfig, MotorError
from ..retrieval.models import RetrievalResult
from ..store.corpus import CorpusStore
from ..store.similarity import cosine_similarity, similarity_matrix
from ..transport.sinkhorn import build_cost_matrix, sinkhorn, uniform_marginal
from .models import CandidateScore

Candidate = Tuple[CandidateRecord, RetrievalResult]


def composite_similarity(q: QueryContext, r: CandidateRecord, cfg: RerankConfig) -> np.ndarray:
    """
    Weighted multimodal similarity between query and candidate findings.

    Entry (i, j) is alpha * cos(question, report) + beta * cos(text_i, text_j)
    + delta * cos(box_i, box_j).

    Args:
        q: Query with n_q findings
        r: Candidate with n_r findings
        cfg: Weights alpha, beta, delta

    Returns:
        n_q x n_r matrix with entries in [-1, 1]

    Raises:
        DimensionMismatch: If query and candidate embeddings differ in length
    """
    relevance = cosine_similarity(q.question_embedding, r.report_embedding)
    text = similarity_matrix(q.caption.text_embeddings(), r.caption.text_embeddings())
    box = similarity_matrix(q.caption.box_embeddings(), r.caption.box_embeddings())
    F = cfg.alpha * relevance + cfg.beta * text + cfg.delta * box
    return np.clip(F, -1.0, 1.0)


class Reranker(MotorComponent):
    """
    Scores and reorders retrieved candidates for one configuration.

    Candidate scoring is independent per candidate; with ``workers > 1`` it runs on
    a thread pool and results are merged in input order, so the output does not
    depend on the worker count.
    """

    _log_tag = "Reranker"

    def __init__(self, config: Optional[RerankConfig] = None, workers: int = 1):
        """
        Initialize the reranker.

        Args:
            config: Re-ranking configuration (defaults to RerankConfig())
            workers: Thread count for candidate scoring

        Raises:
            InvalidConfig: If workers < 1
        """
        if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
            raise InvalidConfig(f"workers must be a positive integer, got {workers!r}")
        self.config = config or RerankConfig()
        self.workers = workers

    def composite_similarity(self, q: QueryContext, r: CandidateRecord) -> np.ndarray:
        return composite_similarity(q, r, self.config)

    def score_candidate(
        self,
        q: QueryContext,
        r: CandidateRecord,
        result: Optional[RetrievalResult] = None,
    ) -> CandidateScore:
        """
        Score one candidate (unranked).

        When either caption is empty the cost falls back to 1 - cos(question, report).
        Sinkhorn non-convergence is recorded as a warning on the score.

        Args:
            q: Validated query
            r: Validated candidate
            result: The candidate's retrieval hit, if any

        Returns:
            CandidateScore with ot_cost filled and final_rank 0

        Raises:
            NumericalError: Propagated from the OT solver
            DimensionMismatch: If query and candidate dims disagree
        """
        cfg = self.config
        initial_rank = result.initial_rank if result else 0
        similarity = result.similarity if result else cosine_similarity(q.image_embedding, r.image_embedding)

        if cfg.method == "none":
            return CandidateScore(r.id, 1.0 - similarity, initial_rank, similarity=similarity)

        if len(q.caption) == 0 or len(r.caption) == 0:
            cost = 1.0 - cosine_similarity(q.question_embedding, r.report_embedding)
            self._log_note(f"{r.id}: empty caption, fallback cost {cost:.6f}")
            return CandidateScore(r.id, cost, initial_rank, fallback_used=True, similarity=similarity)

        C = build_cost_matrix(self.composite_similarity(q, r))
        if cfg.method == "mean-cosine":
            return CandidateScore(r.id, float(C.entries.mean()), initial_rank, similarity=similarity)

        plan = sinkhorn(
            C,
            uniform_marginal(C.n_q),
            uniform_marginal(C.n_r),
            gamma=cfg.gamma,
            max_iters=cfg.sinkhorn_max_iters,
            tol=cfg.sinkhorn_tol,
            log_domain=cfg.log_domain,
        )
        warning = None
        if not plan.converged:
            warning = (
                f"ConvergenceWarning: Sinkhorn hit max_iters={plan.iterations} "
                f"with marginal error {plan.marginal_error:.3e}"
            )
            self._log_warning(f"{r.id}: {warning}")
        return CandidateScore(
            r.id,
            plan.cost,
            initial_rank,
            similarity=similarity,
            plan_summary=plan.summary(),
            warning=warning,
        )

    def _score_or_fail(self, q: QueryContext, candidate: Candidate) -> CandidateScore:
        record, result = candidate
        try:
            return self.score_candidate(q, record, result)
        except MotorError as e:
            self._log_error(f"scoring {record.id} failed, ranking it last: {e}")
            return CandidateScore(
                record.id,
                math.inf,
                result.initial_rank,
                similarity=result.similarity,
                error=f"{type(e).__name__}: {e}",
                exception=e,
            )

    def rerank(self, q: QueryContext, candidates: Sequence[Candidate]) -> List[CandidateScore]:
        """
        Score every candidate and order by ascending cost, ties by initial rank.

        Args:
            q: Validated query
            candidates: (record, retrieval hit) pairs from first-stage retrieval

        Returns:
            Scores with final_rank 1..n; a permutation of the input ids

        Raises:
            DuplicateId: If a record id appears twice among the candidates
        """
        seen = set()
        for record, _ in candidates:
            if record.id in seen:
                raise DuplicateId(record.id)
            seen.add(record.id)
        if not candidates:
            return []

        if self.workers > 1 and len(candidates) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                scores = list(pool.map(lambda c: self._score_or_fail(q, c), candidates))
        else:
            scores = [self._score_or_fail(q, c) for c in candidates]

        if self.config.method == "none":
            ordered = sorted(scores, key=lambda s: s.initial_rank)
        else:
            ordered = sorted(scores, key=lambda s: (s.ot_cost, s.initial_rank))
        ranked = [replace(score, final_rank=rank) for rank, score in enumerate(ordered, start=1)]

        moved = sum(1 for s in ranked if s.final_rank != s.initial_rank)
        self._log_info(f"Re-ranked {len(ranked)} candidates ({self.config.method}); {moved} changed position")
        return ranked

    def select_context(self, scores: Sequence[CandidateScore], store: CorpusStore, s: int) -> List[str]:
        """
        Reports of the s best-ranked candidates, in final-rank order.

        Fewer than s scores simply yield fewer reports.

        Raises:
            InvalidConfig: If s < 1
            UnknownRecordId: If a score references an id absent from the store
        """
        return select_context(scores, store, s)


def score_candidate(q: QueryContext, r: CandidateRecord, cfg: RerankConfig) -> CandidateScore:
    """Score one candidate under ``cfg`` (see Reranker.score_candidate)."""
    return Reranker(cfg).score_candidate(q, r)


def rerank(
    q: QueryContext,
    candidates: Sequence[Candidate],
    cfg: RerankConfig,
    workers: int = 1,
) -> List[CandidateScore]:
    """Re-rank candidates under ``cfg`` (see Reranker.rerank)."""
    return Reranker(cfg, workers=workers).rerank(q, candidates)


def select_context(scores: Sequence[CandidateScore], store: CorpusStore, s: int) -> List[str]:
    if isinstance(s, bool) or not isinstance(s, int) or s < 1:
        raise InvalidConfig(f"s must be a positive integer, got {s!r}")
    best = sorted(scores, key=lambda score: score.final_rank)[:s]
    return [store.get(score.record_id).report_text for score in best]
