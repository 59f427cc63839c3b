"""
MOTOR Pipeline

This module runs a query end to end: validate, retrieve top-k, re-rank, select
the top-s reports and bundle them into a GenerationRequest. Optionally the
request is rendered into a prompt and sent to the generation service.
"""
import time
from contextlib import contextmanager
from dataclasses import replace
from typing import Iterator, List, Optional

from ..base import MotorComponent
from ..core.models import QueryContext, RerankConfig
from ..core.validation import validate_query
from ..errors import MotorError, PipelineStageError
from ..rerank.models import CandidateScore
from ..rerank.reranker import Reranker
from ..retrieval.models import RetrievalResult
from ..retrieval.retriever import retrieve_top_k
from ..store.corpus import CorpusStore
from .generation import GenerationClient
from .models import GenerationEndpoint, GenerationRequest, RequestTrace
from .prompt import DEFAULT_TEMPLATE, assemble_prompt, render_caption


class MotorPipeline(MotorComponent):
    """
    Retrieval, re-ranking and context assembly over one shared store.

    The store and config are read-only here, so one pipeline may serve concurrent
    queries.
    """

    _log_tag = "Pipeline"

    def __init__(
        self,
        store: CorpusStore,
        config: Optional[RerankConfig] = None,
        workers: int = 1,
        template: str = DEFAULT_TEMPLATE,
        endpoint: Optional[GenerationEndpoint] = None,
    ):
        """
        Initialize the pipeline.

        Args:
            store: Corpus to retrieve from
            config: Re-ranking configuration (defaults to RerankConfig())
            workers: Thread count for candidate scoring
            template: Prompt template used by ``answer``
            endpoint: Generation service; required only by ``answer``
        """
        self.store = store
        self.config = config or RerankConfig()
        self.reranker = Reranker(self.config, workers=workers)
        self.template = template
        self.generation_client = GenerationClient(endpoint) if endpoint else None

    @contextmanager
    def _stage(self, name: str, trace: RequestTrace) -> Iterator[None]:
        started = time.perf_counter()
        try:
            yield
        except MotorError as e:
            trace.failed_stage = name
            self._log_error(f"stage {name!r} failed for query {trace.query_id!r}: {e}")
            raise PipelineStageError(name, e, trace) from e
        finally:
            trace.timing[name] = time.perf_counter() - started

    def retrieve(self, q: QueryContext) -> List[RetrievalResult]:
        return retrieve_top_k(self.store, q.image_embedding, self.config.k)

    def run_query(self, q: QueryContext) -> GenerationRequest:
        """
        Run retrieval and re-ranking for one query.

        Args:
            q: The query

        Returns:
            GenerationRequest holding up to s reports in final-rank order; an empty
            store gives a request with no context

        Raises:
            PipelineStageError: Naming the failed stage, with the partial trace
        """
        trace = RequestTrace(query_id=q.query_id, config=self.config.to_dict())

        with self._stage("validate", trace):
            validate_query(q, self.config)
        with self._stage("retrieve", trace):
            hits = self.retrieve(q)
            trace.initial_ranking = [hit.record_id for hit in hits]
        with self._stage("rerank", trace):
            scores: List[CandidateScore] = self.reranker.rerank(
                q, [(self.store.get(hit.record_id), hit) for hit in hits]
            )
            trace.final_ranking = [score.record_id for score in scores]
            trace.candidates = [score.to_dict() for score in scores]
            # nothing could be scored, so there is no ordering to report
            if scores and all(score.failed for score in scores):
                raise scores[0].exception
        with self._stage("select", trace):
            contexts = self.reranker.select_context(scores, self.store, self.config.s)

        if not hits:
            self._log_warning(f"query {q.query_id!r}: no candidates retrieved; standalone generation")
        self._log_info(f"query {q.query_id!r}: {len(hits)} retrieved, {len(contexts)} context report(s)")
        return GenerationRequest(
            question_text=q.question_text,
            grounded_caption_rendering=render_caption(q.caption),
            context_reports=contexts,
            query_image_ref=q.image_ref or q.query_id,
            trace=trace,
        )

    async def answer(self, q: QueryContext) -> GenerationRequest:
        """
        Run the query and send the assembled prompt to the generation service.

        Returns:
            The request with ``answer`` filled and the exchange recorded in its trace

        Raises:
            PipelineStageError: Naming the failed stage ("assemble" or "generate")
            ValueError: If the pipeline has no endpoint
        """
        if self.generation_client is None:
            raise ValueError("answer() requires a generation endpoint")
        request = self.run_query(q)
        trace = request.trace
        with self._stage("assemble", trace):
            prompt = assemble_prompt(request, self.template)
        started = time.perf_counter()
        try:
            exchange = await self.generation_client.exchange(prompt, request.query_image_ref)
        except MotorError as e:
            trace.failed_stage = "generate"
            self._log_error(f"stage 'generate' failed for query {q.query_id!r}: {e}")
            raise PipelineStageError("generate", e, trace) from e
        finally:
            trace.timing["generate"] = time.perf_counter() - started
        trace.generation = dict(exchange)
        return replace(request, answer=exchange["answer"])


def run_query(q: QueryContext, store: CorpusStore, cfg: RerankConfig, workers: int = 1) -> GenerationRequest:
    """Run one query through retrieval and re-ranking (see MotorPipeline.run_query)."""
    return MotorPipeline(store, cfg, workers=workers).run_query(q)
