"""
Tests for MOTOR Pipeline

This module tests the end-to-end query flow: stage composition, empty-store
handling, stage failures and the optional generation step.
"""
import asyncio
import json
from dataclasses import replace

import pytest
from unittest.mock import AsyncMock, Mock, patch

import requests

from src.motor_rerank.core.models import RerankConfig
from src.motor_rerank.errors import DimensionMismatch, NumericalUnderflow, PipelineStageError, ServiceUnavailable
from src.motor_rerank.pipeline.pipeline import MotorPipeline, run_query
from src.motor_rerank.rerank.reranker import Reranker, rerank, select_context
from src.motor_rerank.retrieval.retriever import retrieve_top_k
from src.motor_rerank.store.corpus import CorpusStore
from tests.factories import query, random_query, random_record

VISUAL_DIM = 5
TEXT_DIM = 4


def _random_store(rng, n=12):
    return CorpusStore(
        [random_record(rng, f"r{i:02d}", VISUAL_DIM, TEXT_DIM, int(rng.integers(0, 4))) for i in range(n)],
        visual_dim=VISUAL_DIM,
        text_dim=TEXT_DIM,
    )


class TestRunQuery:
    """Test cases for run_query."""

    def test_empty_store(self, fixture_query, small_config):
        request = run_query(fixture_query, CorpusStore([], visual_dim=3, text_dim=2), small_config)
        assert request.context_reports == []
        assert request.trace.initial_ranking == []
        assert request.trace.final_ranking == []
        assert request.trace.failed_stage is None

    def test_fixture_corpus(self, fixture_query, fixture_store, small_config):
        request = run_query(fixture_query, fixture_store, small_config)
        assert request.trace.initial_ranking == ["r2", "r1", "r3"]
        assert request.trace.final_ranking == ["r1", "r3", "r2"]
        assert request.context_reports[0] == "Small left pleural effusion."
        assert request.question_text == "Is there a pleural effusion?"
        assert request.grounded_caption_rendering == "pleural effusion in the left lower lobe [0.100,0.500,0.400,0.900]"
        assert request.query_image_ref == "q1"
        assert set(request.trace.timing) == {"validate", "retrieve", "rerank", "select"}

    def test_stage_composition(self, rng):
        store = _random_store(rng)
        cfg = RerankConfig(visual_dim=VISUAL_DIM, text_dim=TEXT_DIM, k=6, s=3)
        for _ in range(10):
            q = random_query(rng, VISUAL_DIM, TEXT_DIM, 2)
            hits = retrieve_top_k(store, q.image_embedding, cfg.k)
            scores = rerank(q, [(store.get(h.record_id), h) for h in hits], cfg)
            expected = select_context(scores, store, cfg.s)
            assert run_query(q, store, cfg).context_reports == expected

    def test_contexts_come_from_top_k(self, rng):
        store = _random_store(rng)
        cfg = RerankConfig(visual_dim=VISUAL_DIM, text_dim=TEXT_DIM, k=4, s=4)
        for _ in range(10):
            q = random_query(rng, VISUAL_DIM, TEXT_DIM, 1)
            request = run_query(q, store, cfg)
            top_k = {store.get(i).report_text for i in request.trace.initial_ranking}
            assert set(request.context_reports) <= top_k
            assert len(request.context_reports) == 4

    def test_contexts_have_lowest_costs(self, rng):
        store = _random_store(rng)
        cfg = RerankConfig(visual_dim=VISUAL_DIM, text_dim=TEXT_DIM, k=8, s=3)
        q = random_query(rng, VISUAL_DIM, TEXT_DIM, 2)
        candidates = run_query(q, store, cfg).trace.candidates
        chosen = [c["ot_cost"] for c in candidates[:3]]
        rest = [c["ot_cost"] for c in candidates[3:]]
        assert max(chosen) <= min(rest)

    def test_json_byte_identical(self, rng):
        store = _random_store(rng)
        cfg = RerankConfig(visual_dim=VISUAL_DIM, text_dim=TEXT_DIM)
        q = random_query(rng, VISUAL_DIM, TEXT_DIM, 3)
        first = run_query(q, store, cfg).to_json()
        assert run_query(q, store, cfg).to_json() == first
        assert run_query(q, store, cfg, workers=4).to_json() == first
        payload = json.loads(first)
        assert "timing" not in payload["trace"]
        assert "generation" not in payload["trace"]

    def test_validate_stage_failure(self, fixture_store, small_config):
        bad = query((1.0, 0.0), (1.0, 0.0), query_id="bad")
        with pytest.raises(PipelineStageError) as excinfo:
            run_query(bad, fixture_store, small_config)
        assert excinfo.value.stage == "validate"
        assert isinstance(excinfo.value.cause, DimensionMismatch)
        assert excinfo.value.trace.failed_stage == "validate"
        assert excinfo.value.exit_code == 1

    def test_all_candidates_failing_fails_rerank_stage(self, fixture_query, fixture_store, small_config):
        with patch.object(Reranker, "score_candidate", side_effect=NumericalUnderflow("collapsed")):
            with pytest.raises(PipelineStageError) as excinfo:
                run_query(fixture_query, fixture_store, small_config)
        assert excinfo.value.stage == "rerank"
        assert excinfo.value.exit_code == 2
        assert excinfo.value.trace.initial_ranking == ["r2", "r1", "r3"]

    def test_image_ref_passthrough(self, fixture_store, small_config, fixture_query):
        q = replace(fixture_query, image_ref="images/q1.png")
        assert run_query(q, fixture_store, small_config).query_image_ref == "images/q1.png"


class TestAnswer:
    """Test cases for MotorPipeline.answer."""

    @pytest.fixture
    def pipeline(self, fixture_store, small_config):
        return MotorPipeline(fixture_store, small_config.with_changes(s=1), endpoint={"url": "http://gen"})

    async def test_answer(self, pipeline, fixture_query, fixtures_dir):
        response = Mock(status_code=200, reason="OK", content=b"{}")
        response.json.return_value = {"answer": "Yes, small left effusion."}
        with patch.object(pipeline.generation_client.session, "post", return_value=response) as post:
            request = await pipeline.answer(fixture_query)
        assert request.answer == "Yes, small left effusion."
        sent = post.call_args.kwargs["json"]
        with open(f"{fixtures_dir}/prompt_golden.txt", encoding="utf-8") as f:
            assert sent["prompt"] == f.read()
        assert sent["image_ref"] == "q1"
        assert request.trace.generation == {
            "url": "http://gen",
            "prompt": sent["prompt"],
            "image_ref": "q1",
            "attempts": 1,
            "status_code": 200,
            "answer": "Yes, small left effusion.",
        }
        assert json.loads(request.to_json())["answer"] == "Yes, small left effusion."

    async def test_concurrent_answers_keep_own_exchange(self, pipeline, fixture_query, mocker):
        def echo(url, json=None, timeout=None):
            response = Mock(status_code=200, reason="OK", content=b"{}")
            response.json.return_value = {"answer": json["image_ref"]}
            return response

        mocker.patch.object(pipeline.generation_client.session, "post", side_effect=echo)
        queries = [replace(fixture_query, image_ref=ref) for ref in ("a.png", "b.png")]
        requests_out = await asyncio.gather(*(pipeline.answer(q) for q in queries))
        for request, ref in zip(requests_out, ("a.png", "b.png")):
            assert request.answer == ref
            assert request.trace.generation["image_ref"] == ref
            assert request.trace.generation["answer"] == ref

    async def test_generate_stage_failure(self, pipeline, fixture_query):
        with patch.object(pipeline.generation_client.session, "post", side_effect=requests.ConnectionError("down")), \
                patch("src.motor_rerank.pipeline.generation.asyncio.sleep", new_callable=AsyncMock):
            with pytest.raises(PipelineStageError) as excinfo:
                await pipeline.answer(fixture_query)
        assert excinfo.value.stage == "generate"
        assert isinstance(excinfo.value.cause, ServiceUnavailable)
        assert excinfo.value.exit_code == 3
        assert excinfo.value.trace.final_ranking == ["r1", "r3", "r2"]

    async def test_answer_without_endpoint(self, fixture_store, fixture_query, small_config):
        with pytest.raises(ValueError):
            await MotorPipeline(fixture_store, small_config).answer(fixture_query)
