"""
Tests for the MOTOR synthetic corpus generator.
"""
import numpy as np
import pytest

from src.motor_rerank.core.models import RerankConfig
from src.motor_rerank.errors import InvalidSpec
from src.motor_rerank.evalkit.ablation import AblationHarness
from src.motor_rerank.evalkit.models import SyntheticCorpusSpec
from src.motor_rerank.evalkit.synthetic import generate_synthetic_corpus
from src.motor_rerank.pipeline.pipeline import run_query
from src.motor_rerank.store.ingest import (
    load_corpus,
    load_planted,
    load_query_dir,
    save_corpus,
    save_planted,
    save_queries,
)


def _config(spec, **changes):
    return RerankConfig(visual_dim=spec.visual_dim, text_dim=spec.text_dim, **changes)


class TestSyntheticCorpusSpec:
    """Test cases for SyntheticCorpusSpec validation."""

    @pytest.mark.parametrize("changes", [
        {"n_records": 0},
        {"n_queries": 0},
        {"visual_dim": 1},
        {"n_planted_relevant": -1},
        {"n_records": 10, "n_queries": 6, "n_planted_relevant": 2},
        {"n_records": 9, "n_queries": 5, "image_decoys_per_query": 1},
        {"findings_per_record": (3, 1)},
        {"findings_per_record": (-1, 1)},
        {"noise_scale": -0.1},
        {"noise_scale": float("nan")},
        {"planted_image_noise": -1.0},
        {"seed": -1},
        {"seed": 2 ** 64},
    ])
    def test_invalid(self, changes):
        with pytest.raises(InvalidSpec):
            SyntheticCorpusSpec(**changes)

    def test_image_noise_defaults_to_noise_scale(self):
        assert SyntheticCorpusSpec(noise_scale=0.2).image_noise == 0.2
        assert SyntheticCorpusSpec(noise_scale=0.2, planted_image_noise=0.05).image_noise == 0.05


class TestGenerateSyntheticCorpus:
    """Test cases for generate_synthetic_corpus."""

    @pytest.fixture
    def small_spec(self):
        return SyntheticCorpusSpec(n_records=30, n_queries=5, visual_dim=16, text_dim=8, seed=7)

    def test_deterministic(self, small_spec):
        store_a, queries_a, planted_a = generate_synthetic_corpus(small_spec)
        store_b, queries_b, planted_b = generate_synthetic_corpus(small_spec)
        assert store_a.records == store_b.records
        assert queries_a == queries_b
        assert planted_a == planted_b

    def test_seed_changes_output(self, small_spec):
        from dataclasses import replace
        store_a, _, _ = generate_synthetic_corpus(small_spec)
        store_b, _, _ = generate_synthetic_corpus(replace(small_spec, seed=8))
        assert store_a.records != store_b.records

    def test_shape(self, small_spec):
        store, queries, planted = generate_synthetic_corpus(small_spec)
        assert len(store) == 30
        assert [q.query_id for q in queries] == [f"q{i:03d}" for i in range(5)]
        assert all(len(ids) == 1 and ids[0] in store for ids in planted.values())
        assert store.ids == tuple(f"r{i:04d}" for i in range(30))

    def test_unit_norm_float32_embeddings(self, small_spec):
        store, queries, _ = generate_synthetic_corpus(small_spec)
        vectors = []
        for r in store:
            vectors += [r.image_embedding, r.report_embedding]
            vectors += [f.text_embedding for f in r.caption] + [f.box_embedding for f in r.caption]
        for q in queries:
            vectors += [q.image_embedding, q.question_embedding]
        for v in vectors:
            assert np.linalg.norm(v.values) == pytest.approx(1.0, abs=1e-6)
            assert np.array_equal(v.values.astype(np.float32).astype(np.float64), v.values)

    def test_findings_per_record_bounds(self):
        spec = SyntheticCorpusSpec(n_records=20, n_queries=2, visual_dim=8, text_dim=4, findings_per_record=(0, 2))
        store, queries, _ = generate_synthetic_corpus(spec)
        assert all(0 <= len(r.caption) <= 2 for r in store)
        assert all(0 <= len(q.caption) <= 2 for q in queries)

    def test_noise_free_planted_record_costs_zero(self):
        spec = SyntheticCorpusSpec(
            n_records=20, n_queries=4, visual_dim=32, text_dim=16,
            findings_per_record=(1, 1), noise_scale=0.0, seed=3,
        )
        store, queries, planted = generate_synthetic_corpus(spec)
        for q in queries:
            request = run_query(q, store, _config(spec))
            best = request.trace.candidates[0]
            assert best["record_id"] == planted[q.query_id][0]
            assert best["ot_cost"] == pytest.approx(0.0, abs=1e-9)

    def test_planted_record_ranked_first(self):
        spec = SyntheticCorpusSpec(n_records=50, n_queries=20, noise_scale=0.1, seed=11)
        store, queries, planted = generate_synthetic_corpus(spec)
        cfg = _config(spec)
        first = sum(
            1 for q in queries
            if run_query(q, store, cfg).trace.final_ranking[0] in planted[q.query_id]
        )
        assert first >= 18

    def test_reranking_beats_retrieval_against_decoys(self):
        spec = SyntheticCorpusSpec(
            n_records=50, n_queries=10, visual_dim=64, text_dim=32,
            image_decoys_per_query=2, noise_scale=0.1, seed=5,
        )
        store, queries, planted = generate_synthetic_corpus(spec)
        metrics = AblationHarness(store, queries, planted, _config(spec, s=1)).evaluate()
        assert metrics["precision_at_s"] > metrics["baseline_precision_at_s"]

    def test_save_and_load_bit_exact(self, small_spec, tmp_path):
        store, queries, planted = generate_synthetic_corpus(small_spec)
        save_corpus(store, tmp_path / "index")
        save_queries(queries, tmp_path / "queries")
        save_planted(planted, tmp_path / "planted.json")

        loaded = load_corpus(tmp_path / "index")
        assert loaded.records == store.records
        reloaded_queries = load_query_dir(tmp_path / "queries")
        assert [q.image_embedding for q in reloaded_queries] == [q.image_embedding for q in queries]
        assert [q.caption for q in reloaded_queries] == [q.caption for q in queries]
        assert load_planted(tmp_path / "planted.json") == planted
