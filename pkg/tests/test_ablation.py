"""
Tests for the MOTOR ablation harness and table output.
"""
import csv
import io
import json

import pytest
from unittest.mock import patch

from src.motor_rerank.core.models import RerankConfig
from src.motor_rerank.errors import InvalidConfig
from src.motor_rerank.evalkit.ablation import (
    AblationHarness,
    ablation_sweep,
    format_table,
    metrics_table,
    parse_weights,
    write_table,
)
from src.motor_rerank.evalkit.models import SWEEP_COLUMNS, SyntheticCorpusSpec
from src.motor_rerank.evalkit.synthetic import generate_synthetic_corpus
from src.motor_rerank.rerank.reranker import rerank
from src.motor_rerank.retrieval.retriever import retrieve_top_k
from src.motor_rerank.store.similarity import cosine_similarity

SPEC = SyntheticCorpusSpec(n_records=24, n_queries=4, visual_dim=16, text_dim=8, seed=2, image_decoys_per_query=1)


@pytest.fixture(scope="module")
def corpus():
    return generate_synthetic_corpus(SPEC)


@pytest.fixture
def base_config():
    return RerankConfig(visual_dim=SPEC.visual_dim, text_dim=SPEC.text_dim, k=6, s=2)


class TestAblationHarness:
    """Test cases for AblationHarness."""

    def test_evaluate_keys(self, corpus, base_config):
        store, queries, planted = corpus
        metrics = AblationHarness(store, queries, planted, base_config).evaluate()
        assert set(metrics) == {"change_rate", "precision_at_s", "mrr", "baseline_precision_at_s", "baseline_mrr"}
        assert all(0.0 <= value <= 1.0 for value in metrics.values())

    def test_no_reranking_changes_nothing(self, corpus, base_config):
        store, queries, planted = corpus
        metrics = AblationHarness(store, queries, planted, base_config.with_changes(method="none")).evaluate()
        assert metrics["change_rate"] == 0.0
        assert metrics["precision_at_s"] == metrics["baseline_precision_at_s"]

    def test_singleton_sweep(self, corpus, base_config):
        store, queries, planted = corpus
        table = ablation_sweep(store, queries, planted, [(0.2, 0.3, 0.5)], [1.0], config=base_config)
        assert SWEEP_COLUMNS == ("method", "alpha", "beta", "delta", "gamma", "precision_at_s", "mrr", "change_rate")
        assert list(table.columns) == list(SWEEP_COLUMNS)
        assert len(table) == 1
        expected = AblationHarness(store, queries, planted, base_config).evaluate()
        row = table.iloc[0]
        assert row["precision_at_s"] == expected["precision_at_s"]
        assert row["change_rate"] == expected["change_rate"]

    def test_boundary_tuples(self, corpus, base_config):
        store, queries, planted = corpus
        tuples = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)]
        table = ablation_sweep(store, queries, planted, tuples, [0.5, 1.0], methods=("ot", "mean-cosine"), config=base_config)
        assert len(table) == 12
        assert list(table["method"]) == ["ot"] * 6 + ["mean-cosine"] * 6
        assert list(zip(table["alpha"], table["beta"], table["delta"]))[:2] == [(1.0, 0.0, 0.0)] * 2

    def test_relevance_only_ordering(self, corpus, base_config):
        store, queries, _ = corpus
        cfg = base_config.with_changes(alpha=1.0, beta=0.0, delta=0.0, sinkhorn_tol=1e-12, sinkhorn_max_iters=5000)
        for q in queries:
            hits = retrieve_top_k(store, q.image_embedding, cfg.k)
            scores = rerank(q, [(store.get(h.record_id), h) for h in hits], cfg)
            relevance = [cosine_similarity(q.question_embedding, store.get(s.record_id).report_embedding) for s in scores]
            assert relevance == sorted(relevance, reverse=True)

    def test_invalid_tuple_fails_before_work(self, corpus, base_config):
        store, queries, planted = corpus
        harness = AblationHarness(store, queries, planted, base_config)
        with patch.object(AblationHarness, "evaluate") as evaluate:
            with pytest.raises(InvalidConfig):
                harness.sweep([(0.2, 0.3, 0.5), (0.5, 0.5, 0.5)], [1.0])
        evaluate.assert_not_called()

    def test_invalid_gamma(self, corpus, base_config):
        store, queries, planted = corpus
        with pytest.raises(InvalidConfig):
            ablation_sweep(store, queries, planted, [(0.2, 0.3, 0.5)], [0.0], config=base_config)


class TestTables:
    """Test cases for table formatting and output."""

    @pytest.fixture
    def table(self, corpus, base_config):
        store, queries, planted = corpus
        return ablation_sweep(store, queries, planted, [(0.2, 0.3, 0.5), (1.0, 0.0, 0.0)], [0.3, 1.0], config=base_config)

    def test_csv_and_json_agree(self, table):
        rows = list(csv.DictReader(io.StringIO(format_table(table, "csv"))))
        records = json.loads(format_table(table, "json"))
        assert len(rows) == len(records) == 4
        for row, record in zip(rows, records):
            assert list(row) == list(SWEEP_COLUMNS)
            assert row["method"] == record["method"]
            for column in SWEEP_COLUMNS[1:]:
                assert float(row[column]) == record[column]

    def test_text_format(self, table):
        text = format_table(table, "text")
        assert text.splitlines()[0].split() == list(SWEEP_COLUMNS)

    def test_unknown_format(self, table):
        with pytest.raises(ValueError):
            format_table(table, "xml")

    def test_write_table_atomic(self, table, tmp_path):
        path = tmp_path / "out" / "sweep.csv"
        write_table(table, path)
        assert path.read_text(encoding="utf-8") == format_table(table, "csv")
        assert [p.name for p in path.parent.iterdir()] == ["sweep.csv"]

    def test_metrics_table(self, base_config):
        table = metrics_table({"change_rate": 0.5, "precision_at_s": 0.25, "mrr": 0.75}, base_config)
        assert list(table.columns) == ["method", "alpha", "beta", "delta", "gamma", "k", "s", "change_rate", "precision_at_s", "mrr"]
        assert format_table(table, "csv").splitlines()[1] == "ot,0.2,0.3,0.5,1.0,6,2,0.5,0.25,0.75"


class TestParseWeights:
    """Test cases for parse_weights."""

    def test_parse(self):
        assert parse_weights(["0.2,0.3,0.5", " 1, 0, 0 "]) == [(0.2, 0.3, 0.5), (1.0, 0.0, 0.0)]

    @pytest.mark.parametrize("text", ["0.5,0.5", "a,b,c"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_weights([text])
