"""
Tests for MOTOR Core Types

This module tests the invariants of the domain types, the re-ranking
configuration and query/record validation.
"""
import numpy as np
import pytest

from src.motor_rerank.core.models import (
    BoundingBox,
    EmbeddingVector,
    GroundedFinding,
    QueryContext,
    RerankConfig,
)
from src.motor_rerank.core.validation import validate_query, validate_record
from src.motor_rerank.errors import (
    DimensionMismatch,
    EmptyDescription,
    EmptyQuestion,
    EmptyReport,
    InputError,
    InvalidConfig,
    MalformedBox,
    NonFiniteInput,
)
from tests.factories import finding, query, record, vec


class TestEmbeddingVector:
    """Test cases for EmbeddingVector."""

    def test_values_are_read_only_float64(self):
        v = vec([1, 2, 3])
        assert v.values.dtype == np.float64
        assert v.dim == 3
        with pytest.raises(ValueError):
            v.values[0] = 5.0

    def test_copies_input(self):
        source = np.array([1.0, 2.0])
        v = EmbeddingVector(source)
        source[0] = 9.0
        assert v.as_list() == [1.0, 2.0]

    @pytest.mark.parametrize("values", [[np.nan, 1.0], [np.inf, 0.0]])
    def test_rejects_non_finite(self, values):
        with pytest.raises(NonFiniteInput):
            vec(values)

    def test_rejects_empty_and_matrices(self):
        with pytest.raises(InputError):
            vec([])
        with pytest.raises(InputError):
            vec([[1.0, 2.0]])

    def test_equality_by_value(self):
        assert vec([1.0, 0.0]) == vec([1.0, 0.0])
        assert vec([1.0, 0.0]) != vec([0.0, 1.0])


class TestBoundingBox:
    """Test cases for BoundingBox."""

    def test_valid_box(self):
        box = BoundingBox.from_list([0.0, 0.1, 1.0, 0.9])
        assert box.as_list() == [0.0, 0.1, 1.0, 0.9]

    @pytest.mark.parametrize("coords", [
        [0.5, 0.1, 0.5, 0.9],   # zero width
        [0.6, 0.1, 0.5, 0.9],   # inverted
        [0.0, 0.1, 1.2, 0.9],   # outside the image
        [-0.1, 0.1, 0.5, 0.9],
        [0.1, 0.9, 0.5, 0.2],
    ])
    def test_malformed(self, coords):
        with pytest.raises(MalformedBox):
            BoundingBox.from_list(coords)

    def test_wrong_arity(self):
        with pytest.raises(MalformedBox):
            BoundingBox.from_list([0.1, 0.2, 0.3])


class TestTextInvariants:
    """Empty texts are rejected on construction."""

    def test_empty_description(self):
        with pytest.raises(EmptyDescription):
            GroundedFinding("  ", BoundingBox(0.1, 0.1, 0.2, 0.2), vec([1.0]), vec([1.0]))

    def test_empty_question(self):
        with pytest.raises(EmptyQuestion):
            query((1.0, 0.0), (1.0,), question_text="")

    def test_empty_report(self):
        with pytest.raises(EmptyReport):
            record("r1", (1.0, 0.0), (1.0,), report_text=" ")

    def test_query_defaults(self):
        q = QueryContext(vec([1.0]), query((1.0,), (1.0,)).caption, "Why?", vec([1.0]))
        assert q.query_id == ""
        assert q.image_ref == ""


class TestRerankConfig:
    """Test cases for RerankConfig."""

    def test_defaults(self):
        cfg = RerankConfig()
        assert cfg.weights == (0.2, 0.3, 0.5)
        assert (cfg.gamma, cfg.k, cfg.s) == (1.0, 10, 5)
        assert (cfg.sinkhorn_max_iters, cfg.sinkhorn_tol) == (1000, 1e-6)
        assert (cfg.visual_dim, cfg.text_dim) == (768, 512)
        assert cfg.method == "ot"

    def test_weight_sum_violation(self):
        with pytest.raises(InvalidConfig, match="weights must sum to 1"):
            RerankConfig(alpha=0.5, beta=0.5, delta=0.1)

    def test_s_exceeds_k(self):
        with pytest.raises(InvalidConfig, match="s must not exceed k"):
            RerankConfig(k=10, s=12)

    @pytest.mark.parametrize("changes", [
        {"gamma": 0.0},
        {"gamma": -1.0},
        {"k": 0, "s": 0},
        {"alpha": -0.2, "beta": 0.7, "delta": 0.5},
        {"sinkhorn_tol": 0.0},
        {"method": "bm25"},
    ])
    def test_invalid_values(self, changes):
        with pytest.raises(InvalidConfig):
            RerankConfig(**changes)

    def test_log_domain_selection(self):
        assert not RerankConfig(gamma=1.0).use_log_domain
        assert RerankConfig(gamma=0.01).use_log_domain
        assert not RerankConfig(gamma=0.01, log_domain=False).use_log_domain
        assert RerankConfig(gamma=1.0, log_domain=True).use_log_domain

    def test_presets(self):
        assert RerankConfig.preset("text-prioritized").weights == (0.2, 0.5, 0.3)
        assert RerankConfig.preset("visual-prioritized").weights == (0.2, 0.3, 0.5)
        assert RerankConfig.preset("report-only", gamma=0.5).gamma == 0.5
        with pytest.raises(InvalidConfig):
            RerankConfig.preset("nope")

    def test_with_changes_revalidates(self):
        with pytest.raises(InvalidConfig):
            RerankConfig().with_changes(alpha=0.9)


class TestValidation:
    """Test cases for validate_query and validate_record."""

    def test_valid_query_is_returned_unchanged(self, fixture_query, small_config):
        assert validate_query(fixture_query, small_config) is fixture_query

    def test_query_image_dim(self, small_config):
        q = query((1.0, 0.0), (1.0, 0.0))
        with pytest.raises(DimensionMismatch) as excinfo:
            validate_query(q, small_config)
        assert (excinfo.value.expected, excinfo.value.actual) == (3, 2)

    def test_query_finding_dims(self, small_config):
        q = query((1.0, 0.0, 0.0), (1.0, 0.0), [finding((1.0, 0.0, 0.0), (1.0, 0.0, 0.0))])
        with pytest.raises(DimensionMismatch, match="finding 0 text"):
            validate_query(q, small_config)

    def test_record_dims(self, small_config):
        r = record("r9", (1.0, 0.0, 0.0), (1.0, 0.0, 0.0))
        with pytest.raises(DimensionMismatch, match="record r9 report"):
            validate_record(r, small_config)
