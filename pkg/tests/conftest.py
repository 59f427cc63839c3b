"""
Pytest configuration and fixtures for MOTOR tests.
"""
import os
import sys

import numpy as np
import pytest

# Add the project root to the Python path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)

from src.motor_rerank.core.models import RerankConfig
from src.motor_rerank.store.corpus import CorpusStore
from tests.factories import finding, query, record, vec

FIXTURES_DIR = os.path.join(project_root, "tests", "fixtures")


@pytest.fixture
def fixtures_dir():
    """Directory of the shipped fixture corpus."""
    return FIXTURES_DIR


@pytest.fixture
def rng():
    """Seeded generator for property loops."""
    return np.random.default_rng(20240917)


@pytest.fixture
def small_config():
    """Default weights with the 3-dim visual / 2-dim text fixture dimensions."""
    return RerankConfig(visual_dim=3, text_dim=2)


@pytest.fixture
def fixture_query():
    """The query of the shipped fixture corpus."""
    return query(
        image=(1.0, 0.0, 0.0),
        question=(1.0, 0.0),
        findings=[finding((1.0, 0.0), (1.0, 0.0, 0.0), "pleural effusion in the left lower lobe", (0.1, 0.5, 0.4, 0.9))],
        question_text="Is there a pleural effusion?",
        query_id="q1",
    )


@pytest.fixture
def fixture_store():
    """
    The shipped fixture corpus, built in memory.

    r1 matches the query's finding and report exactly; r2 is the closest image but
    shares nothing else; r3 has no findings and a report close to the question.
    """
    return CorpusStore(
        [
            record(
                "r1",
                image=(0.6, 0.8, 0.0),
                report=(1.0, 0.0),
                findings=[finding((1.0, 0.0), (1.0, 0.0, 0.0), "pleural effusion in the left lower lobe", (0.1, 0.5, 0.4, 0.9))],
                report_text="Small left pleural effusion.",
            ),
            record(
                "r2",
                image=(1.0, 0.0, 0.0),
                report=(0.0, 1.0),
                findings=[finding((0.0, 1.0), (0.0, 1.0, 0.0), "cardiomegaly", (0.2, 0.3, 0.8, 0.8))],
                report_text="Enlarged cardiac silhouette.",
            ),
            record(
                "r3",
                image=(0.0, 1.0, 0.0),
                report=(0.8, 0.6),
                findings=[],
                report_text="No acute cardiopulmonary process.",
            ),
        ],
        visual_dim=3,
        text_dim=2,
    )


@pytest.fixture
def vector():
    """Shortcut to build an EmbeddingVector."""
    return vec
