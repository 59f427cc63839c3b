"""
MOTOR Evalkit Module

Offline evaluation: change rate, planted-relevance metrics, ablation sweeps and a
seeded synthetic corpus generator.
"""

from .ablation import AblationHarness, ablation_sweep, format_table, metrics_table, write_table
from .metrics import change_rate, planted_precision
from .models import PlantedMetrics, SweepRow, SyntheticCorpusSpec
from .synthetic import generate_synthetic_corpus

__all__ = [
    "AblationHarness",
    "PlantedMetrics",
    "SweepRow",
    "SyntheticCorpusSpec",
    "ablation_sweep",
    "change_rate",
    "format_table",
    "generate_synthetic_corpus",
    "metrics_table",
    "planted_precision",
    "write_table",
]
