"""
MOTOR Ablation Harness

This module runs a corpus of queries through the pipeline under several
configurations and tabulates planted-relevance and change-rate metrics.
"""
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd
from tqdm import tqdm

from ..base import MotorComponent
from ..core.models import QueryContext, RerankConfig
from ..io_utils import atomic_write_text
from ..pipeline.models import GenerationRequest
from ..pipeline.pipeline import MotorPipeline
from ..store.corpus import CorpusStore
from .metrics import change_rate, planted_precision
from .models import SWEEP_COLUMNS, SweepRow

Weights = Tuple[float, float, float]
TABLE_FORMATS = ("csv", "json", "text")


class AblationHarness(MotorComponent):
    """
    Evaluates re-ranking configurations on a fixed corpus and query set.

    The store, queries and planted map are shared by every configuration; each
    configuration gets its own pipeline.
    """

    _log_tag = "Ablation"

    def __init__(
        self,
        store: CorpusStore,
        queries: Sequence[QueryContext],
        planted: Mapping[str, Sequence[str]],
        config: Optional[RerankConfig] = None,
        workers: int = 1,
        change_depth: Optional[int] = None,
        progress: bool = False,
    ):
        """
        Initialize the harness.

        Args:
            store: Corpus to retrieve from
            queries: Queries to evaluate
            planted: Query id to relevant record ids
            config: Base configuration; sweeps override weights, gamma and method
            workers: Thread count for candidate scoring
            change_depth: Prefix depth for change_rate (None = full top-k list)
            progress: Show a tqdm progress bar over configurations
        """
        self.store = store
        self.queries = list(queries)
        self.planted = planted
        self.config = config or RerankConfig()
        self.workers = workers
        self.change_depth = change_depth
        self.progress = progress

    def run(self, config: RerankConfig) -> List[GenerationRequest]:
        pipeline = MotorPipeline(self.store, config, workers=self.workers)
        return [pipeline.run_query(q) for q in self.queries]

    def evaluate(self, config: Optional[RerankConfig] = None) -> Dict[str, float]:
        """
        Metrics for one configuration.

        Returns:
            change_rate, precision_at_s and mrr on the final ordering, plus
            baseline_precision_at_s and baseline_mrr on the retrieval ordering
        """
        cfg = config or self.config
        requests = self.run(cfg)
        final = planted_precision(self.queries, requests, self.planted, cfg.s, ordering="final")
        initial = planted_precision(self.queries, requests, self.planted, cfg.s, ordering="initial")
        rate = change_rate(
            [r.trace.initial_ranking for r in requests],
            [r.trace.final_ranking for r in requests],
            depth=self.change_depth,
        )
        self._log_info(
            f"{cfg.method} ({cfg.alpha}, {cfg.beta}, {cfg.delta}) gamma={cfg.gamma}: "
            f"P@{cfg.s}={final['precision_at_s']:.4f} MRR={final['mrr']:.4f} change={rate:.4f}"
        )
        return {
            "change_rate": rate,
            "precision_at_s": final["precision_at_s"],
            "mrr": final["mrr"],
            "baseline_precision_at_s": initial["precision_at_s"],
            "baseline_mrr": initial["mrr"],
        }

    def sweep(
        self,
        weight_tuples: Sequence[Weights],
        gamma_values: Sequence[float],
        methods: Sequence[str] = ("ot",),
    ) -> pd.DataFrame:
        """
        One row per (method, weights, gamma).

        Raises:
            InvalidConfig: If a weight tuple does not sum to 1 or gamma <= 0
        """
        # Build every config first so an invalid tuple fails before any work.
        configs = [
            self.config.with_changes(alpha=a, beta=b, delta=d, gamma=g, method=m)
            for m in methods
            for (a, b, d) in weight_tuples
            for g in gamma_values
        ]
        rows: List[SweepRow] = []
        for cfg in tqdm(configs, desc="sweep", unit="config", disable=not self.progress):
            metrics = self.evaluate(cfg)
            rows.append({
                "method": cfg.method,
                "alpha": cfg.alpha,
                "beta": cfg.beta,
                "delta": cfg.delta,
                "gamma": cfg.gamma,
                "precision_at_s": metrics["precision_at_s"],
                "mrr": metrics["mrr"],
                "change_rate": metrics["change_rate"],
            })
        return pd.DataFrame(rows, columns=list(SWEEP_COLUMNS))


def ablation_sweep(
    corpus: CorpusStore,
    queries: Sequence[QueryContext],
    planted: Mapping[str, Sequence[str]],
    weight_tuples: Sequence[Weights],
    gamma_values: Sequence[float],
    methods: Sequence[str] = ("ot",),
    config: Optional[RerankConfig] = None,
) -> pd.DataFrame:
    """Sweep weights and gamma over a corpus (see AblationHarness.sweep)."""
    return AblationHarness(corpus, queries, planted, config).sweep(weight_tuples, gamma_values, methods)


def _records(table: pd.DataFrame) -> List[Dict[str, Any]]:
    return [
        {key: (value.item() if hasattr(value, "item") else value) for key, value in row.items()}
        for row in table.to_dict(orient="records")
    ]


def format_table(table: pd.DataFrame, fmt: str = "csv") -> str:
    """
    Render a metrics table as CSV (header row first), JSON records or text.

    CSV and JSON print floats with ``repr`` so both carry identical values.
    """
    if fmt == "csv":
        return table.to_csv(index=False, lineterminator="\n")
    if fmt == "json":
        return json.dumps(_records(table), indent=2) + "\n"
    if fmt == "text":
        return table.to_string(index=False) + "\n"
    raise ValueError(f"format must be one of {', '.join(TABLE_FORMATS)}, got {fmt!r}")


def write_table(table: pd.DataFrame, path: Union[str, Path], fmt: str = "csv") -> None:
    """Write a metrics table atomically."""
    atomic_write_text(path, format_table(table, fmt))


def metrics_table(metrics: Mapping[str, float], config: RerankConfig) -> pd.DataFrame:
    """A one-row table: configuration columns, then metric columns."""
    row: Dict[str, Any] = {
        "method": config.method,
        "alpha": config.alpha,
        "beta": config.beta,
        "delta": config.delta,
        "gamma": config.gamma,
        "k": config.k,
        "s": config.s,
    }
    row.update(metrics)
    return pd.DataFrame([row])


def parse_weights(values: Iterable[str]) -> List[Weights]:
    """Parse ``"a,b,d"`` strings into weight tuples."""
    tuples: List[Weights] = []
    for text in values:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"weights must be 'alpha,beta,delta', got {text!r}")
        a, b, d = (float(p) for p in parts)
        tuples.append((a, b, d))
    return tuples
