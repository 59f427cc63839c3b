"""
MOTOR Evalkit Type Definitions

This module contains the synthetic corpus parameters and the metric row types
produced by evaluation and sweeps.
"""
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple, TypedDict

from ..errors import InvalidSpec


class PlantedMetrics(TypedDict):
    """Planted-relevance metrics averaged over queries."""
    precision_at_s: float
    mrr: float


class SweepRow(TypedDict):
    """One configuration of an ablation sweep."""
    method: str
    alpha: float
    beta: float
    delta: float
    gamma: float
    precision_at_s: float
    mrr: float
    change_rate: float


# column order of sweep tables
SWEEP_COLUMNS: Tuple[str, ...] = tuple(SweepRow.__annotations__)


@dataclass(frozen=True)
class SyntheticCorpusSpec:
    """
    Shape of a seeded synthetic corpus with planted relevant records.

    Each query gets ``n_planted_relevant`` records built by perturbing it and
    ``image_decoys_per_query`` records whose image is even closer to the query
    but whose findings and report are unrelated. The remaining records are
    independent random distractors.
    """

    n_records: int = 50
    visual_dim: int = 768
    text_dim: int = 512
    n_planted_relevant: int = 1
    findings_per_record: Tuple[int, int] = (1, 3)
    noise_scale: float = 0.1
    seed: int = 0
    n_queries: int = 20
    image_decoys_per_query: int = 0
    planted_image_noise: Optional[float] = None  # None uses noise_scale

    def __post_init__(self) -> None:
        for name in ("n_records", "n_queries", "visual_dim", "text_dim"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidSpec(f"{name} must be a positive integer, got {value!r}")
        if self.visual_dim < 2 or self.text_dim < 2:
            raise InvalidSpec(f"dims must be >= 2, got visual_dim={self.visual_dim}, text_dim={self.text_dim}")
        for name in ("n_planted_relevant", "image_decoys_per_query"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise InvalidSpec(f"{name} must be a nonnegative integer, got {value!r}")
        if self.n_planted_relevant > self.n_records:
            raise InvalidSpec(
                f"n_planted_relevant ({self.n_planted_relevant}) exceeds n_records ({self.n_records})"
            )
        needed = (self.n_planted_relevant + self.image_decoys_per_query) * self.n_queries
        if needed > self.n_records:
            raise InvalidSpec(
                f"{self.n_queries} queries need {needed} planted and decoy records, "
                f"but n_records is {self.n_records}"
            )
        low, high = self.findings_per_record
        if not (0 <= low <= high):
            raise InvalidSpec(f"findings_per_record must satisfy 0 <= min <= max, got {self.findings_per_record}")
        for name in ("noise_scale", "planted_image_noise"):
            value = getattr(self, name)
            if value is not None and (not math.isfinite(value) or value < 0):
                raise InvalidSpec(f"{name} must be a nonnegative real, got {value!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise InvalidSpec(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")

    @property
    def image_noise(self) -> float:
        return self.noise_scale if self.planted_image_noise is None else self.planted_image_noise

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload["findings_per_record"] = list(self.findings_per_record)
        return payload
