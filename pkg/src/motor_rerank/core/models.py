"""
MOTOR Core Type Definitions

This module contains the domain types shared by every MOTOR module: embeddings,
grounded captions, queries, candidate records and the re-ranking configuration.
All types are immutable after construction and check their own invariants.
"""
import math
from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from ..errors import (
    EmptyDescription,
    EmptyQuestion,
    EmptyReport,
    InputError,
    InvalidConfig,
    MalformedBox,
    NonFiniteInput,
)

DEFAULT_VISUAL_DIM = 768
DEFAULT_TEXT_DIM = 512
WEIGHT_SUM_TOLERANCE = 1e-9
# Below this gamma the plain-domain kernel exp(-C / gamma) is unreliable.
LOG_DOMAIN_GAMMA_THRESHOLD = 0.05

SCORING_METHODS = ("ot", "mean-cosine", "none")

# (alpha, beta, delta)
PRESETS: Dict[str, Tuple[float, float, float]] = {
    "default": (0.2, 0.3, 0.5),
    "visual-prioritized": (0.2, 0.3, 0.5),
    "text-prioritized": (0.2, 0.5, 0.3),
    "report-only": (1.0, 0.0, 0.0),
    "text-only": (0.0, 1.0, 0.0),
    "visual-only": (0.0, 0.0, 1.0),
}


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    """A finite, non-empty embedding held as a read-only float64 array."""

    values: np.ndarray

    def __post_init__(self) -> None:
        array = np.array(self.values, dtype=np.float64, copy=True)
        if array.ndim != 1 or array.size == 0:
            raise InputError(f"embedding must be a non-empty 1-D sequence, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise NonFiniteInput("embedding contains NaN or infinite values")
        array.flags.writeable = False
        object.__setattr__(self, "values", array)

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    def as_list(self) -> list:
        return self.values.tolist()

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingVector):
            return NotImplemented
        return bool(np.array_equal(self.values, other.values))

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class BoundingBox:
    """Finding location in normalized image coordinates."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        coords = (self.x_min, self.y_min, self.x_max, self.y_max)
        if not all(isinstance(c, (int, float)) and math.isfinite(c) for c in coords):
            raise MalformedBox(f"box coordinates must be finite numbers, got {list(coords)}")
        if not (0.0 <= self.x_min < self.x_max <= 1.0):
            raise MalformedBox(f"box x-range [{self.x_min}, {self.x_max}] outside 0 <= x_min < x_max <= 1")
        if not (0.0 <= self.y_min < self.y_max <= 1.0):
            raise MalformedBox(f"box y-range [{self.y_min}, {self.y_max}] outside 0 <= y_min < y_max <= 1")

    @classmethod
    def from_list(cls, coords: Sequence[float]) -> "BoundingBox":
        if len(coords) != 4:
            raise MalformedBox(f"box must have 4 coordinates, got {len(coords)}")
        return cls(*(float(c) for c in coords))

    def as_list(self) -> list:
        return [self.x_min, self.y_min, self.x_max, self.y_max]


@dataclass(frozen=True)
class GroundedFinding:
    """One abnormality description with its box and precomputed features."""

    description: str
    box: BoundingBox
    text_embedding: EmbeddingVector
    box_embedding: EmbeddingVector

    def __post_init__(self) -> None:
        if not isinstance(self.description, str) or not self.description.strip():
            raise EmptyDescription("finding description must be non-empty")


@dataclass(frozen=True)
class GroundedCaption:
    """An ordered, possibly empty, set of grounded findings."""

    findings: Tuple[GroundedFinding, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "findings", tuple(self.findings))

    def __len__(self) -> int:
        return len(self.findings)

    def __iter__(self) -> Iterator[GroundedFinding]:
        return iter(self.findings)

    def text_embeddings(self) -> list:
        return [f.text_embedding for f in self.findings]

    def box_embeddings(self) -> list:
        return [f.box_embedding for f in self.findings]


@dataclass(frozen=True)
class QueryContext:
    """The query: image embedding, grounded caption and question."""

    image_embedding: EmbeddingVector
    caption: GroundedCaption
    question_text: str
    question_embedding: EmbeddingVector
    query_id: str = ""
    image_ref: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.question_text, str) or not self.question_text.strip():
            raise EmptyQuestion("question_text must be non-empty")


@dataclass(frozen=True)
class CandidateRecord:
    """A database element: image embedding, grounded caption and medical report."""

    id: str
    image_embedding: EmbeddingVector
    caption: GroundedCaption
    report_text: str
    report_embedding: EmbeddingVector

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise InputError("record id must be a non-empty string")
        if not isinstance(self.report_text, str) or not self.report_text.strip():
            raise EmptyReport(f"record {self.id!r} has an empty report_text")


@dataclass(frozen=True)
class RerankConfig:
    """
    Weights and solver settings for retrieval and OT re-ranking.

    alpha, beta and delta weight question-report relevance, finding-text
    similarity and finding-box similarity; they must sum to one.
    """

    alpha: float = 0.2
    beta: float = 0.3
    delta: float = 0.5
    gamma: float = 1.0
    k: int = 10
    s: int = 5
    sinkhorn_max_iters: int = 1000
    sinkhorn_tol: float = 1e-6
    visual_dim: int = DEFAULT_VISUAL_DIM
    text_dim: int = DEFAULT_TEXT_DIM
    log_domain: Optional[bool] = None  # None selects by gamma
    method: str = "ot"

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "delta"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value < 0:
                raise InvalidConfig(f"{name} must be a nonnegative real, got {value!r}")
        total = self.alpha + self.beta + self.delta
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise InvalidConfig(
                f"weights must sum to 1: alpha + beta + delta = "
                f"{self.alpha} + {self.beta} + {self.delta} = {total:g}"
            )
        if not isinstance(self.gamma, (int, float)) or not math.isfinite(self.gamma) or self.gamma <= 0:
            raise InvalidConfig(f"gamma must be positive, got {self.gamma!r}")
        for name in ("k", "s", "sinkhorn_max_iters", "visual_dim", "text_dim"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidConfig(f"{name} must be a positive integer, got {value!r}")
        if self.s > self.k:
            raise InvalidConfig(f"s must not exceed k (s={self.s}, k={self.k})")
        if not isinstance(self.sinkhorn_tol, (int, float)) or not self.sinkhorn_tol > 0:
            raise InvalidConfig(f"sinkhorn_tol must be positive, got {self.sinkhorn_tol!r}")
        if self.method not in SCORING_METHODS:
            raise InvalidConfig(f"method must be one of {', '.join(SCORING_METHODS)}, got {self.method!r}")

    @property
    def use_log_domain(self) -> bool:
        if self.log_domain is None:
            return self.gamma < LOG_DOMAIN_GAMMA_THRESHOLD
        return self.log_domain

    @property
    def weights(self) -> Tuple[float, float, float]:
        return (self.alpha, self.beta, self.delta)

    @classmethod
    def preset(cls, name: str, **overrides: Any) -> "RerankConfig":
        """Build a config from a named weight preset."""
        if name not in PRESETS:
            raise InvalidConfig(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
        alpha, beta, delta = PRESETS[name]
        return cls(alpha=alpha, beta=beta, delta=delta, **overrides)

    def with_changes(self, **changes: Any) -> "RerankConfig":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
