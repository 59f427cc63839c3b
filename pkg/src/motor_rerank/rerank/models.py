"""
MOTOR Rerank Type Definitions

This module contains the per-candidate score produced by the re-ranking stage.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional


@dataclass(frozen=True)
class CandidateScore:
    """
    Score of one retrieved candidate.

    ``final_rank`` is 0 until the candidate has been ranked. ``plan_summary`` holds
    the Sinkhorn iteration count and convergence flag; it is empty when no
    transport problem was solved (fallback or baseline methods). ``warning`` records
    non-fatal issues such as non-convergence, ``error`` a fatal scoring failure.
    """

    record_id: str
    ot_cost: float
    initial_rank: int
    final_rank: int = 0
    fallback_used: bool = False
    similarity: float = 0.0
    plan_summary: Dict[str, Any] = field(default_factory=dict)
    warning: Optional[str] = None
    error: Optional[str] = None
    exception: Optional[BaseException] = field(default=None, repr=False, compare=False)

    @property
    def failed(self) -> bool:
        return self.error is not None

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            "record_id": self.record_id,
            "ot_cost": self.ot_cost,
            "initial_rank": self.initial_rank,
            "final_rank": self.final_rank,
            "fallback_used": self.fallback_used,
            "similarity": self.similarity,
            "plan_summary": dict(self.plan_summary),
            "warning": self.warning,
            "error": self.error,
        }
        # JSON has no infinity
        if not math.isfinite(self.ot_cost):
            payload["ot_cost"] = None
        return payload
