"""
MOTOR Transport Type Definitions

This module contains the cost matrix and transport plan types produced by the
entropic optimal transport solver.
"""
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """A finite n_q x n_r cost matrix (read-only)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        array = np.array(self.entries, dtype=np.float64, copy=True)
        array.flags.writeable = False
        object.__setattr__(self, "entries", array)

    @property
    def n_q(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n_r(self) -> int:
        return int(self.entries.shape[1])

    @property
    def shape(self) -> tuple:
        return self.entries.shape


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """
    Result of one Sinkhorn solve.

    ``cost`` is the transport term sum(P * C); ``marginal_error`` is the larger of
    the row and column marginal violations of ``plan``. When ``converged`` is
    false the plan is the best iterate seen.
    """

    plan: np.ndarray
    row_marginal: np.ndarray
    col_marginal: np.ndarray
    cost: float
    iterations: int
    converged: bool
    marginal_error: float
    log_domain: bool = False

    def summary(self) -> Dict[str, Any]:
        """Iteration count and convergence flag, as recorded on candidate scores."""
        return {"iterations": self.iterations, "converged": self.converged}
