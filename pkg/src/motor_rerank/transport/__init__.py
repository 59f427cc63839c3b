"""
MOTOR Transport Module

Cost matrices, the Sinkhorn solver and a brute-force exact oracle.
"""

from .models import CostMatrix, TransportPlan
from .oracle import exact_ot_bruteforce
from .sinkhorn import build_cost_matrix, sinkhorn, uniform_marginal

__all__ = [
    "CostMatrix",
    "TransportPlan",
    "build_cost_matrix",
    "exact_ot_bruteforce",
    "sinkhorn",
    "uniform_marginal",
]
