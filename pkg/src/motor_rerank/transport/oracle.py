"""
Brute-force exact OT for small uniform square problems.

With uniform marginals on an n x n problem the optimum is attained at a
permutation matrix, so enumerating all n! assignments gives the exact cost.
"""
from itertools import permutations

import numpy as np

from ..errors import OracleScopeExceeded
from .models import CostMatrix
from .sinkhorn import MatrixLike

MAX_ORACLE_SIZE = 6
UNIFORM_TOLERANCE = 1e-12


def exact_ot_bruteforce(C: MatrixLike, u: np.ndarray, v: np.ndarray) -> float:
    """
    Exact unregularized OT cost: min over permutations of mean C[i, sigma(i)].

    Raises:
        OracleScopeExceeded: If C is not square, n > 6, or a marginal is not uniform
    """
    costs = C.entries if isinstance(C, CostMatrix) else np.asarray(C, dtype=np.float64)
    if costs.ndim != 2 or costs.shape[0] != costs.shape[1] or costs.shape[0] == 0:
        raise OracleScopeExceeded(f"oracle needs a non-empty square cost matrix, got shape {costs.shape}")
    n = costs.shape[0]
    if n > MAX_ORACLE_SIZE:
        raise OracleScopeExceeded(f"oracle limited to n <= {MAX_ORACLE_SIZE}, got n = {n}")
    for name, weights in (("u", u), ("v", v)):
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (n,) or np.any(np.abs(w - 1.0 / n) > UNIFORM_TOLERANCE):
            raise OracleScopeExceeded(f"oracle needs uniform marginals; {name} is not uniform of length {n}")
    assignments = np.array(list(permutations(range(n))))
    totals = costs[np.arange(n)[None, :], assignments].mean(axis=1)
    return float(totals.min())
