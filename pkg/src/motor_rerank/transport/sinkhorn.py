"""
Entropic optimal transport solver.

Cost matrices follow C = 1 - F for a composite similarity F. The solver is the
classical Sinkhorn-Knopp scaling on K = exp(-C / gamma); a log-domain variant on
the dual potentials handles small gamma where K underflows. Both variants start
from the same point (b = 1, i.e. g = 0) so that their iterates coincide.
"""
import logging
from typing import Optional, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from ..core.models import LOG_DOMAIN_GAMMA_THRESHOLD
from ..errors import InvalidConfig, InvalidMarginals, NonFiniteInput, NumericalUnderflow
from .models import CostMatrix, TransportPlan

logger = logging.getLogger("motor.transport")

MARGINAL_SUM_TOLERANCE = 1e-9

MatrixLike = Union[CostMatrix, np.ndarray]


def build_cost_matrix(F: np.ndarray) -> CostMatrix:
    """
    Turn a similarity matrix into a cost matrix, entrywise 1 - F.

    Raises:
        NonFiniteInput: If F contains NaN or infinite entries
    """
    similarities = np.asarray(F, dtype=np.float64)
    if similarities.ndim != 2:
        raise NonFiniteInput(f"similarity matrix must be 2-D, got shape {similarities.shape}")
    if not np.all(np.isfinite(similarities)):
        raise NonFiniteInput("similarity matrix contains NaN or infinite entries")
    return CostMatrix(1.0 - similarities)


def uniform_marginal(n: int) -> np.ndarray:
    """Uniform probability vector of length n."""
    return np.full(n, 1.0 / n, dtype=np.float64)


def _check_marginal(weights: np.ndarray, expected: int, name: str) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.shape[0] != expected:
        raise InvalidMarginals(f"{name} has shape {w.shape}, expected ({expected},)")
    if not np.all(np.isfinite(w)):
        raise NonFiniteInput(f"{name} contains NaN or infinite entries")
    if np.any(w <= 0.0):
        raise InvalidMarginals(f"{name} has a nonpositive entry (min {w.min():g})")
    total = float(w.sum())
    if abs(total - 1.0) > MARGINAL_SUM_TOLERANCE:
        raise InvalidMarginals(f"{name} sums to {total!r}, expected 1")
    return w


def _marginal_error(P: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    rows = np.max(np.abs(P.sum(axis=1) - u))
    cols = np.max(np.abs(P.sum(axis=0) - v))
    return float(max(rows, cols))


def _plain_iterations(
    C: np.ndarray, u: np.ndarray, v: np.ndarray, gamma: float, max_iters: int, tol: float
) -> Tuple[np.ndarray, int, bool, float]:
    K = np.exp(-C / gamma)
    if np.any(K.sum(axis=1) == 0.0) or np.any(K.sum(axis=0) == 0.0):
        raise NumericalUnderflow(
            f"kernel exp(-C/gamma) has an all-zero row or column at gamma={gamma:g}; "
            "use the log-domain solver"
        )
    b = np.ones(C.shape[1])
    best: Optional[np.ndarray] = None
    best_error = np.inf
    for iteration in range(1, max_iters + 1):
        Kb = K @ b
        if np.any(Kb == 0.0):
            raise NumericalUnderflow(f"row scaling collapsed at iteration {iteration} (gamma={gamma:g})")
        a = u / Kb
        KTa = K.T @ a
        if np.any(KTa == 0.0):
            raise NumericalUnderflow(f"column scaling collapsed at iteration {iteration} (gamma={gamma:g})")
        b = v / KTa
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise NumericalUnderflow(f"scalings became non-finite at iteration {iteration} (gamma={gamma:g})")
        P = a[:, None] * K * b[None, :]
        error = _marginal_error(P, u, v)
        if error < best_error:
            best, best_error = P, error
        if error <= tol:
            return P, iteration, True, error
    return best, max_iters, False, best_error


def _log_iterations(
    C: np.ndarray, u: np.ndarray, v: np.ndarray, gamma: float, max_iters: int, tol: float
) -> Tuple[np.ndarray, int, bool, float]:
    log_u = np.log(u)
    log_v = np.log(v)
    g = np.zeros(C.shape[1])
    best: Optional[np.ndarray] = None
    best_error = np.inf
    for iteration in range(1, max_iters + 1):
        f = gamma * (log_u - logsumexp((g[None, :] - C) / gamma, axis=1))
        g = gamma * (log_v - logsumexp((f[:, None] - C) / gamma, axis=0))
        P = np.exp((f[:, None] + g[None, :] - C) / gamma)
        error = _marginal_error(P, u, v)
        if error < best_error:
            best, best_error = P, error
        if error <= tol:
            return P, iteration, True, error
    return best, max_iters, False, best_error


def sinkhorn(
    C: MatrixLike,
    u: np.ndarray,
    v: np.ndarray,
    gamma: float = 1.0,
    max_iters: int = 1000,
    tol: float = 1e-6,
    log_domain: Optional[bool] = None,
) -> TransportPlan:
    """
    Solve the entropy-regularized OT problem between u and v.

    Args:
        C: Cost matrix, n_q x n_r
        u: Row marginal, strictly positive, summing to 1
        v: Column marginal, strictly positive, summing to 1
        gamma: Entropic regularization strength (> 0)
        max_iters: Iteration cap
        tol: Tolerance on the max marginal violation
        log_domain: Force (True) or forbid (False) the log-domain variant;
            None selects it when gamma < 0.05

    Returns:
        TransportPlan with cost = sum(P * C); converged is false, with the best
        iterate, when max_iters is reached

    Raises:
        NonFiniteInput: If C or a marginal contains NaN or infinite values
        InvalidConfig: If gamma or tol is not a positive finite number, or
            max_iters is not a positive integer
        InvalidMarginals: If a marginal is malformed
        NumericalUnderflow: If the plain-domain kernel collapses
    """
    costs = C.entries if isinstance(C, CostMatrix) else np.asarray(C, dtype=np.float64)
    if costs.ndim != 2 or costs.size == 0:
        raise InvalidMarginals(f"cost matrix must be a non-empty 2-D array, got shape {costs.shape}")
    if not np.all(np.isfinite(costs)):
        raise NonFiniteInput("cost matrix contains NaN or infinite entries")
    if not (gamma > 0 and np.isfinite(gamma)):
        raise InvalidConfig(f"gamma must be positive, got {gamma!r}")
    if isinstance(max_iters, bool) or not isinstance(max_iters, (int, np.integer)) or max_iters < 1:
        raise InvalidConfig(f"max_iters must be a positive integer, got {max_iters!r}")
    if not (tol > 0 and np.isfinite(tol)):
        raise InvalidConfig(f"tol must be positive, got {tol!r}")
    n_q, n_r = costs.shape
    u = _check_marginal(u, n_q, "row marginal u")
    v = _check_marginal(v, n_r, "column marginal v")

    use_log = gamma < LOG_DOMAIN_GAMMA_THRESHOLD if log_domain is None else bool(log_domain)
    solve = _log_iterations if use_log else _plain_iterations
    P, iterations, converged, error = solve(costs, u, v, float(gamma), int(max_iters), float(tol))
    if not converged:
        logger.warning(
            f"Sinkhorn did not converge in {iterations} iterations "
            f"(gamma={gamma:g}, marginal error {error:.3e} > tol {tol:g}); using best iterate"
        )
    else:
        logger.debug(f"Sinkhorn converged in {iterations} iterations (gamma={gamma:g}, log_domain={use_log})")
    return TransportPlan(
        plan=P,
        row_marginal=u,
        col_marginal=v,
        cost=float(np.sum(P * costs)),
        iterations=iterations,
        converged=converged,
        marginal_error=error,
        log_domain=use_log,
    )
