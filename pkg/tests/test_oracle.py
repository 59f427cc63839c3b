"""
Tests for the brute-force exact OT oracle.
"""
import itertools

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from src.motor_rerank.errors import OracleScopeExceeded
from src.motor_rerank.transport.oracle import exact_ot_bruteforce
from src.motor_rerank.transport.sinkhorn import build_cost_matrix, uniform_marginal


def _uniform(n):
    return uniform_marginal(n), uniform_marginal(n)


class TestExactOtBruteforce:
    """Test cases for exact_ot_bruteforce."""

    def test_identity_assignment(self):
        assert exact_ot_bruteforce(np.array([[0.0, 1.0], [1.0, 0.0]]), *_uniform(2)) == 0.0

    def test_swap_assignment(self):
        assert exact_ot_bruteforce(np.array([[1.0, 0.0], [0.0, 1.0]]), *_uniform(2)) == 0.0

    def test_accepts_cost_matrix(self):
        C = build_cost_matrix(np.array([[0.5, -0.5], [0.0, 1.0]]))
        assert exact_ot_bruteforce(C, *_uniform(2)) == pytest.approx(0.25)

    def test_random_4x4_enumeration(self, rng):
        C = rng.uniform(0.0, 2.0, size=(4, 4))
        expected = min(
            sum(C[i, p[i]] for i in range(4)) / 4 for p in itertools.permutations(range(4))
        )
        assert exact_ot_bruteforce(C, *_uniform(4)) == pytest.approx(expected, abs=1e-15)

    def test_agrees_with_linear_sum_assignment(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 7))
            C = rng.uniform(0.0, 2.0, size=(n, n))
            rows, cols = linear_sum_assignment(C)
            assert exact_ot_bruteforce(C, *_uniform(n)) == pytest.approx(C[rows, cols].mean(), abs=1e-12)

    def test_too_large(self):
        with pytest.raises(OracleScopeExceeded):
            exact_ot_bruteforce(np.zeros((7, 7)), *_uniform(7))

    def test_non_square(self):
        with pytest.raises(OracleScopeExceeded):
            exact_ot_bruteforce(np.zeros((2, 3)), uniform_marginal(2), uniform_marginal(3))

    def test_non_uniform(self):
        with pytest.raises(OracleScopeExceeded):
            exact_ot_bruteforce(np.zeros((2, 2)), np.array([0.3, 0.7]), uniform_marginal(2))
