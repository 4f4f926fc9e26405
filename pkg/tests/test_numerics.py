from __future__ import annotations

import math

import numpy as np

from complexpath.numerics import cluster_solutions, damped_newton, forward_difference_jacobian, levenberg_marquardt


def _circle_and_diagonal(x: np.ndarray) -> np.ndarray:
    return np.array([x[0] ** 2 + x[1] ** 2 - 1.0, x[0] - x[1]])


def test_forward_difference_jacobian():
    jacobian = forward_difference_jacobian(_circle_and_diagonal, np.array([0.3, 0.4]))
    np.testing.assert_allclose(jacobian, [[0.6, 0.8], [1.0, -1.0]], atol=1e-6)


def test_damped_newton_finds_the_intersection():
    outcome = damped_newton(_circle_and_diagonal, np.array([1.0, 0.5]))
    assert outcome.converged
    np.testing.assert_allclose(outcome.x, [1 / math.sqrt(2.0)] * 2, atol=1e-12)


def test_damped_newton_reports_a_stall():
    outcome = damped_newton(lambda x: np.array([x[0] ** 2 + 1.0]), np.array([0.5]))
    assert not outcome.converged
    assert outcome.reason in {"stalled", "max-iterations", "diverged"}


def test_levenberg_marquardt_handles_underdetermined_systems():
    outcome = levenberg_marquardt(lambda x: np.array([x[0] + x[1] + x[2] - 1.0, x[0] * x[1] - 0.1]), np.zeros(3))
    assert outcome.converged
    assert outcome.residual_norm < 1e-10


def test_cluster_keeps_first_representative():
    points = [np.array([1.0, 2.0]), np.array([1.0 + 1e-9, 2.0]), np.array([3.0, 0.0])]
    kept = cluster_solutions(points)
    assert len(kept) == 2
    assert kept[0] is points[0]
