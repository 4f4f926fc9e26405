"""Small dense root-finders shared by the path and scheme solvers.

Residual callables take a real vector of shape ``(n,)`` or a batch of shape
``(n, k)`` and return ``(m,)`` or ``(m, k)``; the batch form lets a
forward-difference Jacobian be evaluated in a single call.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

Residual = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SolveOutcome:
    x: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    reason: str


def forward_difference_jacobian(
    residual: Residual, x: np.ndarray, f0: np.ndarray | None = None, rel_step: float = 1e-7
) -> np.ndarray:
    steps = rel_step * (1.0 + np.abs(x))
    batch = x[:, None] + np.diag(steps)
    if f0 is None:
        f0 = residual(x)
    return (residual(batch) - f0[:, None]) / steps[None, :]


def _linear_step(jacobian: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    rows, cols = jacobian.shape
    if rows == cols:
        try:
            return np.linalg.solve(jacobian, rhs)
        except np.linalg.LinAlgError:
            pass
    return np.linalg.lstsq(jacobian, rhs, rcond=None)[0]


def damped_newton(
    residual: Residual,
    x0: np.ndarray,
    tol: float = 1e-12,
    max_iterations: int = 100,
    max_halvings: int = 20,
    divergence_norm: float = 1e3,
) -> SolveOutcome:
    """Newton's method with step halving; least-squares steps for non-square systems."""
    x = np.array(x0, dtype=float)
    r = residual(x)
    norm = float(np.max(np.abs(r)))
    for iteration in range(max_iterations):
        if norm < tol:
            return SolveOutcome(x, norm, iteration, True, "converged")
        delta = _linear_step(forward_difference_jacobian(residual, x, r), -r)
        step = 1.0
        for _ in range(max_halvings + 1):
            trial = x + step * delta
            trial_r = residual(trial)
            trial_norm = float(np.max(np.abs(trial_r)))
            if np.isfinite(trial_norm) and trial_norm < norm:
                break
            step *= 0.5
        else:
            return SolveOutcome(x, norm, iteration, False, "stalled")
        x, r, norm = trial, trial_r, trial_norm
        if float(np.linalg.norm(x)) > divergence_norm:
            return SolveOutcome(x, norm, iteration + 1, False, "diverged")
    return SolveOutcome(x, norm, max_iterations, norm < tol, "converged" if norm < tol else "max-iterations")


def levenberg_marquardt(
    residual: Residual,
    x0: np.ndarray,
    tol: float = 1e-10,
    max_iterations: int = 500,
    damping: float = 1e-3,
    max_damping: float = 1e12,
) -> SolveOutcome:
    """Levenberg-Marquardt with multiplicative damping updates.

    Works for underdetermined systems, where ``scipy.optimize.least_squares``
    with ``method="lm"`` refuses to run.
    """
    x = np.array(x0, dtype=float)
    r = residual(x)
    cost = float(r @ r)
    mu = damping
    identity = np.eye(x.size)
    for iteration in range(max_iterations):
        norm = float(np.max(np.abs(r)))
        if norm < tol:
            return SolveOutcome(x, norm, iteration, True, "converged")
        jacobian = forward_difference_jacobian(residual, x, r)
        normal = jacobian.T @ jacobian
        gradient = jacobian.T @ r
        while True:
            try:
                delta = np.linalg.solve(normal + mu * identity, -gradient)
            except np.linalg.LinAlgError:
                delta = np.linalg.lstsq(normal + mu * identity, -gradient, rcond=None)[0]
            trial = x + delta
            trial_r = residual(trial)
            trial_cost = float(trial_r @ trial_r)
            if np.isfinite(trial_cost) and trial_cost < cost:
                x, r, cost = trial, trial_r, trial_cost
                mu = max(mu / 10.0, 1e-15)
                break
            mu *= 10.0
            if mu > max_damping:
                return SolveOutcome(x, float(np.max(np.abs(r))), iteration, False, "stalled")
    norm = float(np.max(np.abs(r)))
    return SolveOutcome(x, norm, max_iterations, norm < tol, "converged" if norm < tol else "max-iterations")


def cluster_solutions(points: Sequence[np.ndarray], tol: float = 1e-6) -> list[np.ndarray]:
    """Keep the first representative of every group closer than ``tol`` componentwise."""
    unique: list[np.ndarray] = []
    for point in points:
        if not any(np.max(np.abs(point - kept)) <= tol for kept in unique):
            unique.append(point)
    return unique
