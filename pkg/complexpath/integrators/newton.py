from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from complexpath.errors import ArgumentError, NumericError
from complexpath.integrators.rhs import CountedRhs

EPS = float(np.finfo(float).eps)
ROUNDOFF_FACTOR = 16.0


@dataclass(frozen=True)
class NewtonConfig:
    tolerance: float = 1e-12
    max_iterations: int = 50

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise ArgumentError(f"Newton tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ArgumentError(f"Newton needs at least one iteration, got {self.max_iterations}")


def _row_sum_norm(matrix: Any) -> float:
    if sparse.issparse(matrix):
        return float(abs(matrix).sum(axis=1).max())
    return float(np.max(np.sum(np.abs(np.atleast_2d(matrix)), axis=1)))


def _solve(matrix: Any, rhs: np.ndarray) -> np.ndarray:
    if sparse.issparse(matrix):
        return np.asarray(spsolve(matrix.tocsc(), rhs), dtype=complex)
    return np.linalg.solve(matrix, rhs)


def solve_implicit_stage(
    rhs: CountedRhs,
    t_stage: Any,
    y: np.ndarray,
    h: complex,
    theta: float,
    config: NewtonConfig,
    guess: np.ndarray | None = None,
) -> tuple[np.ndarray, int]:
    """Solve z = y + h f(t_stage, (1 - theta) y + theta z) for z.

    theta = 1 gives backward Euler, theta = 1/2 the implicit midpoint rule.
    Returns the solution and the number of Newton updates taken.
    """
    z = np.array(y if guess is None else guess, dtype=complex)
    floor = 0.0
    for iteration in range(config.max_iterations + 1):
        argument = (1.0 - theta) * y + theta * z
        f_value = rhs(t_stage, argument)
        increment = h * f_value
        residual = z - y - increment
        norm = float(np.max(np.abs(residual)))
        scale = 1.0 + float(np.max(np.abs(z))) + float(np.max(np.abs(increment)))
        if not np.isfinite(norm):
            break
        if norm <= config.tolerance * scale + floor:
            rhs.newton_iterations += iteration
            return z, iteration
        if iteration == config.max_iterations:
            break
        jac_f = rhs.jacobian(t_stage, argument, f_value)
        # cancellation in h f for stiff operators leaves a residual of about eps |h| |J| |y|
        floor = ROUNDOFF_FACTOR * EPS * abs(h) * _row_sum_norm(jac_f) * float(np.max(np.abs(argument)))
        if sparse.issparse(jac_f):
            system = sparse.identity(z.size, dtype=complex, format="csc") - (h * theta) * jac_f
        else:
            system = np.eye(z.size, dtype=complex) - (h * theta) * jac_f
        try:
            delta = _solve(system, -residual)
        except (np.linalg.LinAlgError, RuntimeError) as exc:
            raise NumericError(f"singular Newton system: {exc}", {"iteration": iteration}) from exc
        z = z + delta
        step = float(np.max(np.abs(delta)))
        if np.isfinite(step) and step <= config.tolerance * (1.0 + float(np.max(np.abs(z)))):
            rhs.newton_iterations += iteration + 1
            return z, iteration + 1
    rhs.newton_iterations += config.max_iterations
    raise NumericError(
        f"Newton did not converge in {config.max_iterations} iterations",
        {"residual": norm, "tolerance": config.tolerance * scale + floor},
    )
