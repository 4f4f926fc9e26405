from __future__ import annotations

from typing import Any, Callable

import numpy as np
from scipy import sparse

from complexpath.errors import BlowUpError

BLOW_UP_NORM = 1e12
FD_JACOBIAN_STEP = 1e-7

RhsFunction = Callable[[Any, np.ndarray], np.ndarray]
JacobianFunction = Callable[[Any, np.ndarray], Any]


class CountedRhs:
    """Right-hand side wrapper that counts evaluations for one integration."""

    def __init__(self, fn: RhsFunction, jacobian: JacobianFunction | None = None) -> None:
        self.fn = fn
        self.analytic_jacobian = jacobian
        self.evaluations = 0
        self.jacobian_evaluations = 0
        self.newton_iterations = 0

    def __call__(self, t: Any, y: np.ndarray) -> np.ndarray:
        self.evaluations += 1
        return np.asarray(self.fn(t, y), dtype=complex)

    def jacobian(self, t: Any, y: np.ndarray, f0: np.ndarray | None = None) -> Any:
        """df/dy at (t, y); dense or scipy.sparse when the problem provides one."""
        if self.analytic_jacobian is not None:
            matrix = self.analytic_jacobian(t, y)
            return matrix if sparse.issparse(matrix) else np.atleast_2d(np.asarray(matrix, dtype=complex))
        if f0 is None:
            f0 = np.asarray(self.fn(t, y), dtype=complex)
            self.jacobian_evaluations += 1
        # real increments are enough for holomorphic right-hand sides
        columns = []
        for j in range(y.size):
            h = FD_JACOBIAN_STEP * (1.0 + abs(y[j]))
            shifted = y.copy()
            shifted[j] += h
            columns.append((np.asarray(self.fn(t, shifted), dtype=complex) - f0) / h)
            self.jacobian_evaluations += 1
        return np.column_stack(columns)


def check_state(y: np.ndarray, substep: int) -> np.ndarray:
    if not np.all(np.isfinite(y)):
        raise BlowUpError(f"non-finite value in substep {substep}", substep)
    peak = float(np.max(np.abs(y))) if y.size else 0.0
    if peak > BLOW_UP_NORM:
        raise BlowUpError(f"|y| = {peak:.3e} exceeds {BLOW_UP_NORM:.0e} in substep {substep}", substep, {"norm": peak})
    return y
