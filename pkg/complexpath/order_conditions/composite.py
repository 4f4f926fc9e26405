"""Coefficient search for the five-evaluation composite two-stage/three-stage scheme.

Unknowns are the real and imaginary parts of eight coefficients; ``b23`` is
eliminated so the weights sum to exactly one. The residual vector holds the
real and imaginary parts of the second-order autonomous condition and the real
parts of every condition at orders three and up.
"""

from __future__ import annotations

import logging
import time
from typing import Any

import numpy as np

from complexpath.errors import ArgumentError, NumericError
from complexpath.numerics import levenberg_marquardt
from complexpath.observability import metrics_collector
from complexpath.order_conditions.expansion import exact_flow_jet, runge_kutta_jet
from complexpath.order_conditions.jet import Monomial, Restriction
from complexpath.order_conditions.report import order_report
from complexpath.order_conditions.schemes import COMPOSITE_NAMES, SchemeDescriptor, composite_tableau

logger = logging.getLogger(__name__)

FREE_NAMES = COMPOSITE_NAMES[:-1]
START_BOX = 1.5
ACCEPT_TOL = 1e-10
DEFAULT_STARTS = 10_000


class CompositeConditions:
    def __init__(self, order: int = 5, real_only: bool = False) -> None:
        if not 2 <= order <= 5:
            raise ArgumentError(f"composite search covers orders 2-5, got {order}")
        self.order = order
        self.real_only = real_only
        exact = exact_flow_jet(order, autonomous_only=True)
        self.keys: list[tuple[int, Monomial]] = [(k, m) for k in range(2, order + 1) for m in exact.monomials(k)]
        self.targets = [exact.coefficient(k, m) for k, m in self.keys]

    @property
    def size(self) -> int:
        return len(FREE_NAMES) if self.real_only else 2 * len(FREE_NAMES)

    def coefficients(self, x: np.ndarray) -> dict[str, Any]:
        n = len(FREE_NAMES)
        values = x[:n] if self.real_only else x[:n] + 1j * x[n : 2 * n]
        coeffs = {name: values[i] for i, name in enumerate(FREE_NAMES)}
        coeffs["b23"] = 1.0 - (coeffs["b11"] + coeffs["b12"] + coeffs["b21"] + coeffs["b22"])
        return coeffs

    def __call__(self, x: np.ndarray) -> np.ndarray:
        tableau_a, tableau_b = composite_tableau(self.coefficients(np.asarray(x)))
        jet = runge_kutta_jet(tableau_a, tableau_b, self.order, Restriction.AUTONOMOUS)
        rows = []
        for (k, monomial), target in zip(self.keys, self.targets):
            residual = jet.coefficient(k, monomial) - target
            rows.append(np.real(residual))
            if k == 2:
                rows.append(np.imag(residual))
        return np.stack(np.broadcast_arrays(*rows)).astype(float)

    def scheme(self, x: np.ndarray, name: str = "composite-rk23") -> SchemeDescriptor:
        coeffs = {key: complex(value) for key, value in self.coefficients(np.asarray(x)).items()}
        return SchemeDescriptor.composite(coeffs, real_projection=True, name=name)


def solve_composite_rk23(
    order: int = 5,
    seed: int = 0,
    max_starts: int = DEFAULT_STARTS,
    real_only: bool = False,
    tol: float = ACCEPT_TOL,
) -> SchemeDescriptor:
    """First seeded Levenberg-Marquardt start whose residual drops below ``tol``."""
    conditions = CompositeConditions(order, real_only)
    best = np.inf
    started = time.perf_counter()
    for start in range(max_starts):
        rng = np.random.default_rng([seed, start])
        x0 = rng.uniform(-START_BOX, START_BOX, conditions.size)
        outcome = levenberg_marquardt(conditions, x0, tol=tol)
        metrics_collector.record_solver_start(outcome.converged)
        best = min(best, outcome.residual_norm)
        logger.debug("composite start %d: %s, residual %.3e", start, outcome.reason, outcome.residual_norm)
        if not outcome.converged:
            continue
        scheme = conditions.scheme(outcome.x)
        report = order_report(scheme, order, tol=max(tol * 10.0, 1e-9))
        if report.achieved_order_relaxed < order:
            logger.warning("start %d converged but the order report disagrees; continuing", start)
            continue
        logger.info(
            "composite scheme of relaxed order %d found at start %d in %.2fs",
            order,
            start,
            time.perf_counter() - started,
        )
        return scheme
    raise NumericError(
        f"no composite scheme of relaxed order {order} within {max_starts} starts",
        {"best_residual": float(best), "starts": max_starts, "real_only": real_only},
    )
