from __future__ import annotations

from typing import Sequence

from complexpath.errors import ArgumentError, CapabilityError
from complexpath.paths.model import ComplexPath, PathResidualReport, ValidityClass
from complexpath.paths.symmetric import (
    elementary_symmetric_all,
    exp_taylor,
    implicit_factors,
    rational_series,
    stage_square_moment,
)

NONLINEAR_MAX_ORDER = 3
STAGE_SQUARE_TARGET = 1.0 / 3.0


def _condition(value: complex, target: complex, order: int, relaxed: bool) -> complex:
    residual = complex(value) - complex(target)
    if relaxed and order >= 3:
        return complex(residual.real)
    return residual


def _linear_conditions(coefficients: Sequence[complex], order: int, relaxed: bool) -> tuple[list[str], list[complex]]:
    targets = exp_taylor(order)
    labels, residuals = [], []
    for k in range(1, order + 1):
        value = coefficients[k] if k < len(coefficients) else 0j
        labels.append(f"e{k}")
        residuals.append(_condition(value, targets[k], k, relaxed))
    return labels, residuals


def verify_path(
    path: ComplexPath, order: int, relaxed: bool = False, targets: Sequence[complex] | None = None
) -> PathResidualReport:
    """Residuals of the order conditions implied by the path's validity class."""
    if order < 1:
        raise ArgumentError(f"order must be >= 1, got {order}")
    cls = path.validity_class

    if cls is ValidityClass.LINEAR_ONLY:
        labels, residuals = _linear_conditions(elementary_symmetric_all(path.weights), order, relaxed)
    elif cls is ValidityClass.NONLINEAR:
        if order > NONLINEAR_MAX_ORDER:
            raise CapabilityError(f"nonlinear path conditions are only available up to order {NONLINEAR_MAX_ORDER}")
        labels, residuals = _linear_conditions(elementary_symmetric_all(path.weights), order, relaxed)
        if order == 3:
            labels.append("stage-square")
            residuals.append(_condition(stage_square_moment(path.weights), STAGE_SQUARE_TARGET, 3, relaxed))
    elif cls in (ValidityClass.IMPLICIT_MIDPOINT, ValidityClass.BACKWARD_EULER):
        numerator, denominator = implicit_factors(path.weights, cls.value)
        labels, residuals = _linear_conditions(rational_series(numerator, denominator, order), order, relaxed)
    else:
        if targets is None:
            raise CapabilityError("problem-specific paths are verified against explicit targets")
        if len(path.weights) != 2 or not 1 <= order <= min(3, len(targets)):
            raise CapabilityError("problem-specific verification covers 2-step paths up to the given targets")
        w1, w2 = path.weights
        values = [w1 + w2, 2.0 * w1 * w2, w1 * w1 * w2]
        labels, residuals = [], []
        for k in range(1, order + 1):
            residual = complex(values[k - 1]) - complex(targets[k - 1])
            labels.append(f"c{k}")
            residuals.append(complex(residual.real) if relaxed and k >= 2 else residual)

    return PathResidualReport(tuple(labels), tuple(residuals), relaxed)
