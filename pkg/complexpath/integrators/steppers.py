"""Single macro-steps of the complex-path schemes and real Runge-Kutta methods.

Every stepper takes a :class:`CountedRhs`, a (possibly complex) start time,
the state and the real step ``dt``. ``dt`` may also be an array matching a
scalar problem's state, which advances many step sizes at once.
"""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np

from complexpath.errors import ArgumentError
from complexpath.integrators.newton import NewtonConfig, solve_implicit_stage
from complexpath.integrators.rhs import CountedRhs, check_state
from complexpath.order_conditions.schemes import SchemeDescriptor, SchemeVariant
from complexpath.paths.model import ComplexPath

IMPLICIT_THETA = {
    SchemeVariant.IMPLICIT_MIDPOINT_PATH: 0.5,
    SchemeVariant.BACKWARD_EULER_PATH: 1.0,
}


def _weights(path: ComplexPath | Sequence[complex]) -> tuple[complex, ...]:
    return path.weights if isinstance(path, ComplexPath) else tuple(complex(w) for w in path)


def euler_path_step(
    rhs: CountedRhs,
    t: Any,
    y: np.ndarray,
    dt: Any,
    path: ComplexPath | Sequence[complex],
    check_finite: bool = True,
) -> np.ndarray:
    offset = 0j
    for substep, w in enumerate(_weights(path)):
        y = y + (w * dt) * rhs(t + offset * dt, y)
        if check_finite:
            check_state(y, substep)
        offset += w
    return y


def implicit_path_step(
    rhs: CountedRhs,
    t: Any,
    y: np.ndarray,
    dt: float,
    path: ComplexPath | Sequence[complex],
    variant: SchemeVariant | str,
    config: NewtonConfig | None = None,
) -> np.ndarray:
    variant = SchemeVariant(variant)
    if variant not in IMPLICIT_THETA:
        raise ArgumentError(f"{variant.value} is not an implicit path variant")
    theta = IMPLICIT_THETA[variant]
    config = config or NewtonConfig()
    offset = 0j
    for substep, w in enumerate(_weights(path)):
        h = w * dt
        # Newton starts from the previous substep value
        y, _ = solve_implicit_stage(rhs, t + offset * dt + theta * h, y, h, theta, config)
        check_state(y, substep)
        offset += w
    return y


def composite_rk23_step(
    rhs: CountedRhs, t: Any, y: np.ndarray, dt: Any, scheme: SchemeDescriptor, check_finite: bool = True
) -> np.ndarray:
    """Two-stage step to y_m followed by a three-stage step from y_m; five evaluations."""
    c = scheme.composite_coefficients()
    k11 = rhs(t, y)
    k12 = rhs(t + c["a121"] * dt, y + c["a121"] * dt * k11)
    y_m = y + dt * (c["b11"] * k11 + c["b12"] * k12)
    if check_finite:
        check_state(y_m, 1)
    t_m = t + (c["b11"] + c["b12"]) * dt
    k21 = rhs(t_m, y_m)
    k22 = rhs(t_m + c["a221"] * dt, y_m + c["a221"] * dt * k21)
    k23 = rhs(
        t_m + (c["a231"] + c["a232"]) * dt,
        y_m + dt * (c["a231"] * k21 + c["a232"] * k22),
    )
    y_next = y_m + dt * (c["b21"] * k21 + c["b22"] * k22 + c["b23"] * k23)
    if check_finite:
        check_state(y_next, 4)
    return y_next


def runge_kutta_step(
    rhs: CountedRhs,
    t: Any,
    y: np.ndarray,
    dt: Any,
    tableau_a: Sequence[Sequence[complex]],
    tableau_b: Sequence[complex],
    check_finite: bool = True,
) -> np.ndarray:
    slopes: list[np.ndarray] = []
    for row in tableau_a:
        stage = y
        for a_ij, k_j in zip(row, slopes):
            if a_ij != 0:
                stage = stage + (a_ij * dt) * k_j
        slopes.append(rhs(t + sum(row, 0j) * dt, stage))
    y_next = y + dt * sum((b_i * k_i for b_i, k_i in zip(tableau_b, slopes) if b_i != 0), np.zeros_like(y))
    if check_finite:
        check_state(y_next, len(slopes) - 1)
    return y_next


def scheme_step(
    rhs: CountedRhs,
    t: Any,
    y: np.ndarray,
    dt: Any,
    scheme: SchemeDescriptor,
    newton: NewtonConfig | None = None,
    check_finite: bool = True,
) -> np.ndarray:
    """One macro-step of any scheme descriptor, without projection."""
    if scheme.variant is SchemeVariant.EULER_PATH:
        return euler_path_step(rhs, t, y, dt, scheme.weights, check_finite)
    if scheme.implicit:
        return implicit_path_step(rhs, t, y, dt, scheme.weights, scheme.variant, newton)
    if scheme.variant is SchemeVariant.COMPOSITE_RK23:
        return composite_rk23_step(rhs, t, y, dt, scheme, check_finite)
    return runge_kutta_step(rhs, t, y, dt, scheme.tableau_a, scheme.tableau_b, check_finite)
