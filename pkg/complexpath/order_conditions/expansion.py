"""Symbolic execution of schemes on jets and the exact-flow reference."""

from __future__ import annotations

import logging
import math
from typing import Any, Sequence

from complexpath.errors import ArgumentError, InternalError
from complexpath.order_conditions.jet import (
    MAX_ORDER,
    Jet,
    Monomial,
    Restriction,
    factorial_weight,
    multiply_monomials,
)
from complexpath.order_conditions.schemes import SchemeDescriptor, SchemeVariant

logger = logging.getLogger(__name__)

PICARD_TOL = 1e-13
MIN_ORDER = 2


def _check_order(order: int) -> None:
    if not MIN_ORDER <= order <= MAX_ORDER:
        raise ArgumentError(f"expansion order must lie in [{MIN_ORDER}, {MAX_ORDER}], got {order}")


def _resolve(restriction: Restriction | str | None, autonomous_only: bool) -> Restriction:
    if restriction is not None:
        return Restriction(restriction)
    return Restriction.AUTONOMOUS if autonomous_only else Restriction.NON_AUTONOMOUS


def _total_derivative(poly: dict[Monomial, float], restriction: Restriction) -> dict[Monomial, float]:
    """Apply d/dt = d_t + f d_y, i.e. D F_{a,b} = F_{a+1,b} + F_{0,0} F_{a,b+1}."""
    out: dict[Monomial, float] = {}
    for monomial, coeff in poly.items():
        for index, ((a, b), power) in enumerate(monomial):
            rest = list(monomial)
            if power == 1:
                del rest[index]
            else:
                rest[index] = ((a, b), power - 1)
            base = tuple(rest)
            replacements: list[Monomial] = []
            if restriction.allows(a + 1, b):
                replacements.append((((a + 1, b), 1),))
            if restriction.allows(a, b + 1):
                replacements.append(multiply_monomials((((0, 0), 1),), (((a, b + 1), 1),)))
            for factor in replacements:
                target = multiply_monomials(base, factor)
                out[target] = out.get(target, 0.0) + coeff * power
    return out


def exact_flow_jet(
    order: int, autonomous_only: bool = False, restriction: Restriction | str | None = None
) -> Jet:
    """Jet of y(t0 + h) - y0 for y' = f(t, y)."""
    _check_order(order)
    restriction = _resolve(restriction, autonomous_only)
    derivative: dict[Monomial, float] = {(((0, 0), 1),): 1.0}
    terms: dict[int, dict[Monomial, Any]] = {}
    for n in range(1, order + 1):
        terms[n] = {m: c / math.factorial(n) for m, c in derivative.items()}
        derivative = _total_derivative(derivative, restriction)
    return Jet(order, terms)


def rhs_jet(tau: Jet | None, y: Jet, order: int, restriction: Restriction = Restriction.NON_AUTONOMOUS) -> Jet:
    """Expand f(t0 + tau, y0 + y) through h^order; ``tau`` and ``y`` carry no h^0 term."""
    y = y.truncate(order)
    tau_powers = [Jet.constant(order, 1.0)]
    if tau is not None and not tau.is_zero():
        tau = tau.truncate(order)
        for _ in range(order):
            tau_powers.append(tau_powers[-1] * tau)
    y_powers = [Jet.constant(order, 1.0)]
    if not y.is_zero():
        for _ in range(order):
            y_powers.append(y_powers[-1] * y)

    result = Jet.zero(order)
    for a, tau_a in enumerate(tau_powers):
        for b, y_b in enumerate(y_powers):
            if a + b > order or not restriction.allows(a, b):
                continue
            term = tau_a * y_b if a and b else (y_b if not a else tau_a)
            result = result + term.times_indeterminate(a, b) * factorial_weight(a, b)
    return result


def _time_jet(order: int, offset: Any) -> Jet | None:
    if offset is None:
        return None
    return Jet.h_power(order, offset)


def _euler_path_jet(weights: Sequence[Any], order: int, restriction: Restriction) -> Jet:
    y = Jet.zero(order)
    offset = None
    for w in weights:
        slope = rhs_jet(_time_jet(order - 1, offset), y, order - 1, restriction)
        y = y + slope.shift(1, order) * w
        offset = w if offset is None else offset + w
    return y


def picard_substep(
    y: Jet,
    offset: Any,
    weight: Any,
    variant: SchemeVariant,
    order: int,
    restriction: Restriction,
    iterations: int | None = None,
) -> Jet:
    """Resolve one implicit substep by fixed-point iteration on jets.

    With ``iterations`` set, return that iterate without checking convergence.
    """
    midpoint = variant is SchemeVariant.IMPLICIT_MIDPOINT_PATH
    stage_offset = weight / 2.0 if midpoint else weight
    tau = _time_jet(order - 1, stage_offset if offset is None else offset + stage_offset)
    z = y
    limit = iterations if iterations is not None else order + 2
    for count in range(1, limit + 1):
        argument = (y + z) * 0.5 if midpoint else z
        update = y + rhs_jet(tau, argument, order - 1, restriction).shift(1, order) * weight
        if iterations is None:
            gap = update.max_abs_difference(z)
            if gap <= PICARD_TOL * (1.0 + update.max_abs_coefficient()):
                logger.debug("picard substep settled after %d iterations", count)
                return update
        z = update
    if iterations is not None:
        return z
    raise InternalError(f"picard iteration did not settle within {limit} iterations at order {order}")


def _implicit_path_jet(
    weights: Sequence[Any], variant: SchemeVariant, order: int, restriction: Restriction
) -> Jet:
    y = Jet.zero(order)
    offset = None
    for w in weights:
        y = picard_substep(y, offset, w, variant, order, restriction)
        offset = w if offset is None else offset + w
    return y


def runge_kutta_jet(
    tableau_a: Sequence[Sequence[Any]],
    tableau_b: Sequence[Any],
    order: int,
    restriction: Restriction = Restriction.NON_AUTONOMOUS,
) -> Jet:
    increments: list[Jet] = []
    for row in tableau_a:
        argument = Jet.zero(order - 1)
        node = None
        for a_ij, increment in zip(row, increments):
            if not hasattr(a_ij, "shape") and a_ij == 0:
                continue
            argument = argument + increment.truncate(order - 1) * a_ij
            node = a_ij if node is None else node + a_ij
        slope = rhs_jet(_time_jet(order - 1, node), argument, order - 1, restriction)
        increments.append(slope.shift(1, order))
    result = Jet.zero(order)
    for b_i, increment in zip(tableau_b, increments):
        result = result + increment * b_i
    return result


def scheme_jet(
    scheme: SchemeDescriptor, order: int, restriction: Restriction | str = Restriction.NON_AUTONOMOUS
) -> Jet:
    """Jet of y_end - y0 produced by one step of ``scheme``."""
    _check_order(order)
    restriction = Restriction(restriction)
    if scheme.variant is SchemeVariant.EULER_PATH:
        return _euler_path_jet(scheme.weights, order, restriction)
    if scheme.implicit:
        return _implicit_path_jet(scheme.weights, scheme.variant, order, restriction)
    tableau_a, tableau_b = scheme.butcher()
    return runge_kutta_jet(tableau_a, tableau_b, order, restriction)


def problem_targets(derivatives: Sequence[complex], order: int = 3) -> list[complex]:
    """Normalized exact-flow coefficients for an autonomous scalar problem.

    ``derivatives`` holds f, f', f'' at the expansion point. Coefficient k is
    the exact h^k term divided by the matching two-step Euler-path term, so
    the first target is always 1.
    """
    if not 1 <= order <= 3 or len(derivatives) < order:
        raise ArgumentError("problem targets cover orders 1-3 and need f and its first order-1 derivatives")
    values = {(0, b): complex(d) for b, d in enumerate(derivatives)}
    exact = exact_flow_jet(max(order, MIN_ORDER), autonomous_only=True).evaluate(values)
    f = values[(0, 0)]
    f1 = values.get((0, 1), 0j)
    f2 = values.get((0, 2), 0j)
    basis = [f, f * f1 / 2.0, f * f * f2 / 2.0][:order]
    if any(abs(value) == 0.0 for value in basis):
        raise ArgumentError("problem targets are undefined where f, f*f' or f^2*f'' vanish")
    return [complex(exact[k] / basis[k - 1]) for k in range(1, order + 1)]


__all__ = [
    "exact_flow_jet",
    "picard_substep",
    "problem_targets",
    "rhs_jet",
    "runge_kutta_jet",
    "scheme_jet",
]
