"""Choose the free coefficients of a stability polynomial for the longest stable ray.

The first p coefficients stay pinned at 1/k!; the remaining s - p are searched
with a coarse grid followed by seeded Nelder-Mead restarts.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from complexpath.errors import ArgumentError
from complexpath.stability.polynomial import StabilityPolynomial
from complexpath.stability.region import ray_extent, unit_direction

logger = logging.getLogger(__name__)

NEGATIVE_REAL_AXIS = "negative-real-axis"
GRID_POINTS = 2000
DEFAULT_STARTS = 20
MAX_FREE_PARAMETERS = 4


@dataclass(frozen=True)
class OptimizedPolynomial:
    polynomial: StabilityPolynomial
    extent: float
    direction: complex
    evaluations: int


def objective_direction(objective: str | complex) -> complex:
    if isinstance(objective, str):
        if objective == NEGATIVE_REAL_AXIS:
            return -1 + 0j
        try:
            return unit_direction(complex(objective.replace(" ", "").replace("i", "j")))
        except ValueError as exc:
            raise ArgumentError(f"unknown objective {objective!r}") from exc
    return unit_direction(objective)


def _polynomial(s: int, p: int, free: np.ndarray, allow_complex: bool, name: str) -> StabilityPolynomial:
    pinned = [1.0 / math.factorial(k) for k in range(p + 1)]
    n = s - p
    values = free[:n] + 1j * free[n:] if allow_complex else free[:n] + 0j
    return StabilityPolynomial.explicit([*pinned, *values], name)


def _bounds(s: int, p: int, allow_complex: bool) -> list[tuple[float, float]]:
    real = [(0.0, 1.0 / math.factorial(k)) for k in range(p + 1, s + 1)]
    imag = [(-1.0 / math.factorial(k), 1.0 / math.factorial(k)) for k in range(p + 1, s + 1)]
    return real + imag if allow_complex else real


def optimize_free_coefficients(
    s: int,
    p: int,
    objective: str | complex = NEGATIVE_REAL_AXIS,
    allow_complex: bool = False,
    seed: int = 0,
    starts: int = DEFAULT_STARTS,
    grid_points: int = GRID_POINTS,
) -> OptimizedPolynomial:
    if not 1 <= p <= s:
        raise ArgumentError(f"need 1 <= p <= s, got s={s}, p={p}")
    direction = objective_direction(objective)
    name = f"optimized-s{s}-p{p}{'-complex' if allow_complex else ''}"
    if p == s:
        phi = StabilityPolynomial.taylor_polynomial(s)
        pinned = StabilityPolynomial.explicit(phi.numerator, name)
        return OptimizedPolynomial(pinned, ray_extent(pinned, direction), direction, 1)

    bounds = _bounds(s, p, allow_complex)
    if len(bounds) > MAX_FREE_PARAMETERS:
        raise ArgumentError(f"at most {MAX_FREE_PARAMETERS} free real parameters are supported, got {len(bounds)}")
    evaluations = 0

    def extent(x: np.ndarray) -> float:
        nonlocal evaluations
        evaluations += 1
        value = ray_extent(_polynomial(s, p, np.asarray(x), allow_complex, name), direction)
        return value if math.isfinite(value) else 0.0

    per_axis = max(2, int(grid_points ** (1.0 / len(bounds))))
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in bounds]
    candidates = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    scores = np.array([extent(x) for x in candidates])
    ranked = np.argsort(-scores, kind="stable")[:starts]
    spacing = np.array([(hi - lo) / (per_axis - 1) for lo, hi in bounds])

    rng = np.random.default_rng(seed)
    best_x = candidates[ranked[0]]
    best_value = float(scores[ranked[0]])
    seeds = [candidates[c] for c in ranked]
    if allow_complex:
        # the real optimum is a feasible point of the complex search
        real = optimize_free_coefficients(s, p, direction, False, seed, starts, grid_points)
        n = s - p
        real_x = np.concatenate([np.real(real.polynomial.numerator[p + 1 :]), np.zeros(n)])
        seeds.insert(0, real_x)
        evaluations += real.evaluations
        if real.extent > best_value:
            best_x, best_value = real_x, real.extent
    for index, start in enumerate(seeds):
        x0 = start + (rng.uniform(-0.5, 0.5, spacing.size) * spacing if index else 0.0)
        result = minimize(
            lambda x: -extent(x),
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-10, "maxiter": 400},
        )
        value = -float(result.fun)
        logger.debug("start %d: extent %.6f (%s)", index, value, result.message)
        if value > best_value:
            best_x, best_value = np.asarray(result.x), value

    phi = _polynomial(s, p, best_x, allow_complex, name)
    logger.info("optimized s=%d p=%d along %s: extent %.6f", s, p, direction, best_value)
    return OptimizedPolynomial(phi, best_value, direction, evaluations)


def cubic_polynomial(k: complex, name: str = "") -> StabilityPolynomial:
    """1 + z + z^2/2 + k z^3, the three-step second-order family."""
    return StabilityPolynomial.explicit([1.0, 1.0, 0.5, k], name or f"cubic-{k}")


def brute_force_cubic(
    objective: str | complex = NEGATIVE_REAL_AXIS,
    k_range: Sequence[float] = (0.0, 1.0 / 6.0),
    step: float = 1e-4,
) -> tuple[float, float]:
    """Best real k on a uniform grid; returns (k, extent)."""
    direction = objective_direction(objective)
    lo, hi = k_range
    if not lo < hi or step <= 0:
        raise ArgumentError(f"invalid k grid {k_range!r} with step {step}")
    ks = np.arange(lo, hi + 0.5 * step, step)
    extents = np.array([ray_extent(cubic_polynomial(float(k)), direction) for k in ks])
    best = int(np.argmax(extents))
    return float(ks[best]), float(extents[best])
