from __future__ import annotations

import itertools
import logging
import math
import time
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from complexpath.errors import ArgumentError, NumericError
from complexpath.numerics import cluster_solutions, damped_newton
from complexpath.observability import metrics_collector
from complexpath.paths.model import ComplexPath, ValidityClass
from complexpath.paths.symmetric import elementary_symmetric_all
from complexpath.paths.verify import verify_path

logger = logging.getLogger(__name__)

MAX_LINEAR_STEPS = 12
NEWTON_STARTS = 100
NEWTON_BOX = 2.0
DEDUP_TOL = 1e-6
RELAXED_ACCEPT_TOL = 1e-8
STAGE_SQUARE_TARGET = 1.0 / 3.0


def polish_roots(coeffs: np.ndarray, roots: np.ndarray, sweeps: int = 2) -> np.ndarray:
    derivative = P.polyder(coeffs)
    for _ in range(sweeps):
        slope = P.polyval(roots, derivative)
        safe = np.abs(slope) > 0
        roots = np.where(safe, roots - P.polyval(roots, coeffs) / np.where(safe, slope, 1.0), roots)
    return roots


def _pair_conjugates(roots: np.ndarray, n: int) -> np.ndarray:
    real = [complex(r.real) for r in roots if abs(r.imag) <= 1e-13]
    upper = [complex(r) for r in roots if r.imag > 1e-13]
    paired = real + upper + [r.conjugate() for r in upper]
    if len(paired) != n:
        raise NumericError(
            "roots of the linear order-condition polynomial are not conjugate-paired",
            {"n": n, "roots": [complex(r) for r in roots]},
        )
    return np.array(sorted(paired, key=lambda r: (r.real, r.imag)), dtype=complex)


def linear_path_weights(n: int) -> np.ndarray:
    """Weights satisfying e_k = 1/k! for k = 1..n, sorted by (Re, Im)."""
    if not 1 <= n <= MAX_LINEAR_STEPS:
        raise ArgumentError(f"n must lie in [1, {MAX_LINEAR_STEPS}], got {n}")
    # increasing powers: the coefficient of z^(n-k) is (-1)^k / k!
    coeffs = np.array([(-1.0) ** (n - j) / math.factorial(n - j) for j in range(n + 1)])
    roots = polish_roots(coeffs, P.polyroots(coeffs).astype(complex))
    weights = _pair_conjugates(roots, n)
    e = elementary_symmetric_all(weights)
    residual = max(abs(e[k] - 1.0 / math.factorial(k)) for k in range(1, n + 1))
    if not np.isfinite(residual) or residual > 1e-10:
        raise NumericError(
            f"linear path roots for n={n} miss the order conditions",
            {"n": n, "max_residual": float(residual), "roots": [complex(w) for w in weights]},
        )
    return weights


def solve_linear_path(n: int, max_paths: int | None = None) -> list[ComplexPath]:
    """All distinct orderings of the n-step linear weights, in canonical order.

    The count grows like n!; pass ``max_paths`` to stop early for large n.
    """
    weights = linear_path_weights(n)
    paths: list[ComplexPath] = []
    seen: set[tuple[float, ...]] = set()
    for order in itertools.permutations(range(n)):
        ordered = tuple(weights[i] for i in order)
        key = tuple(round(part, 9) for w in ordered for part in (w.real, w.imag))
        if key in seen:
            continue
        seen.add(key)
        paths.append(
            ComplexPath(ordered, n, ValidityClass.LINEAR_ONLY, False, f"complex-{n}-linear-{len(paths)}")
        )
        if max_paths is not None and len(paths) >= max_paths:
            break
    return paths


def _relaxed_path3_residual(x: np.ndarray) -> np.ndarray:
    w1 = x[0] + 1j * x[1]
    w2 = x[2] + 1j * x[3]
    w3 = x[4] + 1j * x[5]
    e1 = w1 + w2 + w3
    e2 = w1 * w2 + w1 * w3 + w2 * w3
    e3 = w1 * w2 * w3
    moment = w1 * w1 * w2 + w3 * (w1 + w2) ** 2
    return np.array(
        [
            e1.real - 1.0,
            e1.imag,
            e2.real - 0.5,
            e2.imag,
            e3.real - 1.0 / 6.0,
            moment.real - STAGE_SQUARE_TARGET,
        ]
    )


def _as_nonlinear(weights: Sequence[complex], name: str) -> ComplexPath:
    return ComplexPath(tuple(weights), 3, ValidityClass.NONLINEAR, True, name)


def nonlinear_linear_permutations() -> list[ComplexPath]:
    """The orderings of the 3-step linear weights that also meet the relaxed nonlinear conditions."""
    kept: list[ComplexPath] = []
    for path in solve_linear_path(3):
        candidate = _as_nonlinear(path.weights, "")
        if verify_path(candidate, 3, relaxed=True).max_abs_residual < RELAXED_ACCEPT_TOL:
            kept.append(candidate)
    return kept


def solve_relaxed_path3(seed: int = 0, starts: int = NEWTON_STARTS) -> list[ComplexPath]:
    started = time.perf_counter()
    candidates = [np.array([p for w in path.weights for p in (w.real, w.imag)]) for path in nonlinear_linear_permutations()]
    from_permutations = len(candidates)

    rng = np.random.default_rng(seed)
    for start in range(starts):
        x0 = rng.uniform(-NEWTON_BOX, NEWTON_BOX, size=6)
        outcome = damped_newton(_relaxed_path3_residual, x0)
        metrics_collector.record_solver_start(outcome.converged)
        logger.debug("relaxed path3 start %d: %s residual=%.3e", start, outcome.reason, outcome.residual_norm)
        if outcome.converged:
            candidates.append(outcome.x)

    unique = cluster_solutions(candidates, DEDUP_TOL)
    paths = []
    for x in unique:
        w1 = complex(x[0], x[1])
        w2 = complex(x[2], x[3])
        paths.append(_as_nonlinear((w1, w2, 1.0 - w1 - w2), ""))
    if not paths:
        raise NumericError("no 3-step path satisfies the relaxed nonlinear conditions", {"starts": starts})
    paths.sort(key=ComplexPath.sort_key)
    named = [path.with_class(path.validity_class, 3, True, f"complex-3-relaxed-{i}") for i, path in enumerate(paths)]
    logger.info(
        "relaxed 3-step search: %d permutation paths, %d distinct solutions in %.2fs",
        from_permutations,
        len(named),
        time.perf_counter() - started,
    )
    return named


def _relaxed_flags(relaxed: bool | Sequence[bool], orders: int) -> list[bool]:
    if isinstance(relaxed, bool):
        return [False] + [relaxed] * (orders - 1)
    flags = list(relaxed)
    if len(flags) != orders:
        raise ArgumentError(f"need one relaxed flag per order ({orders}), got {len(flags)}")
    if flags[0]:
        raise ArgumentError("the first-order condition closes the path and cannot be relaxed")
    return flags


def solve_problem_specific_path(
    expansion_coeffs: Sequence[complex],
    relaxed: bool | Sequence[bool] = True,
    seed: int = 0,
    starts: int = NEWTON_STARTS,
) -> list[ComplexPath]:
    """Two-step paths matching problem-specific expansion targets.

    Targets are normalised so that the conditions read ``w1 + w2 = c1``,
    ``2 w1 w2 = c2`` and ``w1^2 w2 = c3``. With ``relaxed=True`` every
    condition past the first compares real parts only.
    """
    targets = [complex(c) for c in expansion_coeffs]
    if not 2 <= len(targets) <= 3:
        raise ArgumentError(f"two-step paths take 2 or 3 targets, got {len(targets)}")
    if abs(targets[0] - 1.0) > 1e-12:
        raise ArgumentError(f"the first target must be 1 for the path to close, got {targets[0]!r}")
    flags = _relaxed_flags(relaxed, len(targets))

    def residual(x: np.ndarray) -> np.ndarray:
        w1 = x[0] + 1j * x[1]
        w2 = 1.0 - w1
        values = [2.0 * w1 * w2 - targets[1]]
        if len(targets) == 3:
            values.append(w1 * w1 * w2 - targets[2])
        rows = []
        for value, flag in zip(values, flags[1:]):
            rows.append(value.real)
            if not flag:
                rows.append(value.imag)
        return np.array(rows)

    rng = np.random.default_rng(seed)
    solutions = []
    for _ in range(starts):
        outcome = damped_newton(residual, rng.uniform(-NEWTON_BOX, NEWTON_BOX, size=2))
        metrics_collector.record_solver_start(outcome.converged)
        if outcome.converged:
            solutions.append(outcome.x)
    unique = cluster_solutions(solutions, DEDUP_TOL)
    if not unique:
        raise NumericError("no two-step path matches the targets", {"targets": targets, "starts": starts})
    paths = []
    for x in unique:
        w1 = complex(x[0], x[1])
        paths.append(ComplexPath((w1, 1.0 - w1), len(targets), ValidityClass.PROBLEM_SPECIFIC, True))
    paths.sort(key=ComplexPath.sort_key)
    return [path.with_class(path.validity_class, path.order_claim, True, f"problem-2step-{i}") for i, path in enumerate(paths)]
