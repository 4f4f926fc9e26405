"""Largest monotone step sizes on scalar decay problems.

A step dt is admissible for state u when one macro-step does not increase
|u|. ``max_ssp_step`` returns the largest dt such that every scanned step up
to it is admissible, refined by bisection past the last admissible sample.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Sequence

import numpy as np

from complexpath.errors import ArgumentError
from complexpath.integrators import CountedRhs, MethodSpec, reference_methods
from complexpath.paths import lookup
from complexpath.paths.model import ComplexPath

logger = logging.getLogger(__name__)

DT_CAP = 100.0
SCAN_POINTS = 10_000
BISECTION_TOL = 1e-8
GROWTH_SLACK = 1e-12
DEFAULT_SAMPLES = 200

ScalarRhs = Callable[[Any], Any]


class SspStatus(str, Enum):
    BOUNDED = "bounded"
    CAPPED = "capped"
    VIOLATED = "violated"


@dataclass(frozen=True)
class SspLimit:
    dt_max: float
    status: SspStatus


@dataclass(frozen=True)
class SspMethod:
    name: str
    method: MethodSpec
    project: bool


@dataclass(frozen=True, eq=False)
class SspCurve:
    u: np.ndarray
    methods: tuple[str, ...]
    dt_max: dict[str, np.ndarray] = field(default_factory=dict)
    status: dict[str, tuple[SspStatus, ...]] = field(default_factory=dict)
    dt_cap: float = DT_CAP
    variant: str = "forward-projected"

    def __post_init__(self) -> None:
        if np.any(np.diff(self.u) <= 0):
            raise ArgumentError("SSP sample grid must be strictly increasing")

    def rows(self) -> list[list[float]]:
        return [[float(u), *[float(self.dt_max[name][i]) for name in self.methods]] for i, u in enumerate(self.u)]

    def large_state_band(self, f: ScalarRhs | None = None) -> np.ndarray:
        """Mask of states whose forward Euler bound lies beyond the step cap."""
        f = decay_rhs if f is None else f
        return np.array([fe_ssp_bound(f, float(u)) >= self.dt_cap for u in self.u], dtype=bool)


def decay_rhs(y: Any) -> Any:
    """f(y) = -y exp(-y)."""
    return -y * np.exp(-y)


def fe_ssp_bound(f: ScalarRhs, u: float) -> float:
    """2 / |f(u)/u|; ``math.inf`` where the ratio vanishes."""
    fu = complex(f(u))
    if u == 0 or fu == 0:
        return math.inf
    return 2.0 / abs(fu / u)


def path_states(path: ComplexPath, f: ScalarRhs, u: float, dt: float) -> list[complex]:
    """States u^0..u^{n-1} at which the path's substeps evaluate f."""
    states = [complex(u)]
    for w in path.weights[:-1]:
        states.append(states[-1] + w * dt * complex(f(states[-1])))
    return states


def strict_substep_bound(path: ComplexPath, f: ScalarRhs, u_states: Sequence[complex]) -> float:
    if len(u_states) != len(path.weights):
        raise ArgumentError(f"need one state per substep ({len(path.weights)}), got {len(u_states)}")
    bound = math.inf
    for w, state in zip(path.weights, u_states):
        state = complex(state)
        if state == 0:
            raise ArgumentError("strict substep bound is undefined at a zero state")
        ratio = complex(f(state)) / state
        denominator = abs(w) ** 2 * abs(ratio) ** 2
        if denominator == 0:
            continue
        numerator = max(-2.0 * (w * ratio).real, 0.0)
        bound = min(bound, numerator / denominator)
    return bound


def _admissible(method: SspMethod, f: ScalarRhs, u: float, dt: np.ndarray) -> np.ndarray:
    rhs = CountedRhs(lambda t, y: f(y))
    y = np.full(dt.shape, complex(u))
    with np.errstate(over="ignore", invalid="ignore"):
        nxt = method.method.step(rhs, 0.0, y, dt, check_finite=False)
        if method.project:
            nxt = nxt.real
        size = np.abs(nxt)
    return np.isfinite(size) & (size <= abs(u) * (1.0 + GROWTH_SLACK))


def max_ssp_step(
    method: SspMethod,
    u: float,
    f: ScalarRhs = decay_rhs,
    dt_cap: float = DT_CAP,
    scan_points: int = SCAN_POINTS,
    tol: float = BISECTION_TOL,
) -> SspLimit:
    if u == 0:
        raise ArgumentError("SSP step is undefined at u = 0")
    if complex(f(u)) == 0:
        return SspLimit(dt_cap, SspStatus.CAPPED)
    grid = dt_cap / scan_points * np.arange(1, scan_points + 1)
    ok = _admissible(method, f, u, grid)
    bad = np.flatnonzero(~ok)
    if not bad.size:
        return SspLimit(dt_cap, SspStatus.CAPPED)
    first = int(bad[0])
    if first == 0:
        return SspLimit(0.0, SspStatus.VIOLATED)
    lo, hi = float(grid[first - 1]), float(grid[first])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _admissible(method, f, u, np.array([mid]))[0]:
            lo = mid
        else:
            hi = mid
    return SspLimit(lo, SspStatus.BOUNDED)


def prefix_violation(
    method: SspMethod,
    u: float,
    dt_max: float,
    f: ScalarRhs = decay_rhs,
    dt_cap: float = DT_CAP,
    scan_points: int = SCAN_POINTS,
    refine: int = 10,
) -> float | None:
    """Re-scan (0, dt_max] at ``refine`` times the scan resolution; first failing step or None."""
    if dt_max <= 0:
        return None
    count = max(int(math.ceil(dt_max / dt_cap * scan_points * refine)), 1)
    grid = np.linspace(0.0, dt_max, count + 1)[1:]
    bad = np.flatnonzero(~_admissible(method, f, u, grid))
    return float(grid[bad[0]]) if bad.size else None


def ssp_variant(reverse: bool = False, project: bool = True) -> str:
    return f"{'reversed' if reverse else 'forward'}-{'projected' if project else 'unprojected'}"


def complex_two_step(reverse: bool = False, project: bool = True) -> SspMethod:
    path = lookup("complex-2-linear")
    if reverse:
        path = path.permuted([1, 0], "complex-2-linear-reversed")
    method = MethodSpec.from_path(path)
    method = dataclasses.replace(method, scheme=dataclasses.replace(method.scheme, real_projection=project))
    suffix = "" if project else "-unprojected"
    return SspMethod(f"{path.name}{suffix}", method, project)


def default_ssp_methods(reverse: bool = False, project: bool = True) -> list[SspMethod]:
    references = reference_methods()
    return [
        SspMethod("midpoint2", references["midpoint2"], False),
        SspMethod("ssprk2", references["ssprk2"], False),
        complex_two_step(reverse, project),
    ]


def ssp_curve(
    f: ScalarRhs = decay_rhs,
    u_values: np.ndarray | None = None,
    methods: Sequence[SspMethod] | None = None,
    dt_cap: float = DT_CAP,
    variant: str = "forward-projected",
) -> SspCurve:
    u_values = np.logspace(-1.0, 1.0, DEFAULT_SAMPLES) if u_values is None else np.asarray(u_values, dtype=float)
    methods = list(methods) if methods is not None else default_ssp_methods()
    dt_max: dict[str, np.ndarray] = {}
    status: dict[str, tuple[SspStatus, ...]] = {}
    for method in methods:
        limits = [max_ssp_step(method, float(u), f, dt_cap) for u in u_values]
        dt_max[method.name] = np.array([limit.dt_max for limit in limits])
        status[method.name] = tuple(limit.status for limit in limits)
        logger.info("ssp curve for %s: max dt %.4g", method.name, float(np.max(dt_max[method.name])))
    return SspCurve(u_values, tuple(m.name for m in methods), dt_max, status, dt_cap, variant)
