from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any, Mapping

import numpy as np

from complexpath.errors import ArgumentError, BlowUpError, CapabilityError, IntegrationError, NumericError
from complexpath.integrators.methods import MethodSpec
from complexpath.integrators.newton import NewtonConfig
from complexpath.integrators.rhs import CountedRhs
from complexpath.observability import metrics_collector

if TYPE_CHECKING:
    from complexpath.problems.model import OdeProblem

logger = logging.getLogger(__name__)

STEP_FIT_TOL = 1e-9


@dataclass(frozen=True)
class IntegrationResult:
    method: str
    dt: float
    times: np.ndarray
    states: np.ndarray
    function_evaluations: int
    jacobian_evaluations: int
    newton_iterations_total: int
    projected: bool

    @property
    def steps(self) -> int:
        return len(self.times) - 1

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self, path: Path, header: Mapping[str, Any] | None = None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        dim = self.states.shape[1]
        with path.open("w", newline="", encoding="utf-8") as handle:
            for key, value in (header or {}).items():
                handle.write(f"# {key}={value}\n")
            writer = csv.writer(handle)
            writer.writerow(["t", *[f"re_y{i + 1}" for i in range(dim)], *[f"im_y{i + 1}" for i in range(dim)]])
            for t, row in zip(self.times, self.states):
                writer.writerow(
                    [format(float(t), ".17g")]
                    + [format(float(v), ".17g") for v in row.real]
                    + [format(float(v), ".17g") for v in row.imag]
                )
        return path


def step_count(span: float, dt: float) -> int:
    if dt <= 0:
        raise ArgumentError(f"dt must be positive, got {dt}")
    if span < 0:
        raise ArgumentError(f"t_end precedes t0 by {-span}")
    n = int(round(span / dt))
    if abs(n * dt - span) > STEP_FIT_TOL * max(1.0, abs(span)):
        raise ArgumentError(f"dt={dt!r} does not divide the interval length {span!r}")
    return n


def integrate(
    problem: OdeProblem,
    method: MethodSpec,
    dt: float,
    t_end: float | None = None,
    newton: NewtonConfig | None = None,
    project: bool | None = None,
) -> IntegrationResult:
    """Repeat macro-steps of ``method`` from problem.t0 to ``t_end``.

    Projection onto the real line after every macro-step follows the method
    unless ``project`` overrides it; it is refused for complex-valued problems.
    """
    t_end = problem.t_end if t_end is None else t_end
    n = step_count(t_end - problem.t0, dt)
    project = method.requires_real_projection if project is None else project
    if project and not problem.real_solution:
        raise CapabilityError(f"{method.name} projects onto real values but {problem.name} has a complex solution")

    rhs = CountedRhs(problem.rhs, problem.jacobian)
    y = np.array(problem.y0, dtype=complex)
    times = problem.t0 + dt * np.arange(n + 1)
    states = np.empty((n + 1, y.size), dtype=complex)
    states[0] = y
    started = time.perf_counter()
    for step in range(n):
        t = float(times[step])
        try:
            y = method.step(rhs, t, y, dt, newton)
        except NumericError as exc:
            if isinstance(exc, BlowUpError):
                metrics_collector.record_blow_up()
            raise IntegrationError(
                f"{method.name} on {problem.name} failed at step {step} (t={t:.6g}): {exc}",
                step,
                t,
                exc.diagnostics,
            ) from exc
        if project:
            y = y.real.astype(complex)
        states[step + 1] = y

    latency_ms = (time.perf_counter() - started) * 1000.0
    metrics_collector.record_integration(n, rhs.evaluations, rhs.newton_iterations, latency_ms)
    logger.debug(
        "%s on %s: %d steps of %.3g, %d evaluations", method.name, problem.name, n, dt, rhs.evaluations
    )
    return IntegrationResult(
        method=method.name,
        dt=dt,
        times=times,
        states=states,
        function_evaluations=rhs.evaluations,
        jacobian_evaluations=rhs.jacobian_evaluations,
        newton_iterations_total=rhs.newton_iterations,
        projected=project,
    )
