"""Experiment configuration and runners behind the command-line subcommands.

Runners return plain result objects; writing CSV and plot scripts is left to
``complexpath.output`` so a runner can be exercised without touching disk.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal, Mapping, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from complexpath import __version__
from complexpath.config import COMPOSITE_FIXTURE_NAME, ConfigError
from complexpath.errors import ArgumentError, BlowUpError, CheckFailure, IntegrationError, NumericError
from complexpath.integrators import MethodSpec, fair_step_sizes, integrate, resolve_method
from complexpath.order_conditions import OrderReport, SchemeDescriptor, order_report, solve_composite_rk23
from complexpath.paths import ComplexPath, lookup, solve_linear_path, verify_path
from complexpath.problems import OdeProblem, build_problem, reference_solution
from complexpath.ssp import SspCurve, SspStatus, default_ssp_methods, ssp_curve, ssp_variant
from complexpath.stability import (
    NEGATIVE_REAL_AXIS,
    RegionRaster,
    StabilityPolynomial,
    Window,
    cubic_polynomial,
    objective_direction,
    optimize_free_coefficients,
    ray_extent,
    raster_region,
    stability_function,
)
from complexpath.storage import FixtureStore

logger = logging.getLogger(__name__)

ExperimentKind = Literal["converge", "stability", "paths", "ssp", "schrodinger", "solve-composite"]
StabilityScaling = Literal["raw", "per-stage"]
NormKind = Literal["inf", "2", "relative"]

MIN_FIT_POINTS = 3
SCHRODINGER_METHODS = ("ralston3", "complex-3-linear")
SCHRODINGER_RATIO_BAND = (0.2, 5.0)
SCHRODINGER_FINEST_TOL = 1e-8
PATH_CHECK_TOL = 1e-10


class Ladder(BaseModel):
    """Geometric step ladder base * ratio**k for k = 0..count-1."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    base: float = Field(0.5, gt=0)
    ratio: float = Field(0.5, gt=0, lt=1)
    count: int = Field(7, ge=MIN_FIT_POINTS, le=40)

    @model_validator(mode="after")
    def _strictly_decreasing(self) -> Ladder:
        steps = self.steps()
        if any(not later < earlier for earlier, later in zip(steps, steps[1:])) or steps[-1] <= 0:
            raise ValueError("step ladder must be strictly decreasing and positive")
        return self

    def steps(self) -> list[float]:
        return [self.base * self.ratio**k for k in range(self.count)]


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: ExperimentKind
    problems: list[str] = Field(default_factory=list)
    problem_params: dict[str, dict[str, Any]] = Field(default_factory=dict)
    methods: list[str] = Field(default_factory=list)
    ladder: Ladder = Field(default_factory=Ladder)
    t_end: float | None = Field(None, gt=0)
    fair: bool = False
    seed: int = Field(0, ge=0)
    out_dir: str | None = None
    norm: NormKind = "inf"
    expect: dict[str, float] = Field(default_factory=dict)
    check_tol: float = Field(0.25, gt=0)

    window: str = "-4,1,-3,3"
    resolution: tuple[int, int] = (401, 301)
    rays: list[str] = Field(default_factory=lambda: [NEGATIVE_REAL_AXIS])
    optimized: list[tuple[int, int]] = Field(default_factory=list)
    complex_optimized: bool = False
    cubic_k: list[str] = Field(default_factory=list)
    scaling: StabilityScaling = "raw"

    path_steps: list[int] = Field(default_factory=lambda: [1, 2, 3])

    ssp_samples: int = Field(200, ge=2)
    ssp_reverse: bool = False
    ssp_project: bool = True

    starts: int | None = Field(None, ge=1)
    real_only: bool = False

    @field_validator("window")
    @classmethod
    def _window_parses(cls, value: str) -> str:
        Window.parse(value)
        return value

    @field_validator("path_steps")
    @classmethod
    def _path_steps_positive(cls, value: list[int]) -> list[int]:
        if any(n < 1 for n in value):
            raise ValueError("path step counts must be positive")
        return value

    def params_for(self, problem: str) -> dict[str, Any]:
        params = dict(self.problem_params.get(problem, {}))
        if self.t_end is not None:
            params["t_end"] = self.t_end
        return params


DEFAULTS: dict[str, dict[str, Any]] = {
    "converge": {"problems": ["dahlquist"], "methods": ["complex-2-linear"]},
    "stability": {
        "methods": ["euler-1", "complex-2-linear", "complex-3-linear"],
        "optimized": [(3, 1), (3, 2), (3, 3)],
    },
    "paths": {},
    "ssp": {},
    "schrodinger": {
        "problems": ["schrodinger"],
        "methods": list(SCHRODINGER_METHODS),
        "ladder": {"base": 1e-3, "ratio": 0.5, "count": 4},
        "fair": True,
    },
    "solve-composite": {},
}


def build_config(
    kind: str, document: Mapping[str, Any] | None = None, overrides: Mapping[str, Any] | None = None
) -> ExperimentConfig:
    """Kind defaults, then the config document, then non-None command-line overrides."""
    payload: dict[str, Any] = dict(DEFAULTS.get(kind, {}))
    payload.update(document or {})
    if payload.get("kind", kind) != kind:
        raise ConfigError(f"config file is for {payload['kind']!r}, not {kind!r}")
    payload["kind"] = kind
    payload.update({key: value for key, value in (overrides or {}).items() if value is not None})
    try:
        return ExperimentConfig.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError(f"invalid {kind} configuration: {exc}") from exc


def load_config(path: Path | None, kind: str, overrides: Mapping[str, Any] | None = None) -> ExperimentConfig:
    document: dict[str, Any] = {}
    if path is not None:
        try:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(document, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
    return build_config(kind, document, overrides)


def config_hash(config: ExperimentConfig) -> str:
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def run_header(config: ExperimentConfig) -> dict[str, str]:
    return {"version": __version__, "config_hash": config_hash(config), "seed": str(config.seed)}


def error_norm(computed: np.ndarray, reference: np.ndarray, norm: NormKind = "inf") -> float:
    diff = np.abs(np.asarray(computed) - np.asarray(reference))
    if norm == "inf":
        return float(np.max(diff))
    if norm == "2":
        return float(np.sqrt(np.mean(diff**2)))
    scale = float(np.max(np.abs(reference)))
    if scale == 0:
        raise ArgumentError("relative error is undefined for a zero reference")
    return float(np.max(diff)) / scale


def estimate_order(errors: Sequence[float], dts: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(dt) over the finite positive pairs."""
    if len(errors) != len(dts):
        raise ArgumentError(f"{len(errors)} errors for {len(dts)} step sizes")
    pairs = [
        (math.log(dt), math.log(err))
        for err, dt in zip(errors, dts)
        if err is not None and dt is not None and math.isfinite(err) and math.isfinite(dt) and err > 0 and dt > 0
    ]
    if len(pairs) < MIN_FIT_POINTS:
        raise ArgumentError(f"need at least {MIN_FIT_POINTS} valid (dt, error) pairs, got {len(pairs)}")
    x, y = np.array(pairs).T
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def fit_step(span: float, dt: float) -> float:
    """Nearest step that divides ``span`` exactly."""
    n = max(1, int(round(span / dt)))
    return span / n


@dataclass(frozen=True)
class ConvergenceRow:
    dt: float
    error: float
    function_evaluations: int
    status: str = "ok"


@dataclass
class ConvergenceTable:
    problem: str
    method: str
    norm: str
    expected_order: int
    rows: list[ConvergenceRow] = field(default_factory=list)
    slope: float = math.nan

    @property
    def label(self) -> str:
        return f"{self.problem}/{self.method}"

    def fit(self) -> float:
        usable = [row for row in self.rows if row.status == "ok"]
        skipped = len(self.rows) - len(usable)
        if skipped:
            logger.warning("%s: %d row(s) excluded from the slope fit", self.label, skipped)
        self.slope = estimate_order([row.error for row in usable], [row.dt for row in usable])
        return self.slope


def _problem(config: ExperimentConfig, name: str) -> OdeProblem:
    return build_problem(name, **config.params_for(name))


def convergence_table(
    problem: OdeProblem,
    method: MethodSpec,
    dts: Sequence[float],
    reference: np.ndarray,
    norm: NormKind = "inf",
) -> ConvergenceTable:
    table = ConvergenceTable(problem.name, method.name, norm, method.order)
    span = problem.t_end - problem.t0
    for requested in dts:
        dt = fit_step(span, requested)
        try:
            result = integrate(problem, method, dt)
        except IntegrationError as exc:
            logger.warning("%s at dt=%.3g failed: %s", table.label, dt, exc)
            status = "blow-up" if isinstance(exc.__cause__, BlowUpError) else "failed"
            table.rows.append(ConvergenceRow(dt, math.nan, 0, status))
            continue
        error = error_norm(result.final_state, reference, norm)
        table.rows.append(ConvergenceRow(dt, error, result.function_evaluations))
    table.fit()
    logger.info("%s: slope %.3f over %d step sizes", table.label, table.slope, len(table.rows))
    return table


def run_converge(config: ExperimentConfig, store: FixtureStore | None = None) -> list[ConvergenceTable]:
    if not config.problems or not config.methods:
        raise ArgumentError("a convergence run needs at least one problem and one method")
    methods = [resolve_method(name, store) for name in config.methods]
    tables: list[ConvergenceTable] = []
    for name in config.problems:
        problem = _problem(config, name)
        reference = reference_solution(problem, store)
        ladder = config.ladder.steps()
        for method in methods:
            dts = ladder
            if config.fair:
                dts = [fair_step_sizes(methods, dt)[method.name] for dt in ladder]
            tables.append(convergence_table(problem, method, dts, reference, config.norm))
    return tables


def check_convergence(tables: Sequence[ConvergenceTable], config: ExperimentConfig) -> None:
    misses = []
    for table in tables:
        expected = config.expect.get(table.label, table.expected_order)
        if not abs(table.slope - expected) <= config.check_tol:
            misses.append(f"{table.label}: slope {table.slope:.3f}, expected {expected} +/- {config.check_tol}")
    if misses:
        raise CheckFailure("; ".join(misses))


@dataclass(frozen=True)
class RayExtent:
    name: str
    ray: str
    extent: float


@dataclass
class StabilityResult:
    rasters: list[RegionRaster] = field(default_factory=list)
    extents: list[RayExtent] = field(default_factory=list)
    scaling: StabilityScaling = "raw"

    def extent(self, name: str, ray: str = NEGATIVE_REAL_AXIS) -> float:
        for row in self.extents:
            if row.name == name and row.ray == ray:
                return row.extent
        raise ArgumentError(f"no extent recorded for {name!r} along {ray!r}")


def stability_polynomials(config: ExperimentConfig) -> list[StabilityPolynomial]:
    polynomials = [stability_function(lookup(name)) for name in config.methods]
    objective = config.rays[0] if config.rays else NEGATIVE_REAL_AXIS
    for s, p in config.optimized:
        found = optimize_free_coefficients(s, p, objective, config.complex_optimized, config.seed)
        polynomials.append(found.polynomial)
    for k in config.cubic_k:
        value = complex(k.replace(" ", "").replace("i", "j"))
        polynomials.append(cubic_polynomial(value, f"cubic-{k}"))
    return polynomials


def run_stability(config: ExperimentConfig) -> StabilityResult:
    window = Window.parse(config.window)
    result = StabilityResult(scaling=config.scaling)
    for phi in stability_polynomials(config):
        if config.scaling == "per-stage":
            phi = phi.per_stage()
        result.rasters.append(raster_region(phi, window, config.resolution))
        for ray in config.rays:
            extent = ray_extent(phi, objective_direction(ray))
            result.extents.append(RayExtent(phi.name, ray, extent))
            logger.info("%s along %s: extent %.6g", phi.name, ray, extent)
    return result


def check_stability(result: StabilityResult, config: ExperimentConfig) -> None:
    misses = []
    for label, expected in config.expect.items():
        name, _, ray = label.partition("@")
        found = result.extent(name, ray or NEGATIVE_REAL_AXIS)
        if not abs(found - expected) <= config.check_tol:
            misses.append(f"{label}: extent {found:.6g}, expected {expected} +/- {config.check_tol}")
    if misses:
        raise CheckFailure("; ".join(misses))


@dataclass(frozen=True)
class PathRow:
    path: ComplexPath
    max_residual: float


def run_paths(config: ExperimentConfig) -> list[PathRow]:
    rows: list[PathRow] = []
    for n in config.path_steps:
        for path in solve_linear_path(n):
            rows.append(PathRow(path, verify_path(path, n).max_abs_residual))
    for name in config.methods:
        path = lookup(name)
        report = verify_path(path, path.order_claim, relaxed=path.requires_real_projection)
        rows.append(PathRow(path, report.max_abs_residual))
    logger.info("emitted %d paths", len(rows))
    return rows


def check_paths(rows: Sequence[PathRow], config: ExperimentConfig) -> None:
    bad = [f"{row.path.name}: residual {row.max_residual:.3e}" for row in rows if row.max_residual > PATH_CHECK_TOL]
    if bad:
        raise CheckFailure("; ".join(bad))


def run_ssp(config: ExperimentConfig) -> SspCurve:
    u_values = np.logspace(-1.0, 1.0, config.ssp_samples)
    methods = default_ssp_methods(config.ssp_reverse, config.ssp_project)
    variant = ssp_variant(config.ssp_reverse, config.ssp_project)
    return ssp_curve(u_values=u_values, methods=methods, variant=variant)


def check_ssp(curve: SspCurve, config: ExperimentConfig) -> None:
    """Over the large-state band the complex curve must not fall below SSPRK2 and must beat it somewhere.

    The band holds the states whose forward Euler bound already exceeds the step
    cap; below it the two curves cross more than once.
    """
    complex_name = curve.methods[-1]
    band = curve.large_state_band()
    if not np.any(band):
        raise CheckFailure(f"no sampled state has a forward Euler bound beyond the cap {curve.dt_cap:g}")
    ours = curve.dt_max[complex_name][band]
    theirs = curve.dt_max["ssprk2"][band]
    if np.any(ours < theirs * (1.0 - 1e-9)) or not np.any(ours > theirs * (1.0 + 1e-9)):
        first = float(curve.u[band][0])
        raise CheckFailure(f"{complex_name} does not dominate ssprk2 for u >= {first:.4g}")
    if any(status is SspStatus.VIOLATED for status in curve.status[complex_name]):
        raise CheckFailure(f"{complex_name} violates monotonicity at the smallest scanned step")


@dataclass(frozen=True)
class ComparisonRow:
    dt: float
    errors: tuple[float, ...]
    evaluations: tuple[int, ...]


@dataclass
class SchrodingerComparison:
    methods: tuple[str, ...]
    rows: list[ComparisonRow] = field(default_factory=list)


def run_schrodinger_compare(config: ExperimentConfig) -> SchrodingerComparison:
    names = config.methods or list(SCHRODINGER_METHODS)
    if len(names) != 2:
        raise ArgumentError(f"the comparison runs exactly two methods, got {names}")
    methods = [resolve_method(name) for name in names]
    problem = _problem(config, config.problems[0] if config.problems else "schrodinger")
    exact = problem.exact_at(problem.t_end)
    span = problem.t_end - problem.t0
    comparison = SchrodingerComparison(tuple(m.name for m in methods))
    for dt in config.ladder.steps():
        steps = fair_step_sizes(methods, dt) if config.fair else {m.name: dt for m in methods}
        results = [integrate(problem, m, fit_step(span, steps[m.name])) for m in methods]
        comparison.rows.append(
            ComparisonRow(
                dt,
                tuple(error_norm(r.final_state, exact, "inf") for r in results),
                tuple(r.function_evaluations for r in results),
            )
        )
        logger.info("schrodinger dt=%.3g: errors %s", dt, comparison.rows[-1].errors)
    return comparison


def check_schrodinger(comparison: SchrodingerComparison, config: ExperimentConfig) -> None:
    lo, hi = SCHRODINGER_RATIO_BAND
    misses = []
    for row in comparison.rows:
        if len(set(row.evaluations)) != 1:
            misses.append(f"dt={row.dt:g}: evaluation counts differ {row.evaluations}")
        first, second = row.errors
        if not lo <= first / second <= hi:
            misses.append(f"dt={row.dt:g}: error ratio {first / second:.3g} outside [{lo}, {hi}]")
    finest = comparison.rows[-1]
    if max(finest.errors) > SCHRODINGER_FINEST_TOL:
        misses.append(f"finest errors {finest.errors} exceed {SCHRODINGER_FINEST_TOL:g}")
    if misses:
        raise CheckFailure("; ".join(misses))


@dataclass(frozen=True)
class CompositeOutcome:
    scheme: SchemeDescriptor
    report: OrderReport


def run_solve_composite(config: ExperimentConfig, store: FixtureStore | None = None) -> CompositeOutcome:
    kwargs: dict[str, Any] = {"seed": config.seed, "real_only": config.real_only}
    if config.starts is not None:
        kwargs["max_starts"] = config.starts
    try:
        scheme = solve_composite_rk23(**kwargs)
    except NumericError as exc:
        raise NumericError(f"solve-composite: {exc}", exc.diagnostics) from exc
    if store is not None:
        store.save_scheme(COMPOSITE_FIXTURE_NAME, scheme)
    return CompositeOutcome(scheme, order_report(scheme, 5))


def check_composite(outcome: CompositeOutcome, config: ExperimentConfig) -> None:
    if outcome.report.achieved_order_relaxed < 5:
        raise CheckFailure(f"composite scheme reaches relaxed order {outcome.report.achieved_order_relaxed}, not 5")
