from __future__ import annotations

import math

import numpy as np
import pytest

from complexpath.errors import ArgumentError, BlowUpError, CapabilityError, IntegrationError, NotFoundError
from complexpath.integrators import (
    CountedRhs,
    MethodSpec,
    NewtonConfig,
    composite_rk23_step,
    euler_path_step,
    fair_step_sizes,
    implicit_path_step,
    integrate,
    reference_methods,
    resolve_method,
    step_count,
)
from complexpath.observability import metrics_collector
from complexpath.order_conditions import CompositeConditions, SchemeVariant
from complexpath.paths import library, lookup
from complexpath.problems import OdeProblem, build_problem
from complexpath.stability import stability_function
from complexpath.storage import FixtureStore


def _linear(lam: complex) -> CountedRhs:
    return CountedRhs(lambda t, y: lam * y, lambda t, y: np.array([[lam]]))


def _composite_scheme():
    conditions = CompositeConditions(order=3)
    return conditions.scheme(np.random.default_rng(11).uniform(-1.0, 1.0, conditions.size))


def test_two_step_path_on_growth_is_the_quadratic_taylor_polynomial():
    dt = 0.3
    y = euler_path_step(_linear(1.0), 0.0, np.array([1.0 + 0j]), dt, lookup("complex-2-linear"))
    assert y[0] == pytest.approx(1.0 + dt + dt * dt / 2.0, abs=1e-15)


def test_single_euler_step():
    y = euler_path_step(_linear(1.0), 0.0, np.array([1.0 + 0j]), 0.2, lookup("euler-1"))
    assert y[0] == pytest.approx(1.2)


def test_problem_specific_path_has_fourth_order_local_error_on_squared_decay():
    path = lookup("problem-y2-2step")

    def local_error(dt: float) -> float:
        rhs = CountedRhs(lambda t, y: -(y**2))
        y = euler_path_step(rhs, 0.0, np.array([1.0 + 0j]), dt, path)
        return abs(y[0].real - 1.0 / (1.0 + dt))

    coarse, fine = local_error(0.1), local_error(0.05)
    assert coarse < 1e-3
    assert coarse / fine > 10.0


def test_implicit_midpoint_single_step_is_the_trapezoidal_factor():
    lam, dt = -3.0, 0.2
    y = implicit_path_step(_linear(lam), 0.0, np.array([2.0 + 0j]), dt, [1.0], SchemeVariant.IMPLICIT_MIDPOINT_PATH)
    z = lam * dt
    assert y[0] == pytest.approx(2.0 * (1 + z / 2) / (1 - z / 2), rel=1e-12)


def test_implicit_midpoint_pair_matches_the_diagonal_pade_approximant():
    dt = 0.1
    y = implicit_path_step(
        _linear(-1.0), 0.0, np.array([1.0 + 0j]), dt, lookup("implicit-midpoint-2"), "implicit-midpoint-path"
    )
    z = -dt
    pade = (1 + z / 2 + z * z / 12) / (1 - z / 2 + z * z / 12)
    assert abs(y[0] - pade) < 1e-10


@pytest.mark.parametrize("name", sorted(library()))
def test_one_step_on_a_linear_problem_is_the_stability_function(name):
    path = lookup(name)
    method = MethodSpec.from_path(path)
    phi = stability_function(path)
    rng = np.random.default_rng(17)
    for _ in range(20):
        lam = complex(rng.uniform(-3.0, 1.0), rng.uniform(-3.0, 3.0))
        dt = float(rng.uniform(0.05, 0.3))
        y = method.step(_linear(lam), 0.0, np.array([1.0 + 0j]), dt)
        expected = phi(lam * dt)
        assert abs(y[0] - expected) <= 1e-13 * max(1.0, abs(expected))


def test_implicit_step_on_zero_rhs_takes_no_newton_updates():
    rhs = CountedRhs(lambda t, y: np.zeros_like(y), lambda t, y: np.zeros((y.size, y.size)))
    y0 = np.array([1.5 + 0j, -2.0 + 0j])
    y = implicit_path_step(rhs, 0.0, y0, 0.5, lookup("backward-euler-3"), "backward-euler-path")
    assert np.array_equal(y, y0)
    assert rhs.newton_iterations == 0


def test_finite_difference_jacobian_is_counted_separately():
    problem = OdeProblem("cubic", lambda t, y: -(y**3), [1.0], t_end=0.5)
    result = integrate(problem, MethodSpec.from_path(lookup("backward-euler-3")), 0.1)
    assert result.jacobian_evaluations > 0
    assert result.newton_iterations_total > 0
    exact = 1.0 / math.sqrt(1.0 + 2.0 * 0.5)
    assert result.final_state[0].real == pytest.approx(exact, abs=2e-2)


def test_sparse_jacobian_drives_newton_on_the_heat_grid():
    problem = build_problem("heat", cells=32, semi_discrete=True, t_end=0.1)
    result = integrate(problem, MethodSpec.from_path(lookup("implicit-midpoint-2")), 0.05)
    assert np.max(np.abs(result.final_state - problem.exact_at(0.1))) < 1e-4


@pytest.mark.parametrize("cells", [1000, 10_000])
@pytest.mark.parametrize(("name", "bound"), [("implicit-midpoint-2", 1e-5), ("backward-euler-3", 5e-4)])
def test_newton_converges_on_fine_heat_grids(cells, name, bound):
    problem = build_problem("heat", cells=cells, semi_discrete=True, t_end=0.5)
    result = integrate(problem, MethodSpec.from_path(lookup(name)), 0.0625)
    assert result.steps == 8
    assert result.newton_iterations_total <= 3 * 8 * len(lookup(name).weights)
    assert np.max(np.abs(result.final_state - problem.exact_at(0.5))) < bound


def test_newton_config_validates():
    with pytest.raises(ArgumentError):
        NewtonConfig(tolerance=0.0)


def test_composite_step_uses_five_evaluations():
    rhs = CountedRhs(lambda t, y: -(y**2))
    composite_rk23_step(rhs, 0.0, np.array([1.0 + 0j]), 0.1, _composite_scheme())
    assert rhs.evaluations == 5


def test_composite_step_leaves_a_fixed_point_alone():
    rhs = CountedRhs(lambda t, y: np.zeros_like(y))
    y = composite_rk23_step(rhs, 0.0, np.array([0.7 + 0j]), 0.1, _composite_scheme())
    assert y[0] == 0.7


def test_ralston_step_on_linear_problem_is_the_cubic_taylor_polynomial():
    lam, dt = -0.7 + 0.2j, 0.3
    y = reference_methods()["ralston3"].step(_linear(lam), 0.0, np.array([1.0 + 0j]), dt)
    z = lam * dt
    assert y[0] == pytest.approx(1 + z + z * z / 2 + z**3 / 6, abs=1e-15)


def test_ssprk2_on_zero_rhs_is_the_identity():
    y0 = np.array([3.0 + 0j])
    assert reference_methods()["ssprk2"].step(CountedRhs(lambda t, y: 0 * y), 0.0, y0, 0.4)[0] == 3.0


def test_rk4_on_growth():
    y = reference_methods()["rk4"].step(_linear(1.0), 0.0, np.array([1.0 + 0j]), 0.1)
    assert abs(y[0] - math.exp(0.1)) < 1e-7


def test_two_step_path_beats_euler_at_equal_evaluations():
    problem = build_problem("dahlquist", lam=1.0, t_end=5.0)
    exact = problem.exact_at(5.0)[0]
    path = integrate(problem, MethodSpec.from_path(lookup("complex-2-linear")), 0.5)
    euler = integrate(problem, MethodSpec.from_path(lookup("euler-1")), 0.25)
    assert path.function_evaluations == euler.function_evaluations
    assert abs(path.final_state[0] - exact) < abs(euler.final_state[0] - exact)


def test_empty_interval_returns_the_initial_state():
    problem = build_problem("square")
    result = integrate(problem, reference_methods()["rk4"], 0.1, t_end=0.0)
    assert result.steps == 0
    assert result.function_evaluations == 0
    assert result.final_state[0] == 1.0


def test_blow_up_is_reported_with_its_step():
    problem = build_problem("dahlquist", lam=1000.0)
    with pytest.raises(IntegrationError) as excinfo:
        integrate(problem, MethodSpec.from_path(lookup("euler-1")), 0.1)
    assert isinstance(excinfo.value.__cause__, BlowUpError)
    assert excinfo.value.step == 5
    assert metrics_collector.snapshot()["blow_ups"] == 1


def test_projection_is_refused_for_complex_solutions():
    with pytest.raises(CapabilityError):
        integrate(build_problem("schrodinger", modes=8), MethodSpec.from_path(lookup("complex-3-nonlinear")), 0.1)


def test_projection_keeps_states_real():
    result = integrate(build_problem("square"), MethodSpec.from_path(lookup("complex-3-nonlinear")), 0.1)
    assert result.projected
    assert np.all(result.states.imag == 0)


def test_step_must_divide_the_interval():
    assert step_count(1.0, 0.125) == 8
    with pytest.raises(ArgumentError):
        step_count(1.0, 0.3)


def test_integration_result_csv(tmp_path):
    result = integrate(build_problem("shm"), reference_methods()["rk4"], 0.5)
    lines = result.to_csv(tmp_path / "shm.csv", {"method": "rk4"}).read_text().splitlines()
    assert lines[0] == "# method=rk4"
    assert lines[1] == "t,re_y1,re_y2,im_y1,im_y2"
    assert len(lines) == 2 + result.steps + 1


def test_resolve_method_sources(tmp_path):
    assert resolve_method("complex-2-linear").scheme.variant is SchemeVariant.EULER_PATH
    assert resolve_method("rk4").order == 4
    inline = resolve_method('{"variant": "euler-path", "weights": [[1.0, 0.0]], "order": 1}')
    assert inline.scheme.weights == (1.0 + 0j,)
    store = FixtureStore(tmp_path)
    store.save_scheme("composite-rk23", _composite_scheme())
    stored = resolve_method("composite-rk23", store)
    assert stored.scheme.variant is SchemeVariant.COMPOSITE_RK23
    assert stored.evaluations_per_step == 5
    with pytest.raises(NotFoundError):
        resolve_method("composite-rk23")


def test_fair_step_sizes_match_evaluations_per_unit_time():
    methods = [reference_methods()["ralston3"], MethodSpec.from_path(lookup("complex-2-linear"))]
    steps = fair_step_sizes(methods, 0.3)
    assert steps["ralston3"] == pytest.approx(0.3)
    assert steps["complex-2-linear"] == pytest.approx(0.2)
