from __future__ import annotations

import math

import numpy as np
import pytest

from complexpath.errors import ArgumentError
from complexpath.integrators import MethodSpec, reference_methods
from complexpath.paths import lookup
from complexpath.ssp import (
    DT_CAP,
    SspCurve,
    SspMethod,
    SspStatus,
    complex_two_step,
    decay_rhs,
    default_ssp_methods,
    fe_ssp_bound,
    max_ssp_step,
    path_states,
    prefix_violation,
    ssp_curve,
    ssp_variant,
    strict_substep_bound,
)

EULER = SspMethod("euler-1", MethodSpec.from_path(lookup("euler-1")), False)
SSPRK2 = SspMethod("ssprk2", reference_methods()["ssprk2"], False)


def test_forward_euler_bound_on_linear_decay():
    assert fe_ssp_bound(lambda y: -y, 3.0) == pytest.approx(2.0)


def test_forward_euler_bound_on_the_decay_problem():
    assert fe_ssp_bound(decay_rhs, 1.0) == pytest.approx(2.0 * math.e)


def test_forward_euler_bound_is_infinite_at_a_fixed_point():
    assert fe_ssp_bound(lambda y: 0 * y, 1.0) == math.inf


def test_purely_imaginary_weight_has_no_monotone_step():
    path = lookup("problem-y2-2step")
    bound = strict_substep_bound(path, lambda y: -y, path_states(path, lambda y: -y, 1.0, 0.1))
    assert bound == 0.0


def test_strict_bound_for_the_real_euler_step():
    assert strict_substep_bound(lookup("euler-1"), lambda y: -y, [1.0]) == pytest.approx(2.0)


def test_strict_bound_needs_one_state_per_substep():
    with pytest.raises(ArgumentError):
        strict_substep_bound(lookup("complex-2-linear"), decay_rhs, [1.0])


def test_path_states_follow_the_substeps():
    path = lookup("complex-2-linear")
    states = path_states(path, lambda y: -y, 1.0, 0.5)
    assert states[0] == 1.0
    assert states[1] == pytest.approx(1.0 - path.weights[0] * 0.5)


def test_euler_step_on_linear_decay_stops_at_two():
    limit = max_ssp_step(EULER, 1.0, lambda y: -y)
    assert limit.status is SspStatus.BOUNDED
    assert limit.dt_max == pytest.approx(2.0, abs=1e-6)


def test_fixed_point_is_capped():
    limit = max_ssp_step(SSPRK2, 1.0, lambda y: 0 * y)
    assert limit.status is SspStatus.CAPPED
    assert limit.dt_max == DT_CAP


def test_zero_state_is_rejected():
    with pytest.raises(ArgumentError):
        max_ssp_step(SSPRK2, 0.0)


def test_slow_decay_is_capped_for_every_method():
    for method in default_ssp_methods():
        assert max_ssp_step(method, 10.0).status is SspStatus.CAPPED


def test_complex_two_step_takes_larger_steps_than_ssprk2_near_the_band():
    ours = max_ssp_step(complex_two_step(), 4.8)
    theirs = max_ssp_step(SSPRK2, 4.8)
    assert ours.dt_max > theirs.dt_max


def test_complex_two_step_variants():
    assert complex_two_step().project
    assert complex_two_step(reverse=True).name == "complex-2-linear-reversed"
    unprojected = complex_two_step(project=False)
    assert unprojected.name == "complex-2-linear-unprojected"
    assert not unprojected.method.requires_real_projection


def test_curve_rows_follow_the_method_order():
    curve = ssp_curve(u_values=np.array([0.5, 1.0, 2.0]), methods=[EULER, SSPRK2])
    rows = curve.rows()
    assert len(rows) == 3
    assert rows[1][0] == 1.0
    assert rows[1][1] == pytest.approx(fe_ssp_bound(decay_rhs, 1.0), rel=1e-3)
    assert curve.status["ssprk2"][0] is not SspStatus.VIOLATED


def test_curve_grid_must_increase():
    with pytest.raises(ArgumentError):
        SspCurve(np.array([1.0, 1.0]), ("ssprk2",))


def test_large_state_band_starts_where_euler_passes_the_cap():
    curve = ssp_curve(u_values=np.array([1.0, 3.3, 3.9627, 4.5]), methods=[SSPRK2])
    assert curve.large_state_band().tolist() == [False, False, True, True]


def test_complex_two_step_dominates_ssprk2_over_the_large_state_band():
    u_values = np.array([3.9627, 4.5, 5.0, 6.0])
    curve = ssp_curve(u_values=u_values, methods=default_ssp_methods())
    ours = curve.dt_max["complex-2-linear"]
    theirs = curve.dt_max["ssprk2"]
    assert np.all(ours >= theirs)
    assert ours[:3] == pytest.approx([38.84519, 62.38309, 98.04139], abs=1e-3)
    assert theirs[:3] == pytest.approx([36.39819, 52.90925, 78.19130], abs=1e-3)
    assert curve.status["ssprk2"][-1] is SspStatus.CAPPED


def test_ssprk2_wins_just_below_the_band():
    assert max_ssp_step(SSPRK2, 3.3).dt_max > max_ssp_step(complex_two_step(), 3.3).dt_max


@pytest.mark.parametrize("u", [0.5, 1.0, 3.3, 4.8])
def test_limits_hold_on_a_finer_grid(u):
    for method in default_ssp_methods():
        limit = max_ssp_step(method, u)
        assert prefix_violation(method, u, limit.dt_max) is None


def test_prefix_check_finds_a_step_past_the_limit():
    limit = max_ssp_step(EULER, 1.0, lambda y: -y)
    assert prefix_violation(EULER, 1.0, limit.dt_max + 0.5, lambda y: -y) is not None


def test_projection_changes_the_curve():
    projected = max_ssp_step(complex_two_step(), 1.0).dt_max
    unprojected = max_ssp_step(complex_two_step(project=False), 1.0).dt_max
    assert projected == pytest.approx(5.69493, abs=1e-3)
    assert unprojected == pytest.approx(4.09352, abs=1e-3)


def test_reversed_order_matches_on_real_states():
    forward = max_ssp_step(complex_two_step(), 4.8).dt_max
    assert max_ssp_step(complex_two_step(reverse=True), 4.8).dt_max == pytest.approx(forward, abs=1e-6)


def test_variant_names():
    assert ssp_variant() == "forward-projected"
    assert ssp_variant(reverse=True, project=False) == "reversed-unprojected"
    curve = ssp_curve(u_values=np.array([1.0]), methods=[SSPRK2], variant=ssp_variant(True))
    assert curve.variant == "reversed-projected"
