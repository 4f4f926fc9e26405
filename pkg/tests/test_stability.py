from __future__ import annotations

import math

import numpy as np
import pytest

from complexpath.errors import ArgumentError
from complexpath.paths import lookup
from complexpath.stability import (
    NEGATIVE_REAL_AXIS,
    StabilityKind,
    StabilityPolynomial,
    Window,
    brute_force_cubic,
    cubic_polynomial,
    objective_direction,
    optimize_free_coefficients,
    ray_extent,
    raster_region,
    stability_function,
    unit_direction,
    weights_from_polynomial,
)


def test_forward_euler_reaches_minus_two():
    phi = stability_function(lookup("euler-1"))
    assert ray_extent(phi, -1) == pytest.approx(2.0, abs=1e-8)


def test_third_order_three_step_extent():
    phi = stability_function(lookup("complex-3-linear"))
    assert ray_extent(phi, -1) == pytest.approx(2.5127, abs=1e-3)
    assert abs(phi(-2.5)) <= 1.0
    assert abs(phi(-2.6)) > 1.0


def test_three_step_linear_path_is_the_cubic_taylor_polynomial():
    phi = stability_function(lookup("complex-3-linear"))
    assert phi.kind is StabilityKind.EXPLICIT
    assert np.allclose(phi.coefficients, [1.0, 1.0, 0.5, 1.0 / 6.0], atol=1e-12)
    assert phi.consistency_order() == 3


def test_backward_euler_path_is_stable_far_along_the_negative_axis():
    phi = stability_function(lookup("backward-euler-3"))
    assert phi.kind is StabilityKind.RATIONAL
    assert abs(phi(-5.0)) < 1.0
    assert ray_extent(phi, -1, budget=100.0) == math.inf


def test_implicit_midpoint_pair_is_the_diagonal_pade_approximant():
    phi = stability_function(lookup("implicit-midpoint-2"))
    assert np.allclose(phi.numerator, [1.0, 0.5, 1.0 / 12.0], atol=1e-12)
    assert np.allclose(phi.denominator, [1.0, -0.5, 1.0 / 12.0], atol=1e-12)
    z = -0.3 + 0.2j
    assert phi(z) == pytest.approx((1 + z / 2 + z * z / 12) / (1 - z / 2 + z * z / 12))


def test_polynomial_document_round_trip():
    phi = stability_function(lookup("implicit-midpoint-2"))
    assert StabilityPolynomial.from_dict(phi.to_dict()) == phi


def test_polynomial_must_start_at_one():
    with pytest.raises(ArgumentError):
        StabilityPolynomial.explicit([0.5, 1.0])


def test_weights_recovered_from_the_taylor_polynomial():
    path = weights_from_polynomial(StabilityPolynomial.taylor_polynomial(3))
    assert len(path) == 3
    assert path.order_claim == 3
    rebuilt = stability_function(path)
    assert np.allclose(rebuilt.coefficients, StabilityPolynomial.taylor_polynomial(3).coefficients, atol=1e-10)


def test_rational_functions_do_not_factor_into_euler_steps():
    with pytest.raises(ArgumentError):
        weights_from_polynomial(stability_function(lookup("implicit-midpoint-2")))


def test_raster_is_symmetric_about_the_real_axis():
    raster = raster_region(StabilityPolynomial.taylor_polynomial(2), Window.parse("-4,1,-3,3"), (51, 61))
    assert raster.resolution == (51, 61)
    assert np.array_equal(raster.inside, raster.inside[::-1])
    centre = np.argmin(np.abs(raster.x)), np.argmin(np.abs(raster.y))
    assert raster.inside[centre[1], centre[0]]
    assert raster.boundary().size > 0


def test_window_parsing_errors():
    with pytest.raises(ArgumentError):
        Window.parse("-4,1,-3")
    with pytest.raises(ArgumentError):
        Window.parse("1,-4,-3,3")


def test_directions():
    assert objective_direction(NEGATIVE_REAL_AXIS) == -1
    assert objective_direction("-1-2i") == pytest.approx(complex(-1, -2) / math.sqrt(5.0))
    with pytest.raises(ArgumentError):
        unit_direction(0)
    with pytest.raises(ArgumentError):
        objective_direction("upwards")


def test_pinned_polynomial_needs_no_search():
    result = optimize_free_coefficients(1, 1)
    assert result.extent == pytest.approx(2.0, abs=1e-8)
    with pytest.raises(ArgumentError):
        optimize_free_coefficients(2, 3)


def test_best_real_cubic_coefficient_along_the_skew_ray():
    k, extent = brute_force_cubic(complex(-1, -2))
    assert k == pytest.approx(0.1134, abs=5e-3)
    assert extent == ray_extent(cubic_polynomial(k), complex(-1, -2))


@pytest.mark.slow
def test_first_order_three_stage_reaches_roughly_three_times_second_order():
    p1 = optimize_free_coefficients(3, 1, seed=0)
    p2 = optimize_free_coefficients(3, 2, seed=0)
    assert p1.extent == pytest.approx(18.0, rel=0.05)
    assert p2.extent == pytest.approx(6.28, rel=0.05)
    assert 2.5 <= p1.extent / p2.extent <= 3.5


@pytest.mark.slow
def test_complex_coefficients_never_lose_to_real_ones():
    direction = complex(-1, -2)
    real = optimize_free_coefficients(3, 2, direction)
    free = optimize_free_coefficients(3, 2, direction, allow_complex=True)
    assert free.extent >= real.extent


def test_stages_follow_the_path_length():
    assert stability_function(lookup("euler-1")).stages == 1
    assert stability_function(lookup("complex-3-linear")).stages == 3
    assert stability_function(lookup("implicit-midpoint-2")).stages == 2


@pytest.mark.parametrize(
    ("name", "raw"), [("euler-1", 2.0), ("complex-2-linear", 2.0), ("complex-3-linear", 2.5127)]
)
def test_per_stage_extent_divides_by_the_substep_count(name, raw):
    phi = stability_function(lookup(name))
    scaled = phi.per_stage()
    assert scaled(-0.3 / phi.stages) == pytest.approx(phi(-0.3))
    assert ray_extent(scaled, -1) == pytest.approx(raw / phi.stages, abs=1e-3)


def test_per_stage_keeps_rational_functions_rational():
    phi = stability_function(lookup("implicit-midpoint-2")).per_stage()
    assert phi.kind is StabilityKind.RATIONAL
    assert phi(-0.4) == pytest.approx(stability_function(lookup("implicit-midpoint-2"))(-0.8))


@pytest.mark.slow
def test_relaxing_the_order_never_shrinks_the_extent():
    extents = [optimize_free_coefficients(3, p, seed=0) for p in (1, 2, 3)]
    assert extents[0].extent >= extents[1].extent >= extents[2].extent
    assert extents[2].extent == pytest.approx(2.5127, abs=1e-3)
    for p, found in zip((1, 2, 3), extents):
        assert found.polynomial.consistency_order(3) >= p
        assert found.polynomial.numerator[0] == 1
