from .optimize import (
    NEGATIVE_REAL_AXIS,
    OptimizedPolynomial,
    brute_force_cubic,
    cubic_polynomial,
    objective_direction,
    optimize_free_coefficients,
)
from .polynomial import StabilityKind, StabilityPolynomial, stability_function, weights_from_polynomial
from .region import RegionRaster, Window, ray_extent, raster_region, unit_direction

__all__ = [
    "NEGATIVE_REAL_AXIS",
    "OptimizedPolynomial",
    "RegionRaster",
    "StabilityKind",
    "StabilityPolynomial",
    "Window",
    "brute_force_cubic",
    "cubic_polynomial",
    "objective_direction",
    "optimize_free_coefficients",
    "ray_extent",
    "raster_region",
    "stability_function",
    "unit_direction",
    "weights_from_polynomial",
]
