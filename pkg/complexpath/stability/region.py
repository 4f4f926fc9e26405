from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from complexpath.errors import ArgumentError
from complexpath.stability.polynomial import StabilityPolynomial

SCAN_STEP = 1e-3
SCAN_BUDGET = 1e4
SCAN_CHUNK = 4096
BISECTION_TOL = 1e-10
STABLE_SLACK = 1e-12


@dataclass(frozen=True)
class Window:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self) -> None:
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ArgumentError(f"degenerate window {self}")

    @classmethod
    def parse(cls, text: str) -> Window:
        """``"re_min,re_max,im_min,im_max"``."""
        try:
            values = [float(part) for part in text.split(",")]
        except ValueError as exc:
            raise ArgumentError(f"window must be four comma-separated numbers, got {text!r}") from exc
        if len(values) != 4:
            raise ArgumentError(f"window must be four comma-separated numbers, got {text!r}")
        return cls(*values)


@dataclass(frozen=True)
class RegionRaster:
    window: Window
    x: np.ndarray
    y: np.ndarray
    inside: np.ndarray
    name: str = ""

    @property
    def resolution(self) -> tuple[int, int]:
        return self.x.size, self.y.size

    def boundary(self) -> np.ndarray:
        """Points halfway between horizontally or vertically adjacent cells that differ."""
        points = []
        horizontal = self.inside[:, 1:] != self.inside[:, :-1]
        rows, cols = np.nonzero(horizontal)
        points.extend(0.5 * (self.x[cols] + self.x[cols + 1]) + 1j * self.y[rows])
        vertical = self.inside[1:, :] != self.inside[:-1, :]
        rows, cols = np.nonzero(vertical)
        points.extend(self.x[cols] + 1j * 0.5 * (self.y[rows] + self.y[rows + 1]))
        return np.array(points, dtype=complex)


def _stable(magnitude: np.ndarray) -> np.ndarray:
    return np.isfinite(magnitude) & (magnitude <= 1.0 + STABLE_SLACK)


def raster_region(phi: StabilityPolynomial, window: Window, resolution: tuple[int, int]) -> RegionRaster:
    nx, ny = resolution
    if nx < 2 or ny < 2:
        raise ArgumentError(f"resolution must be at least 2x2, got {resolution}")
    x = np.linspace(window.re_min, window.re_max, nx)
    y = np.linspace(window.im_min, window.im_max, ny)
    if window.im_min == -window.im_max:
        # exact mirror symmetry of the grid about the real axis
        y = 0.5 * (y - y[::-1])
    grid_x, grid_y = np.meshgrid(x, y)
    with np.errstate(over="ignore", invalid="ignore"):
        magnitude = np.abs(phi(grid_x + 1j * grid_y))
    return RegionRaster(window, x, y, _stable(magnitude), phi.name)


def unit_direction(direction: complex) -> complex:
    direction = complex(direction)
    size = abs(direction)
    if size == 0 or not math.isfinite(size):
        raise ArgumentError(f"ray direction must be a finite nonzero complex number, got {direction!r}")
    return direction / size


def ray_extent(
    phi: StabilityPolynomial,
    direction: complex,
    step: float = SCAN_STEP,
    budget: float = SCAN_BUDGET,
    tol: float = BISECTION_TOL,
) -> float:
    """Largest h with |Phi(s d)| <= 1 at every scanned s <= h; ``math.inf`` if the ray never leaves."""
    unit = unit_direction(direction)
    count = int(math.ceil(budget / step))
    last_good = 0.0
    for start in range(0, count, SCAN_CHUNK):
        h = step * np.arange(start + 1, min(start + SCAN_CHUNK, count) + 1)
        with np.errstate(over="ignore", invalid="ignore"):
            ok = _stable(np.abs(phi(h * unit)))
        bad = np.flatnonzero(~ok)
        if bad.size:
            first = int(bad[0])
            lo = float(h[first - 1]) if first > 0 else last_good
            hi = float(h[first])
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                with np.errstate(over="ignore", invalid="ignore"):
                    if _stable(np.abs(phi(mid * unit))):
                        lo = mid
                    else:
                        hi = mid
            return lo
        last_good = float(h[-1])
    return math.inf
