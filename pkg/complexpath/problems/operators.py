from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from complexpath.errors import ArgumentError


@dataclass(frozen=True, eq=False)
class SpectralOperator:
    """Fourier collocation on M equispaced points of a periodic interval."""

    modes: int
    length: float = 2.0 * math.pi
    x: np.ndarray = field(init=False)
    wavenumbers: np.ndarray = field(init=False)
    d1: np.ndarray = field(init=False)
    d2: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        if self.modes < 4 or self.modes % 2:
            raise ArgumentError(f"spectral operators need an even number of modes >= 4, got {self.modes}")
        m = self.modes
        k = (2.0 * math.pi / self.length) * np.fft.fftfreq(m, d=1.0 / m)
        first = 1j * k
        first[m // 2] = 0.0
        transform = np.fft.fft(np.eye(m), axis=0)
        object.__setattr__(self, "x", self.length * np.arange(m) / m)
        object.__setattr__(self, "wavenumbers", k)
        object.__setattr__(self, "d1", np.fft.ifft(first[:, None] * transform, axis=0))
        object.__setattr__(self, "d2", np.fft.ifft((-(k**2))[:, None] * transform, axis=0))


def spectral_derivative(op: SpectralOperator, u: np.ndarray, order: int) -> np.ndarray:
    u = np.asarray(u)
    if u.shape[0] != op.modes:
        raise ArgumentError(f"expected {op.modes} samples, got {u.shape[0]}")
    if order == 1:
        return op.d1 @ u
    if order == 2:
        return op.d2 @ u
    raise ArgumentError(f"spectral derivatives of order {order} are not provided")


@dataclass(frozen=True, eq=False)
class FdOperator:
    """Fourth-order second difference on (0, 1) with Dirichlet values at both ends.

    Unknowns sit at x_i = i dx, i = 1..cells, dx = 1/(cells + 1). Ghost values
    beyond the boundary are odd reflections about the boundary value.
    """

    cells: int
    left: float = 0.0
    right: float = 0.0
    dx: float = field(init=False)
    x: np.ndarray = field(init=False)
    matrix: sparse.csr_matrix = field(init=False)
    boundary_term: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        n = self.cells
        if n < 4:
            raise ArgumentError(f"the fourth-order stencil needs at least 4 cells, got {n}")
        dx = 1.0 / (n + 1)
        scale = 1.0 / (12.0 * dx * dx)
        diagonals = [
            -np.ones(n - 2),
            16.0 * np.ones(n - 1),
            -30.0 * np.ones(n),
            16.0 * np.ones(n - 1),
            -np.ones(n - 2),
        ]
        lap = sparse.diags(diagonals, [-2, -1, 0, 1, 2], format="lil")
        lap[0, 0] = -29.0
        lap[n - 1, n - 1] = -29.0
        boundary = np.zeros(n)
        boundary[0] = 14.0 * self.left
        boundary[1] = -self.left
        boundary[-1] = 14.0 * self.right
        boundary[-2] = -self.right
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "x", dx * np.arange(1, n + 1))
        object.__setattr__(self, "matrix", (scale * lap).tocsr())
        object.__setattr__(self, "boundary_term", scale * boundary)

    def eigenvalue(self, wave: int = 1) -> float:
        """Eigenvalue of the discrete operator for sin(wave * pi * x) with zero boundaries."""
        theta = wave * math.pi * self.dx
        return (-2.0 * math.cos(2.0 * theta) + 32.0 * math.cos(theta) - 30.0) / (12.0 * self.dx**2)


def fd_laplacian(op: FdOperator, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u)
    if u.shape[0] != op.cells:
        raise ArgumentError(f"expected {op.cells} values, got {u.shape[0]}")
    return op.matrix @ u + op.boundary_term
