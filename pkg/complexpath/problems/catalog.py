"""Named test problems: scalar ODEs, small systems and method-of-lines PDEs."""

from __future__ import annotations

import math
from typing import Any, Callable

import numpy as np

from complexpath.config import get_settings
from complexpath.errors import ArgumentError, NotFoundError
from complexpath.problems.model import OdeProblem
from complexpath.problems.operators import FdOperator, SpectralOperator

SPECTRAL_MODES = 70
BURGERS_NU = 0.1
WAVE_WIDTH = 7.0
VDP_MU = 1.0


def dahlquist(lam: complex = 1.0, t_end: float = 1.0) -> OdeProblem:
    lam = complex(lam)
    return OdeProblem(
        name="dahlquist",
        rhs=lambda t, y: lam * y,
        y0=[1.0],
        t_end=t_end,
        exact=lambda t: np.array([np.exp(lam * t)]),
        real_solution=lam.imag == 0,
        jacobian=lambda t, y: np.array([[lam]]),
        parameters={"lambda": lam},
        scalar_derivatives=lambda y: (lam * y, lam, 0j),
        description="ydot = lambda y",
    )


def shm(t_end: float = 4.0) -> OdeProblem:
    return OdeProblem(
        name="shm",
        rhs=lambda t, y: np.array([y[1], -y[0]]),
        y0=[1.0, 0.0],
        t_end=t_end,
        exact=lambda t: np.array([np.cos(t), -np.sin(t)]),
        jacobian=lambda t, y: np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex),
        description="y'' = -y as a first-order system",
    )


def square(t_end: float = 1.0) -> OdeProblem:
    return OdeProblem(
        name="square",
        rhs=lambda t, y: -(y**2),
        y0=[1.0],
        t_end=t_end,
        exact=lambda t: np.array([1.0 / (1.0 + t)]),
        jacobian=lambda t, y: np.array([[-2.0 * y[0]]]),
        scalar_derivatives=lambda y: (-(y**2), -2.0 * y, -2.0 + 0j),
        description="ydot = -y^2",
    )


def exp_decay(t_end: float = 1.0) -> OdeProblem:
    return OdeProblem(
        name="exp",
        rhs=lambda t, y: -np.exp(y),
        y0=[1.0],
        t_end=t_end,
        exact=lambda t: np.array([-math.log(math.exp(-1.0) + t)]),
        jacobian=lambda t, y: np.array([[-np.exp(y[0])]]),
        scalar_derivatives=lambda y: (-np.exp(y), -np.exp(y), -np.exp(y)),
        description="ydot = -exp(y)",
    )


def nlsin(t_end: float = 1.0) -> OdeProblem:
    return OdeProblem(
        name="nlsin",
        rhs=lambda t, y: 4.0 * y * np.sin(t) ** 3 * np.cos(t),
        y0=[1.0],
        t_end=t_end,
        exact=lambda t: np.array([math.exp(math.sin(t) ** 4)]),
        jacobian=lambda t, y: np.array([[4.0 * np.sin(t) ** 3 * np.cos(t)]]),
        description="ydot = 4 y sin^3 t cos t",
    )


def van_der_pol(mu: float = VDP_MU, t_end: float = 1.0) -> OdeProblem:
    def rhs(t: Any, y: np.ndarray) -> np.ndarray:
        return np.array([y[1], mu * (1.0 - y[0] ** 2) * y[1] - y[0]])

    def jacobian(t: Any, y: np.ndarray) -> np.ndarray:
        return np.array([[0.0, 1.0], [-2.0 * mu * y[0] * y[1] - 1.0, mu * (1.0 - y[0] ** 2)]], dtype=complex)

    return OdeProblem(
        name="vdp",
        rhs=rhs,
        y0=[2.0, 0.0],
        t_end=t_end,
        stiff=mu >= 10.0,
        jacobian=jacobian,
        parameters={"mu": mu},
        description="Van der Pol oscillator",
    )


def wave(modes: int = SPECTRAL_MODES, t_end: float = 1.0) -> OdeProblem:
    op = SpectralOperator(modes)

    def profile(x: np.ndarray) -> np.ndarray:
        return np.exp(-WAVE_WIDTH * (x - math.pi) ** 2)

    return OdeProblem(
        name="wave",
        rhs=lambda t, u: op.d1 @ u,
        y0=profile(op.x),
        t_end=t_end,
        exact=lambda t: profile(np.mod(op.x + t, 2.0 * math.pi)),
        jacobian=lambda t, u: op.d1,
        parameters={"modes": modes},
        grid=op.x,
        description="u_t = u_x, periodic, Fourier collocation",
    )


def burgers(modes: int = SPECTRAL_MODES, nu: float = BURGERS_NU, t_end: float = 1.0) -> OdeProblem:
    op = SpectralOperator(modes)

    def exact(t: float) -> np.ndarray:
        decay = math.exp(-nu * t)
        return 2.0 * nu * decay * np.sin(op.x) / (1.5 + decay * np.cos(op.x))

    def rhs(t: Any, u: np.ndarray) -> np.ndarray:
        return -u * (op.d1 @ u) + nu * (op.d2 @ u)

    def jacobian(t: Any, u: np.ndarray) -> np.ndarray:
        return -np.diag(op.d1 @ u) - u[:, None] * op.d1 + nu * op.d2

    return OdeProblem(
        name="burgers",
        rhs=rhs,
        y0=exact(0.0),
        t_end=t_end,
        exact=exact,
        jacobian=jacobian,
        parameters={"modes": modes, "nu": nu},
        grid=op.x,
        description="u_t + u u_x = nu u_xx, periodic, Fourier collocation",
    )


def heat(cells: int | None = None, t_end: float = 0.5, semi_discrete: bool = False) -> OdeProblem:
    """With ``semi_discrete`` the exact solution is the grid eigenvector's own decay."""
    cells = get_settings().heat_cells if cells is None else cells
    op = FdOperator(cells)
    rate = op.eigenvalue(1) if semi_discrete else -(math.pi**2)
    mode = np.sin(math.pi * op.x)
    return OdeProblem(
        name="heat",
        rhs=lambda t, u: op.matrix @ u,
        y0=mode,
        t_end=t_end,
        exact=lambda t: math.exp(rate * t) * mode,
        stiff=True,
        jacobian=lambda t, u: op.matrix,
        parameters={"cells": cells, "semi_discrete": semi_discrete},
        grid=op.x,
        description="u_t = u_xx on (0, 1), zero Dirichlet ends, fourth-order differences",
    )


def schrodinger(modes: int = SPECTRAL_MODES, t_end: float = 3.0) -> OdeProblem:
    op = SpectralOperator(modes)
    return OdeProblem(
        name="schrodinger",
        rhs=lambda t, u: 1j * (op.d2 @ u),
        y0=np.exp(1j * op.x),
        t_end=t_end,
        exact=lambda t: np.exp(1j * (op.x - t)),
        real_solution=False,
        jacobian=lambda t, u: 1j * op.d2,
        parameters={"modes": modes},
        grid=op.x,
        description="u_t = i u_xx, periodic, Fourier collocation",
    )


BUILDERS: dict[str, Callable[..., OdeProblem]] = {
    "dahlquist": dahlquist,
    "shm": shm,
    "square": square,
    "exp": exp_decay,
    "nlsin": nlsin,
    "vdp": van_der_pol,
    "wave": wave,
    "burgers": burgers,
    "heat": heat,
    "schrodinger": schrodinger,
}


def build_problem(name: str, **parameters: Any) -> OdeProblem:
    if name not in BUILDERS:
        raise NotFoundError(f"unknown problem {name!r}; known problems: {', '.join(sorted(BUILDERS))}")
    try:
        return BUILDERS[name](**parameters)
    except TypeError as exc:
        raise ArgumentError(f"bad parameters for {name}: {exc}") from exc


def catalog() -> dict[str, OdeProblem]:
    return {name: builder() for name, builder in BUILDERS.items()}
