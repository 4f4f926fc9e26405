from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from complexpath.errors import CapabilityError
from complexpath.integrators.rhs import JacobianFunction, RhsFunction

ExactFunction = Callable[[float], np.ndarray]
DerivativeFunction = Callable[[complex], Sequence[complex]]


@dataclass(frozen=True, eq=False)
class OdeProblem:
    name: str
    rhs: RhsFunction
    y0: np.ndarray
    t0: float = 0.0
    t_end: float = 1.0
    exact: ExactFunction | None = None
    real_solution: bool = True
    stiff: bool = False
    jacobian: JacobianFunction | None = None
    parameters: Mapping[str, Any] = field(default_factory=dict)
    grid: np.ndarray | None = None
    # f, f', f'' of a scalar autonomous right-hand side
    scalar_derivatives: DerivativeFunction | None = None
    description: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "y0", np.atleast_1d(np.asarray(self.y0, dtype=complex)))

    @property
    def dimension(self) -> int:
        return int(self.y0.size)

    @property
    def has_exact(self) -> bool:
        return self.exact is not None

    def exact_at(self, t: float) -> np.ndarray:
        if self.exact is None:
            raise CapabilityError(f"{self.name} has no closed-form solution")
        return np.atleast_1d(np.asarray(self.exact(t), dtype=complex))
