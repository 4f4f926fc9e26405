from .driver import IntegrationResult, integrate, step_count
from .methods import (
    MethodSpec,
    composite_method,
    fair_step_sizes,
    method_from_json,
    reference_methods,
    resolve_method,
)
from .newton import NewtonConfig, solve_implicit_stage
from .rhs import BLOW_UP_NORM, CountedRhs, check_state
from .steppers import composite_rk23_step, euler_path_step, implicit_path_step, runge_kutta_step, scheme_step

__all__ = [
    "BLOW_UP_NORM",
    "CountedRhs",
    "IntegrationResult",
    "MethodSpec",
    "NewtonConfig",
    "check_state",
    "composite_method",
    "composite_rk23_step",
    "euler_path_step",
    "fair_step_sizes",
    "implicit_path_step",
    "integrate",
    "method_from_json",
    "reference_methods",
    "resolve_method",
    "runge_kutta_step",
    "scheme_step",
    "solve_implicit_stage",
    "step_count",
]
