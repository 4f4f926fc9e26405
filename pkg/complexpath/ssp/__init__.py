from .experiments import (
    DT_CAP,
    SspCurve,
    SspLimit,
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

__all__ = [
    "DT_CAP",
    "SspCurve",
    "SspLimit",
    "SspMethod",
    "SspStatus",
    "complex_two_step",
    "decay_rhs",
    "default_ssp_methods",
    "fe_ssp_bound",
    "max_ssp_step",
    "path_states",
    "prefix_violation",
    "ssp_curve",
    "ssp_variant",
    "strict_substep_bound",
]
