from .composite import CompositeConditions, solve_composite_rk23
from .expansion import exact_flow_jet, picard_substep, problem_targets, rhs_jet, runge_kutta_jet, scheme_jet
from .jet import Jet, Restriction, monomial_label, monomial_order
from .report import OrderReport, order_report
from .schemes import COMPOSITE_NAMES, SchemeDescriptor, SchemeVariant, composite_tableau

__all__ = [
    "COMPOSITE_NAMES",
    "CompositeConditions",
    "Jet",
    "OrderReport",
    "Restriction",
    "SchemeDescriptor",
    "SchemeVariant",
    "composite_tableau",
    "exact_flow_jet",
    "monomial_label",
    "monomial_order",
    "order_report",
    "picard_substep",
    "problem_targets",
    "rhs_jet",
    "runge_kutta_jet",
    "scheme_jet",
]
