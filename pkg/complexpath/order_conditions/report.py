from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from complexpath.errors import ArgumentError
from complexpath.order_conditions.expansion import exact_flow_jet, scheme_jet
from complexpath.order_conditions.jet import Monomial, Restriction, monomial_label
from complexpath.order_conditions.schemes import SchemeDescriptor, SchemeVariant

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class OrderReport:
    order: int
    tol: float
    restriction: Restriction
    residuals: tuple[tuple[int, Monomial, complex], ...]
    relaxed_allowed: bool
    achieved_order: int = field(init=False)
    achieved_order_relaxed: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "achieved_order", self._achieved(relaxed=False))
        relaxed = self._achieved(relaxed=True) if self.relaxed_allowed else self.achieved_order
        object.__setattr__(self, "achieved_order_relaxed", relaxed)

    def _size(self, k: int, residual: complex, relaxed: bool) -> float:
        return abs(residual.real) if relaxed and k >= 3 else abs(residual)

    def _achieved(self, relaxed: bool) -> int:
        achieved = 0
        for k in range(1, self.order + 1):
            if any(self._size(j, r, relaxed) >= self.tol for j, _, r in self.residuals if j == k):
                break
            achieved = k
        return achieved

    def at_power(self, k: int) -> dict[str, complex]:
        return {monomial_label(m): r for j, m, r in self.residuals if j == k}

    def max_residual(self, k: int, relaxed: bool = False) -> float:
        return max((self._size(j, r, relaxed) for j, _, r in self.residuals if j == k), default=0.0)

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["monomial", "h_power", "residual_re", "residual_im"])
            for k, monomial, residual in self.residuals:
                writer.writerow(
                    [monomial_label(monomial), k, format(residual.real, ".17g"), format(residual.imag, ".17g")]
                )
        return path


def default_restriction(scheme: SchemeDescriptor) -> Restriction:
    # the composite construction only targets autonomous problems
    if scheme.variant is SchemeVariant.COMPOSITE_RK23:
        return Restriction.AUTONOMOUS
    return Restriction.NON_AUTONOMOUS


def order_report(
    scheme: SchemeDescriptor,
    order: int,
    tol: float = DEFAULT_TOL,
    restriction: Restriction | str | None = None,
) -> OrderReport:
    """Monomial-wise residual of one step of ``scheme`` against the exact flow."""
    if tol <= 0:
        raise ArgumentError(f"tol must be positive, got {tol}")
    restriction = Restriction(restriction) if restriction is not None else default_restriction(scheme)
    exact = exact_flow_jet(order, restriction=restriction)
    approx = scheme_jet(scheme, order, restriction)
    residuals = []
    for k in range(1, order + 1):
        for monomial in sorted(set(exact.monomials(k)) | set(approx.monomials(k))):
            residual = complex(approx.coefficient(k, monomial) - exact.coefficient(k, monomial))
            residuals.append((k, monomial, residual))
    return OrderReport(order, tol, restriction, tuple(residuals), scheme.real_projection)
