from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from complexpath.errors import ArgumentError
from complexpath.paths.symmetric import elementary_symmetric_all

CLOSURE_TOL = 1e-12
LINEAR_TOL = 1e-10


class ValidityClass(str, Enum):
    LINEAR_ONLY = "linear-only"
    NONLINEAR = "nonlinear"
    IMPLICIT_MIDPOINT = "implicit-midpoint"
    BACKWARD_EULER = "backward-euler"
    PROBLEM_SPECIFIC = "problem-specific"


def encode_complex(value: complex) -> list[float]:
    value = complex(value)
    return [value.real, value.imag]


def decode_complex(pair: Any) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ArgumentError(f"complex values are stored as [re, im] pairs, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


@dataclass(frozen=True)
class ComplexPath:
    weights: tuple[complex, ...]
    order_claim: int = 1
    validity_class: ValidityClass = ValidityClass.LINEAR_ONLY
    requires_real_projection: bool = False
    name: str = ""

    def __post_init__(self) -> None:
        weights = tuple(complex(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "validity_class", ValidityClass(self.validity_class))
        if not weights:
            raise ArgumentError("a path needs at least one weight")
        if self.order_claim < 1:
            raise ArgumentError(f"order_claim must be >= 1, got {self.order_claim}")
        total_re = math.fsum(w.real for w in weights)
        total_im = math.fsum(w.imag for w in weights)
        if abs(total_re - 1.0) > CLOSURE_TOL or abs(total_im) > CLOSURE_TOL:
            raise ArgumentError(f"weights must sum to 1, got {complex(total_re, total_im)!r}")
        if self.validity_class is ValidityClass.LINEAR_ONLY:
            if self.order_claim > len(weights):
                raise ArgumentError(f"{len(weights)} linear steps cannot reach order {self.order_claim}")
            e = elementary_symmetric_all(weights)
            for k in range(1, self.order_claim + 1):
                if abs(e[k] - 1.0 / math.factorial(k)) > LINEAR_TOL:
                    raise ArgumentError(f"e_{k} = {e[k]!r} does not match 1/{k}!")

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def is_conjugate_closed(self) -> bool:
        remaining = list(self.weights)
        while remaining:
            w = remaining.pop()
            if abs(w.imag) <= CLOSURE_TOL:
                continue
            partner = min(range(len(remaining)), key=lambda i: abs(remaining[i] - w.conjugate()), default=None)
            if partner is None or abs(remaining[partner] - w.conjugate()) > LINEAR_TOL:
                return False
            remaining.pop(partner)
        return True

    def conjugated(self) -> ComplexPath:
        return ComplexPath(
            tuple(w.conjugate() for w in self.weights),
            self.order_claim,
            self.validity_class,
            self.requires_real_projection,
            f"{self.name}-conj" if self.name else "",
        )

    def permuted(self, order: Sequence[int], name: str = "") -> ComplexPath:
        if sorted(order) != list(range(len(self.weights))):
            raise ArgumentError(f"{order!r} is not a permutation of {len(self.weights)} steps")
        return ComplexPath(
            tuple(self.weights[i] for i in order),
            self.order_claim,
            self.validity_class,
            self.requires_real_projection,
            name,
        )

    def with_class(
        self, validity_class: ValidityClass, order_claim: int, requires_real_projection: bool, name: str = ""
    ) -> ComplexPath:
        return ComplexPath(self.weights, order_claim, validity_class, requires_real_projection, name or self.name)

    def substep_offsets(self) -> np.ndarray:
        """Time offsets (fractions of the step) at which each substep starts."""
        w = np.asarray(self.weights, dtype=complex)
        return np.concatenate([[0j], np.cumsum(w)[:-1]])

    def polyline(self, dt: float = 1.0) -> np.ndarray:
        w = np.asarray(self.weights, dtype=complex)
        return np.concatenate([[0j], np.cumsum(w)]) * dt

    def sort_key(self) -> tuple[float, ...]:
        return tuple(part for w in self.weights for part in (w.real, w.imag))

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "order_claim": self.order_claim,
            "validity_class": self.validity_class.value,
            "requires_real_projection": self.requires_real_projection,
            "weights": [encode_complex(w) for w in self.weights],
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> ComplexPath:
        try:
            weights = tuple(decode_complex(pair) for pair in payload["weights"])
            return cls(
                weights=weights,
                order_claim=int(payload.get("order_claim", 1)),
                validity_class=ValidityClass(payload.get("validity_class", ValidityClass.LINEAR_ONLY.value)),
                requires_real_projection=bool(payload.get("requires_real_projection", False)),
                name=str(payload.get("name", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ArgumentError):
                raise
            raise ArgumentError(f"malformed path document: {exc}") from exc


@dataclass(frozen=True)
class PathResidualReport:
    labels: tuple[str, ...]
    residuals: tuple[complex, ...]
    relaxed: bool
    max_abs_residual: float = field(init=False)

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.residuals):
            raise ArgumentError("every residual needs a label")
        worst = max((abs(r) for r in self.residuals), default=0.0)
        object.__setattr__(self, "max_abs_residual", float(worst))

    def as_dict(self) -> dict[str, complex]:
        return dict(zip(self.labels, self.residuals))
