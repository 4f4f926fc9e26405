from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from complexpath.errors import ArgumentError, NumericError
from complexpath.paths.model import ComplexPath, ValidityClass, decode_complex, encode_complex
from complexpath.paths.solvers import polish_roots
from complexpath.paths.symmetric import elementary_symmetric_all, implicit_factors, rational_series

POLE_GUARD = 1e-12
ROUND_TRIP_TOL = 1e-10
CONSISTENCY_TOL = 1e-12


class StabilityKind(str, Enum):
    EXPLICIT = "explicit-polynomial"
    RATIONAL = "implicit-rational"


@dataclass(frozen=True)
class StabilityPolynomial:
    """Phi(z) = numerator(z) / denominator(z), coefficients in increasing powers."""

    numerator: tuple[complex, ...]
    denominator: tuple[complex, ...] = (1 + 0j,)
    name: str = ""

    def __post_init__(self) -> None:
        num = tuple(complex(c) for c in self.numerator)
        den = tuple(complex(c) for c in self.denominator)
        if not num or not den:
            raise ArgumentError("stability functions need non-empty coefficient lists")
        if abs(num[0] - 1.0) > CONSISTENCY_TOL or abs(den[0] - 1.0) > CONSISTENCY_TOL:
            raise ArgumentError("stability functions are normalized to Phi(0) = 1")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def explicit(cls, coefficients: Sequence[complex], name: str = "") -> StabilityPolynomial:
        return cls(tuple(coefficients), (1 + 0j,), name)

    @classmethod
    def taylor_polynomial(cls, order: int) -> StabilityPolynomial:
        return cls.explicit([1.0 / math.factorial(k) for k in range(order + 1)], f"taylor-{order}")

    @property
    def kind(self) -> StabilityKind:
        if len(self.denominator) == 1:
            return StabilityKind.EXPLICIT
        return StabilityKind.RATIONAL

    @property
    def coefficients(self) -> tuple[complex, ...]:
        return self.numerator

    @property
    def degree(self) -> int:
        nonzero = [k for k, c in enumerate(self.numerator) if c != 0]
        return nonzero[-1] if nonzero else 0

    @property
    def stages(self) -> int:
        """Substeps per macro-step: the larger of the numerator and denominator degrees."""
        nonzero = [k for k, c in enumerate(self.denominator) if c != 0]
        return max(self.degree, nonzero[-1] if nonzero else 0, 1)

    def per_stage(self) -> StabilityPolynomial:
        """Phi(n z) with n = ``stages``, so z is the step per substep."""
        n = self.stages
        numerator = tuple(c * n**k for k, c in enumerate(self.numerator))
        denominator = tuple(c * n**k for k, c in enumerate(self.denominator))
        return StabilityPolynomial(numerator, denominator, self.name)

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0 for c in (*self.numerator, *self.denominator))

    def __call__(self, z: Any) -> Any:
        z = np.asarray(z, dtype=complex)
        num = P.polyval(z, np.asarray(self.numerator))
        if self.kind is StabilityKind.EXPLICIT:
            return num
        den = P.polyval(z, np.asarray(self.denominator))
        small = np.abs(den) < POLE_GUARD
        return np.where(small, np.inf, num / np.where(small, 1.0, den))

    def taylor(self, order: int) -> np.ndarray:
        return rational_series(self.numerator, self.denominator, order)

    def consistency_order(self, max_order: int = 8) -> int:
        series = self.taylor(max_order)
        achieved = 0
        for k in range(1, max_order + 1):
            if abs(series[k] - 1.0 / math.factorial(k)) > CONSISTENCY_TOL:
                break
            achieved = k
        return achieved

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "kind": self.kind.value,
            "name": self.name,
            "coefficients": [encode_complex(c) for c in self.numerator],
        }
        if self.kind is StabilityKind.RATIONAL:
            payload["denominator"] = [encode_complex(c) for c in self.denominator]
        return payload

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> StabilityPolynomial:
        try:
            numerator = tuple(decode_complex(c) for c in payload["coefficients"])
            denominator = tuple(decode_complex(c) for c in payload.get("denominator", [[1.0, 0.0]]))
            return cls(numerator, denominator, str(payload.get("name", "")))
        except (KeyError, TypeError) as exc:
            raise ArgumentError(f"malformed stability polynomial document: {exc}") from exc


def stability_function(path: ComplexPath, variant: str | None = None) -> StabilityPolynomial:
    """Phi for ydot = lambda y, z = lambda dt, of one macro-step along ``path``.

    ``variant`` defaults from the path's validity class: implicit classes use
    their own rule, every other class is explicit Euler substeps.
    """
    if variant is None:
        variant = path.validity_class.value
        if path.validity_class not in (ValidityClass.IMPLICIT_MIDPOINT, ValidityClass.BACKWARD_EULER):
            variant = "explicit"
    if variant == "explicit":
        return StabilityPolynomial.explicit(elementary_symmetric_all(path.weights), path.name)
    numerator, denominator = implicit_factors(path.weights, variant)
    return StabilityPolynomial(tuple(numerator), tuple(denominator), path.name)


def weights_from_polynomial(phi: StabilityPolynomial, name: str = "") -> ComplexPath:
    """Euler-path weights whose stability function is ``phi``."""
    if phi.kind is not StabilityKind.EXPLICIT:
        raise ArgumentError("only explicit polynomials factor into Euler substeps")
    n = phi.degree
    if n == 0:
        raise ArgumentError("a constant stability function has no steps")
    c = np.asarray(phi.numerator[: n + 1], dtype=complex)
    # increasing powers of prod(z - w_i): coefficient of z^(n-k) is (-1)^k c_k
    monic = np.array([(-1.0) ** (n - j) * c[n - j] for j in range(n + 1)], dtype=complex)
    roots = polish_roots(monic, P.polyroots(monic).astype(complex))
    roots = np.array(sorted(roots, key=lambda r: (round(r.real, 12), round(r.imag, 12))), dtype=complex)
    rebuilt = elementary_symmetric_all(roots)
    residual = float(np.max(np.abs(rebuilt - c)))
    if not np.isfinite(residual) or residual > ROUND_TRIP_TOL:
        raise NumericError(
            "stability polynomial roots do not reproduce its coefficients",
            {"residual": residual, "roots": [complex(r) for r in roots]},
        )
    order = max(1, phi.consistency_order(n))
    return ComplexPath(tuple(roots), order, ValidityClass.LINEAR_ONLY, False, name or phi.name)
