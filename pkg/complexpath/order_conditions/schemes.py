from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping, Sequence

from complexpath.errors import ArgumentError
from complexpath.paths.model import ComplexPath, ValidityClass, decode_complex, encode_complex

SUM_TOL = 1e-12

COMPOSITE_NAMES = ("a121", "b11", "b12", "a221", "a231", "a232", "b21", "b22", "b23")


class SchemeVariant(str, Enum):
    EULER_PATH = "euler-path"
    IMPLICIT_MIDPOINT_PATH = "implicit-midpoint-path"
    BACKWARD_EULER_PATH = "backward-euler-path"
    COMPOSITE_RK23 = "composite-rk23"
    RUNGE_KUTTA = "runge-kutta"

    @property
    def is_path(self) -> bool:
        return self in (
            SchemeVariant.EULER_PATH,
            SchemeVariant.IMPLICIT_MIDPOINT_PATH,
            SchemeVariant.BACKWARD_EULER_PATH,
        )


_PATH_VARIANTS = {
    ValidityClass.IMPLICIT_MIDPOINT: SchemeVariant.IMPLICIT_MIDPOINT_PATH,
    ValidityClass.BACKWARD_EULER: SchemeVariant.BACKWARD_EULER_PATH,
}


def _check_sum(values: Sequence[complex], what: str) -> None:
    total_re = math.fsum(v.real for v in values)
    total_im = math.fsum(v.imag for v in values)
    if abs(total_re - 1.0) > SUM_TOL or abs(total_im) > SUM_TOL:
        raise ArgumentError(f"{what} must sum to 1, got {complex(total_re, total_im)!r}")


@dataclass(frozen=True)
class SchemeDescriptor:
    """A one-step scheme the jet engine and the integrators can both execute.

    Path variants carry ``weights``. ``composite-rk23`` carries the nine
    coefficients of one two-stage step followed by one three-stage step, in
    ``COMPOSITE_NAMES`` order. ``runge-kutta`` carries an explicit tableau.
    """

    variant: SchemeVariant
    weights: tuple[complex, ...] = ()
    coefficients: tuple[complex, ...] = ()
    tableau_a: tuple[tuple[complex, ...], ...] = ()
    tableau_b: tuple[complex, ...] = ()
    real_projection: bool = False
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", SchemeVariant(self.variant))
        object.__setattr__(self, "weights", tuple(complex(w) for w in self.weights))
        object.__setattr__(self, "coefficients", tuple(complex(c) for c in self.coefficients))
        object.__setattr__(self, "tableau_a", tuple(tuple(complex(a) for a in row) for row in self.tableau_a))
        object.__setattr__(self, "tableau_b", tuple(complex(b) for b in self.tableau_b))

        if self.variant.is_path:
            if not self.weights:
                raise ArgumentError("path schemes need at least one weight")
            _check_sum(self.weights, "path weights")
        elif self.variant is SchemeVariant.COMPOSITE_RK23:
            if len(self.coefficients) != len(COMPOSITE_NAMES):
                raise ArgumentError(f"composite-rk23 needs {len(COMPOSITE_NAMES)} coefficients")
            c = self.composite_coefficients()
            _check_sum([c["b11"], c["b12"], c["b21"], c["b22"], c["b23"]], "composite b coefficients")
        else:
            if not self.tableau_b or len(self.tableau_a) != len(self.tableau_b):
                raise ArgumentError("a Runge-Kutta tableau needs one A row per b entry")
            for i, row in enumerate(self.tableau_a):
                if len(row) != i:
                    raise ArgumentError(f"row {i} of an explicit tableau must have {i} entries")
            _check_sum(self.tableau_b, "tableau weights")

    @classmethod
    def from_path(cls, path: ComplexPath, variant: SchemeVariant | None = None) -> SchemeDescriptor:
        variant = variant or _PATH_VARIANTS.get(path.validity_class, SchemeVariant.EULER_PATH)
        return cls(
            variant=variant,
            weights=path.weights,
            real_projection=path.requires_real_projection,
            name=path.name,
        )

    @classmethod
    def composite(
        cls, values: Mapping[str, complex] | Sequence[complex], real_projection: bool = True, name: str = ""
    ) -> SchemeDescriptor:
        if isinstance(values, Mapping):
            missing = [key for key in COMPOSITE_NAMES if key not in values]
            if missing:
                raise ArgumentError(f"missing composite coefficients: {', '.join(missing)}")
            values = [values[key] for key in COMPOSITE_NAMES]
        return cls(
            variant=SchemeVariant.COMPOSITE_RK23,
            coefficients=tuple(values),
            real_projection=real_projection,
            name=name,
        )

    @classmethod
    def runge_kutta(
        cls,
        tableau_a: Sequence[Sequence[complex]],
        tableau_b: Sequence[complex],
        name: str = "",
        real_projection: bool = False,
    ) -> SchemeDescriptor:
        return cls(
            variant=SchemeVariant.RUNGE_KUTTA,
            tableau_a=tuple(tuple(row) for row in tableau_a),
            tableau_b=tuple(tableau_b),
            real_projection=real_projection,
            name=name,
        )

    @property
    def implicit(self) -> bool:
        return self.variant in (SchemeVariant.IMPLICIT_MIDPOINT_PATH, SchemeVariant.BACKWARD_EULER_PATH)

    @property
    def stages(self) -> int:
        """Right-hand-side evaluations per step for explicit variants, substeps otherwise."""
        if self.variant.is_path:
            return len(self.weights)
        if self.variant is SchemeVariant.COMPOSITE_RK23:
            return 5
        return len(self.tableau_b)

    def composite_coefficients(self) -> dict[str, complex]:
        if self.variant is not SchemeVariant.COMPOSITE_RK23:
            raise ArgumentError(f"{self.variant.value} schemes have no composite coefficients")
        return dict(zip(COMPOSITE_NAMES, self.coefficients))

    def butcher(self) -> tuple[tuple[tuple[complex, ...], ...], tuple[complex, ...]]:
        """Explicit tableau; the composite scheme unrolls into five stages."""
        if self.variant is SchemeVariant.RUNGE_KUTTA:
            return self.tableau_a, self.tableau_b
        if self.variant is SchemeVariant.EULER_PATH:
            n = len(self.weights)
            rows = tuple(tuple(self.weights[:i]) for i in range(n))
            return rows, self.weights
        if self.variant is SchemeVariant.COMPOSITE_RK23:
            return composite_tableau(self.composite_coefficients())
        raise ArgumentError(f"{self.variant.value} schemes are implicit and have no explicit tableau")

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "name": self.name,
            "variant": self.variant.value,
            "real_projection": self.real_projection,
        }
        if self.variant.is_path:
            payload["weights"] = [encode_complex(w) for w in self.weights]
        elif self.variant is SchemeVariant.COMPOSITE_RK23:
            payload["coefficients"] = {k: encode_complex(v) for k, v in self.composite_coefficients().items()}
        else:
            payload["tableau_a"] = [[encode_complex(a) for a in row] for row in self.tableau_a]
            payload["tableau_b"] = [encode_complex(b) for b in self.tableau_b]
        return payload

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> SchemeDescriptor:
        try:
            variant = SchemeVariant(payload["variant"])
            common = {
                "real_projection": bool(payload.get("real_projection", False)),
                "name": str(payload.get("name", "")),
            }
            if variant.is_path:
                return cls(variant, weights=tuple(decode_complex(w) for w in payload["weights"]), **common)
            if variant is SchemeVariant.COMPOSITE_RK23:
                raw = payload["coefficients"]
                return cls.composite({k: decode_complex(v) for k, v in raw.items()}, **common)
            return cls.runge_kutta(
                [[decode_complex(a) for a in row] for row in payload["tableau_a"]],
                [decode_complex(b) for b in payload["tableau_b"]],
                **common,
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ArgumentError):
                raise
            raise ArgumentError(f"malformed scheme document: {exc}") from exc


def composite_tableau(c: Mapping[str, Any]) -> tuple[tuple[tuple[Any, ...], ...], tuple[Any, ...]]:
    """Five-stage tableau of the two-stage step followed by the three-stage step.

    Values may be arrays; nothing here coerces to ``complex``.
    """
    rows = (
        (),
        (c["a121"],),
        (c["b11"], c["b12"]),
        (c["b11"], c["b12"], c["a221"]),
        (c["b11"], c["b12"], c["a231"], c["a232"]),
    )
    return rows, (c["b11"], c["b12"], c["b21"], c["b22"], c["b23"])
