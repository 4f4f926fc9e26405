from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Any, Iterable, Mapping

import numpy as np

from complexpath.config import COMPOSITE_FIXTURE_NAME
from complexpath.errors import ArgumentError, NotFoundError
from complexpath.integrators.newton import NewtonConfig
from complexpath.integrators.rhs import CountedRhs
from complexpath.integrators.steppers import scheme_step
from complexpath.order_conditions.schemes import SchemeDescriptor, SchemeVariant
from complexpath.paths import library
from complexpath.paths.model import ComplexPath

if TYPE_CHECKING:
    from complexpath.storage import FixtureStore


@dataclass(frozen=True)
class MethodSpec:
    name: str
    scheme: SchemeDescriptor
    order: int

    @property
    def requires_real_projection(self) -> bool:
        return self.scheme.real_projection

    @property
    def evaluations_per_step(self) -> int:
        """Nominal right-hand-side evaluations per macro-step (substeps for implicit paths)."""
        return self.scheme.stages

    @classmethod
    def from_path(cls, path: ComplexPath) -> MethodSpec:
        return cls(path.name, SchemeDescriptor.from_path(path), path.order_claim)

    @classmethod
    def from_scheme(cls, scheme: SchemeDescriptor, order: int, name: str = "") -> MethodSpec:
        return cls(name or scheme.name or scheme.variant.value, scheme, order)

    def step(
        self,
        rhs: CountedRhs,
        t: Any,
        y: np.ndarray,
        dt: Any,
        newton: NewtonConfig | None = None,
        check_finite: bool = True,
    ) -> np.ndarray:
        return scheme_step(rhs, t, y, dt, self.scheme, newton, check_finite)


@lru_cache(maxsize=1)
def _reference_table() -> tuple[tuple[str, MethodSpec], ...]:
    tableaux = {
        "ralston3": (((), (0.5,), (0.0, 0.75)), (2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0), 3),
        "midpoint2": (((), (0.5,)), (0.0, 1.0), 2),
        # Shu-Osher u1 = u + dt f(u), u_next = (u + u1 + dt f(u1)) / 2
        "ssprk2": (((), (1.0,)), (0.5, 0.5), 2),
        "rk4": (((), (0.5,), (0.0, 0.5), (0.0, 0.0, 1.0)), (1 / 6, 1 / 3, 1 / 3, 1 / 6), 4),
    }
    methods = []
    for name, (a, b, order) in tableaux.items():
        methods.append((name, MethodSpec(name, SchemeDescriptor.runge_kutta(a, b, name=name), order)))
    return tuple(methods)


def reference_methods() -> dict[str, MethodSpec]:
    return dict(_reference_table())


def composite_method(scheme: SchemeDescriptor) -> MethodSpec:
    if scheme.variant is not SchemeVariant.COMPOSITE_RK23:
        raise ArgumentError(f"expected a composite-rk23 scheme, got {scheme.variant.value}")
    return MethodSpec(scheme.name or COMPOSITE_FIXTURE_NAME, scheme, 5)


def method_from_json(document: str | Mapping[str, Any], order: int = 1) -> MethodSpec:
    """Inline scheme document; an optional ``order`` key sets the nominal order."""
    try:
        payload = json.loads(document) if isinstance(document, str) else dict(document)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"inline scheme is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ArgumentError("an inline scheme must be a JSON object")
    default = 5 if payload.get("variant") == SchemeVariant.COMPOSITE_RK23.value else order
    claimed = int(payload.pop("order", default))
    return MethodSpec.from_scheme(SchemeDescriptor.from_dict(payload), claimed)


def resolve_method(name: str, store: FixtureStore | None = None) -> MethodSpec:
    """Look a method up among library paths, reference methods and stored schemes."""
    if name.lstrip().startswith("{"):
        return method_from_json(name)
    paths = library()
    if name in paths:
        return MethodSpec.from_path(paths[name])
    references = reference_methods()
    if name in references:
        return references[name]
    if store is not None:
        scheme = store.load_scheme(name)
        if scheme is not None:
            if scheme.variant is SchemeVariant.COMPOSITE_RK23:
                return composite_method(scheme)
            return MethodSpec.from_scheme(scheme, 1, name)
    known = sorted([*paths, *references])
    raise NotFoundError(f"unknown method {name!r}; known methods: {', '.join(known)}")


def fair_step_sizes(methods: Iterable[MethodSpec], dt: float) -> dict[str, float]:
    """Scale each method's step so all spend the same evaluations per unit time."""
    methods = list(methods)
    if not methods:
        return {}
    most = max(method.evaluations_per_step for method in methods)
    return {method.name: dt * method.evaluations_per_step / most for method in methods}
