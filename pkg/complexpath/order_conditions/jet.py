"""Truncated power series in the step size h.

Coefficients are polynomials over the indeterminates F_{a,b}, the partial
derivatives d^{a+b} f / dt^a dy^b of a scalar right-hand side at (t0, y0).
A monomial is a sorted tuple of ``((a, b), power)`` pairs; the empty tuple
is the constant monomial. Coefficient values may be Python/NumPy scalars or
NumPy arrays, which lets one jet carry a whole batch of numeric schemes.
"""

from __future__ import annotations

import math
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Iterator, Mapping

import numpy as np

from complexpath.errors import ArgumentError

MAX_ORDER = 6

Indeterminate = tuple[int, int]
Monomial = tuple[tuple[Indeterminate, int], ...]
ONE: Monomial = ()


class Restriction(str, Enum):
    NON_AUTONOMOUS = "non-autonomous"
    AUTONOMOUS = "autonomous"
    LINEAR = "linear"

    def allows(self, a: int, b: int) -> bool:
        if self is Restriction.NON_AUTONOMOUS:
            return True
        if self is Restriction.AUTONOMOUS:
            return a == 0
        return a == 0 and b <= 1

    def allows_monomial(self, monomial: Monomial) -> bool:
        return all(self.allows(a, b) for (a, b), _ in monomial)


@lru_cache(maxsize=None)
def multiply_monomials(left: Monomial, right: Monomial) -> Monomial:
    if not left:
        return right
    if not right:
        return left
    merged = dict(left)
    for factor, power in right:
        merged[factor] = merged.get(factor, 0) + power
    return tuple(sorted(merged.items()))


def monomial_order(monomial: Monomial) -> int:
    """Elementary-differential order: each F_{a,b} counts 1 + a."""
    return sum(power * (1 + a) for (a, _), power in monomial)


def monomial_label(monomial: Monomial) -> str:
    if not monomial:
        return "1"
    parts = []
    for (a, b), power in monomial:
        parts.append(f"F{a}{b}" if power == 1 else f"F{a}{b}^{power}")
    return "*".join(parts)


def _is_zero(value: Any) -> bool:
    if isinstance(value, np.ndarray):
        return False
    return value == 0


class Jet:
    __slots__ = ("order", "_terms")

    def __init__(self, order: int, terms: Mapping[int, Mapping[Monomial, Any]] | None = None) -> None:
        if not 0 <= order <= MAX_ORDER:
            raise ArgumentError(f"jet order must lie in [0, {MAX_ORDER}], got {order}")
        self.order = order
        self._terms: dict[int, dict[Monomial, Any]] = {}
        for k, bucket in (terms or {}).items():
            if 0 <= k <= order and bucket:
                self._terms[k] = dict(bucket)

    @classmethod
    def _wrap(cls, order: int, terms: dict[int, dict[Monomial, Any]]) -> Jet:
        jet = cls.__new__(cls)
        jet.order = order
        jet._terms = {k: bucket for k, bucket in terms.items() if bucket}
        return jet

    @classmethod
    def zero(cls, order: int) -> Jet:
        return cls(order)

    @classmethod
    def constant(cls, order: int, value: Any = 1.0) -> Jet:
        return cls._wrap(order, {0: {ONE: value}})

    @classmethod
    def h_power(cls, order: int, coefficient: Any = 1.0, power: int = 1) -> Jet:
        if power > order:
            return cls(order)
        return cls._wrap(order, {power: {ONE: coefficient}})

    @classmethod
    def indeterminate(cls, order: int, a: int, b: int) -> Jet:
        return cls._wrap(order, {0: {(((a, b), 1),): 1.0}})

    def is_zero(self) -> bool:
        return not self._terms

    def powers(self) -> list[int]:
        return sorted(self._terms)

    def monomials(self, k: int) -> list[Monomial]:
        return sorted(self._terms.get(k, {}))

    def coefficient(self, k: int, monomial: Monomial = ONE) -> Any:
        return self._terms.get(k, {}).get(monomial, 0.0)

    def terms(self) -> Iterator[tuple[int, Monomial, Any]]:
        for k in sorted(self._terms):
            for monomial in sorted(self._terms[k]):
                yield k, monomial, self._terms[k][monomial]

    def __len__(self) -> int:
        return sum(len(bucket) for bucket in self._terms.values())

    def _combine(self, other: Jet, sign: float) -> Jet:
        order = min(self.order, other.order)
        out = {k: dict(bucket) for k, bucket in self._terms.items() if k <= order}
        for k, bucket in other._terms.items():
            if k > order:
                continue
            target = out.setdefault(k, {})
            for monomial, value in bucket.items():
                prev = target.get(monomial)
                add = value if sign > 0 else -value
                target[monomial] = add if prev is None else prev + add
        return Jet._wrap(order, out)

    def __add__(self, other: Any) -> Jet:
        if isinstance(other, Jet):
            return self._combine(other, 1.0)
        return self._combine(Jet.constant(self.order, other), 1.0)

    __radd__ = __add__

    def __neg__(self) -> Jet:
        return self * -1.0

    def __sub__(self, other: Any) -> Jet:
        if isinstance(other, Jet):
            return self._combine(other, -1.0)
        return self._combine(Jet.constant(self.order, other), -1.0)

    def __rsub__(self, other: Any) -> Jet:
        return (-self) + other

    def __mul__(self, other: Any) -> Jet:
        if not isinstance(other, Jet):
            if _is_zero(other):
                return Jet(self.order)
            return Jet._wrap(
                self.order,
                {k: {m: c * other for m, c in bucket.items()} for k, bucket in self._terms.items()},
            )
        order = min(self.order, other.order)
        out: dict[int, dict[Monomial, Any]] = {}
        for k1, left in self._terms.items():
            for k2, right in other._terms.items():
                k = k1 + k2
                if k > order:
                    continue
                bucket = out.setdefault(k, {})
                for m1, c1 in left.items():
                    for m2, c2 in right.items():
                        m = multiply_monomials(m1, m2)
                        prev = bucket.get(m)
                        bucket[m] = c1 * c2 if prev is None else prev + c1 * c2
        return Jet._wrap(order, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Any) -> Jet:
        return self * (1.0 / scalar)

    def __pow__(self, exponent: int) -> Jet:
        if exponent < 0:
            raise ArgumentError("jets only support non-negative integer powers")
        result = Jet.constant(self.order, 1.0)
        for _ in range(exponent):
            result = result * self
        return result

    def times_indeterminate(self, a: int, b: int) -> Jet:
        factor: Monomial = (((a, b), 1),)
        return Jet._wrap(
            self.order,
            {
                k: {multiply_monomials(m, factor): c for m, c in bucket.items()}
                for k, bucket in self._terms.items()
            },
        )

    def shift(self, power: int = 1, order: int | None = None) -> Jet:
        """Multiply by h**power, keeping terms up to ``order`` (default: own order)."""
        order = self.order if order is None else order
        return Jet._wrap(
            order,
            {k + power: dict(bucket) for k, bucket in self._terms.items() if k + power <= order},
        )

    def truncate(self, order: int) -> Jet:
        order = min(order, self.order)
        return Jet._wrap(order, {k: dict(b) for k, b in self._terms.items() if k <= order})

    def restricted(self, restriction: Restriction) -> Jet:
        return Jet._wrap(
            self.order,
            {
                k: {m: c for m, c in bucket.items() if restriction.allows_monomial(m)}
                for k, bucket in self._terms.items()
            },
        )

    def map(self, fn: Callable[[Any], Any]) -> Jet:
        return Jet._wrap(self.order, {k: {m: fn(c) for m, c in b.items()} for k, b in self._terms.items()})

    def max_abs_difference(self, other: Jet, upto: int | None = None) -> float:
        upto = min(self.order, other.order) if upto is None else upto
        worst = 0.0
        for k in range(upto + 1):
            mine = self._terms.get(k, {})
            theirs = other._terms.get(k, {})
            for monomial in set(mine) | set(theirs):
                diff = np.max(np.abs(mine.get(monomial, 0.0) - theirs.get(monomial, 0.0)))
                worst = max(worst, float(diff))
        return worst

    def max_abs_coefficient(self) -> float:
        return max((float(np.max(np.abs(c))) for _, _, c in self.terms()), default=0.0)

    def is_consistent(self, offset: int = 0) -> bool:
        """True when every monomial at h^k has elementary-differential order k + offset."""
        return all(monomial_order(m) == k + offset for k, m, _ in self.terms() if k + offset > 0 or m)

    def evaluate(self, values: Mapping[Indeterminate, Any]) -> list[Any]:
        """Substitute numeric derivative values; returns one coefficient per h-power."""
        out: list[Any] = [0.0] * (self.order + 1)
        for k, monomial, coeff in self.terms():
            product = coeff
            for factor, power in monomial:
                product = product * values.get(factor, 0.0) ** power
            out[k] = out[k] + product
        return out

    def __repr__(self) -> str:
        shown = [f"{c}*h^{k}*{monomial_label(m)}" for k, m, c in self.terms()]
        return f"Jet(order={self.order}, {' + '.join(shown) or '0'})"


def factorial_weight(a: int, b: int) -> float:
    return 1.0 / (math.factorial(a) * math.factorial(b))
