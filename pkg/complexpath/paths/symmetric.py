from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from complexpath.errors import ArgumentError


def elementary_symmetric_all(weights: Sequence[complex]) -> np.ndarray:
    """Return ``[e_0, ..., e_n]``, the coefficients of prod(1 + w_i z)."""
    w = np.asarray(weights, dtype=complex)
    if w.size == 0:
        return np.ones(1, dtype=complex)
    monic = P.polyfromroots(w)
    signs = (-1.0) ** np.arange(w.size + 1)
    return signs * monic[::-1]


def elementary_symmetric(weights: Sequence[complex], k: int) -> complex:
    if not 0 <= k <= len(weights):
        raise ArgumentError(f"k must lie in [0, {len(weights)}], got {k}")
    return complex(elementary_symmetric_all(weights)[k])


def stage_square_moment(weights: Sequence[complex]) -> complex:
    """sum_i w_i (w_1 + ... + w_{i-1})^2, the f^2 f_yy weight of an Euler path."""
    total = 0j
    running = 0j
    for w in weights:
        total += complex(w) * running * running
        running += complex(w)
    return total


def exp_taylor(order: int) -> np.ndarray:
    return np.array([1.0 / math.factorial(k) for k in range(order + 1)], dtype=complex)


def rational_series(numerator: Sequence[complex], denominator: Sequence[complex], order: int) -> np.ndarray:
    """Taylor coefficients 0..order of numerator/denominator around z = 0."""
    num = np.zeros(order + 1, dtype=complex)
    den = np.zeros(order + 1, dtype=complex)
    num[: min(len(numerator), order + 1)] = np.asarray(numerator, dtype=complex)[: order + 1]
    den[: min(len(denominator), order + 1)] = np.asarray(denominator, dtype=complex)[: order + 1]
    if den[0] == 0:
        raise ArgumentError("denominator must not vanish at z = 0")
    series = np.zeros(order + 1, dtype=complex)
    for k in range(order + 1):
        series[k] = (num[k] - np.dot(den[1 : k + 1], series[k - 1 :: -1][:k])) / den[0]
    return series


def implicit_factors(weights: Sequence[complex], variant: str) -> tuple[np.ndarray, np.ndarray]:
    """Numerator and denominator coefficients of an implicit path's stability function."""
    e = elementary_symmetric_all(weights)
    powers = np.arange(e.size)
    alternating = (-1.0) ** powers
    if variant == "implicit-midpoint":
        scaled = e / 2.0**powers
        return scaled, alternating * scaled
    if variant == "backward-euler":
        return np.ones(1, dtype=complex), alternating * e
    raise ArgumentError(f"unknown implicit variant {variant!r}")
