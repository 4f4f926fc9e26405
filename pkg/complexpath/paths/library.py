from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import TYPE_CHECKING

from complexpath.errors import NotFoundError, NumericError
from complexpath.paths.model import ComplexPath, ValidityClass
from complexpath.paths.solvers import linear_path_weights, nonlinear_linear_permutations, solve_linear_path

if TYPE_CHECKING:
    from complexpath.storage import FixtureStore

logger = logging.getLogger(__name__)


def _nonlinear_pair() -> tuple[ComplexPath, ComplexPath]:
    found = nonlinear_linear_permutations()
    if len(found) != 2:
        raise NumericError(
            "expected exactly two 3-step orderings to satisfy the relaxed nonlinear conditions",
            {"found": [path.weights for path in found]},
        )
    upper = next((path for path in found if path.weights[0].imag > 0), found[0])
    lower = found[1] if upper is found[0] else found[0]
    return upper, lower


@lru_cache(maxsize=1)
def _build_library() -> tuple[tuple[str, ComplexPath], ...]:
    two = linear_path_weights(2)
    upper, lower = _nonlinear_pair()
    root3 = math.sqrt(3.0)
    root2 = math.sqrt(2.0)
    entries = [
        ComplexPath((1.0,), 1, ValidityClass.LINEAR_ONLY, False, "euler-1"),
        ComplexPath((two[1], two[0]), 2, ValidityClass.LINEAR_ONLY, False, "complex-2-linear"),
        solve_linear_path(3, max_paths=1)[0].with_class(ValidityClass.LINEAR_ONLY, 3, False, "complex-3-linear"),
        upper.with_class(ValidityClass.NONLINEAR, 3, True, "complex-3-nonlinear"),
        lower.with_class(ValidityClass.NONLINEAR, 3, True, "complex-3-nonlinear-conj"),
        ComplexPath(
            (complex(0.5, 0.5 / root3), complex(0.5, -0.5 / root3)),
            4,
            ValidityClass.IMPLICIT_MIDPOINT,
            True,
            "implicit-midpoint-2",
        ),
        upper.with_class(ValidityClass.BACKWARD_EULER, 3, True, "backward-euler-3"),
        ComplexPath(
            (complex(1.0, -1.0 / root2), complex(0.0, 1.0 / root2)),
            3,
            ValidityClass.PROBLEM_SPECIFIC,
            True,
            "problem-y2-2step",
        ),
    ]
    return tuple((path.name, path) for path in entries)


def library() -> dict[str, ComplexPath]:
    return dict(_build_library())


def lookup(name: str) -> ComplexPath:
    paths = library()
    if name not in paths:
        raise NotFoundError(f"unknown path {name!r}; known paths: {', '.join(sorted(paths))}")
    return paths[name]


def export_library(store: FixtureStore) -> list[str]:
    names = []
    for name, path in library().items():
        store.save_path(path)
        names.append(name)
    logger.info("exported %d library paths to %s", len(names), store.root)
    return names
