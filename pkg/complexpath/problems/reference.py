from __future__ import annotations

import logging

import numpy as np

from complexpath.config import VDP_REFERENCE_METHOD, get_settings
from complexpath.errors import CapabilityError
from complexpath.integrators import integrate, reference_methods
from complexpath.problems.model import OdeProblem
from complexpath.storage import FixtureStore

logger = logging.getLogger(__name__)

MAX_STORED_ROWS = 1000


def reference_name(problem: OdeProblem, dt: float) -> str:
    params = "-".join(f"{key}{value:g}" for key, value in sorted(problem.parameters.items()))
    return f"{problem.name}-{params}-T{problem.t_end:g}-dt{dt:g}".replace("--", "-")


def generate_reference(problem: OdeProblem, store: FixtureStore, dt: float | None = None) -> np.ndarray:
    """Terminal state from a fine reference run, generated once and cached on disk."""
    dt = get_settings().vdp_reference_dt if dt is None else dt
    name = reference_name(problem, dt)
    cached = store.load_reference(name)
    if cached is not None:
        _, _, states = cached
        return states[-1]

    logger.info("generating %s reference for %s with dt=%g", VDP_REFERENCE_METHOD, problem.name, dt)
    method = reference_methods()[VDP_REFERENCE_METHOD]
    result = integrate(problem, method, dt)
    stride = max(1, result.steps // MAX_STORED_ROWS)
    keep = np.unique(np.append(np.arange(0, result.steps + 1, stride), result.steps))
    header = {
        "generator": VDP_REFERENCE_METHOD,
        "dt": format(dt, ".17g"),
        "t_end": format(problem.t_end, ".17g"),
        "problem": problem.name,
        **{key: value for key, value in problem.parameters.items()},
    }
    store.save_reference(name, result.times[keep], result.states[keep], header)
    return result.final_state


def reference_solution(problem: OdeProblem, store: FixtureStore | None = None, dt: float | None = None) -> np.ndarray:
    if problem.has_exact:
        return problem.exact_at(problem.t_end)
    if store is None:
        raise CapabilityError(f"{problem.name} has no closed form and no fixture store was given for a reference")
    return generate_reference(problem, store, dt)
