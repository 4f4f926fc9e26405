from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parent.parent

OUT_DIR = os.getenv("COMPLEXPATH_OUT_DIR", "results")
FIXTURE_DIR = os.getenv("COMPLEXPATH_FIXTURE_DIR", "fixtures")
LOG_LEVEL = os.getenv("COMPLEXPATH_LOG_LEVEL", "INFO")

COMPOSITE_FIXTURE_NAME = "composite-rk23"
VDP_REFERENCE_METHOD = "rk4"


class ConfigError(RuntimeError):
    """Raised when application configuration is invalid."""


def _env_number(name: str, default: str, kind: type) -> int | float:
    raw = os.getenv(name, default).strip()
    try:
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be a {kind.__name__}, got {raw!r}") from exc


@dataclass(frozen=True)
class AppSettings:
    project_root: Path = PROJECT_ROOT
    out_dir: Path = PROJECT_ROOT / OUT_DIR
    fixture_dir: Path = PROJECT_ROOT / FIXTURE_DIR
    log_level: str = LOG_LEVEL
    seed: int = 0
    heat_cells: int = 10_000
    vdp_reference_dt: float = 1e-6
    solver_starts: int = 10_000


def get_settings(**overrides: object) -> AppSettings:
    settings = AppSettings(
        seed=int(_env_number("COMPLEXPATH_SEED", "0", int)),
        heat_cells=int(_env_number("COMPLEXPATH_HEAT_CELLS", "10000", int)),
        vdp_reference_dt=float(_env_number("COMPLEXPATH_VDP_REFERENCE_DT", "1e-6", float)),
        solver_starts=int(_env_number("COMPLEXPATH_SOLVER_STARTS", "10000", int)),
    )
    if settings.log_level.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
        raise ConfigError(f"COMPLEXPATH_LOG_LEVEL is not a logging level: {settings.log_level!r}")
    if settings.heat_cells < 8:
        raise ConfigError("COMPLEXPATH_HEAT_CELLS must be at least 8")
    if settings.vdp_reference_dt <= 0:
        raise ConfigError("COMPLEXPATH_VDP_REFERENCE_DT must be positive")
    clean = {key: value for key, value in overrides.items() if value is not None}
    return replace(settings, **clean) if clean else settings
