from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Any, Callable, Sequence

from complexpath import __version__
from complexpath.config import ConfigError, get_settings
from complexpath.errors import ArgumentError, CapabilityError, CheckFailure, InternalError, NotFoundError, NumericError
from complexpath.experiments import (
    ExperimentConfig,
    check_composite,
    check_convergence,
    check_paths,
    check_schrodinger,
    check_ssp,
    check_stability,
    load_config,
    run_converge,
    run_header,
    run_paths,
    run_schrodinger_compare,
    run_solve_composite,
    run_ssp,
    run_stability,
)
from complexpath.observability import metrics_collector
from complexpath.output import (
    write_composite,
    write_convergence,
    write_paths,
    write_schrodinger,
    write_ssp,
    write_stability,
)
from complexpath.storage import FixtureStore

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_CHECK = 4

COMMANDS = ("converge", "stability", "paths", "ssp", "schrodinger", "solve-composite")


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, CheckFailure):
        return EXIT_CHECK
    if isinstance(exc, (ConfigError, ArgumentError, NotFoundError, CapabilityError)):
        return EXIT_CONFIG
    if isinstance(exc, (NumericError, InternalError)):
        return EXIT_NUMERIC
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="complexpath", description="Complex time-step path experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subcommands = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = subcommands.add_parser(name)
        sub.add_argument("--config", type=Path, help="JSON experiment document")
        sub.add_argument("--seed", type=int)
        sub.add_argument("--out", type=Path, help="output directory")
        sub.add_argument("--fair", action="store_true", default=None, help="match function evaluations per unit time")
        sub.add_argument("--check", action="store_true", help="fail with exit code 4 when a threshold is missed")
        sub.add_argument("--problem", dest="problems", action="append", help="problem name (repeatable)")
        sub.add_argument("--method", dest="methods", action="append", help="method or path name (repeatable)")
        sub.add_argument("--t-end", dest="t_end", type=float)
        sub.add_argument("--norm", choices=("inf", "2", "relative"))
        if name == "stability":
            sub.add_argument("--scaling", choices=("raw", "per-stage"), help="z = lambda dt, or z / n per substep")
    return parser


def overrides_from(args: argparse.Namespace) -> dict[str, Any]:
    return {
        "seed": args.seed,
        "fair": args.fair,
        "problems": args.problems,
        "methods": args.methods,
        "t_end": args.t_end,
        "norm": args.norm,
        "scaling": getattr(args, "scaling", None),
    }


def _fixture_store() -> FixtureStore:
    return FixtureStore(get_settings().fixture_dir)


def _converge(config: ExperimentConfig, out: Path, check: bool) -> list[Path]:
    tables = run_converge(config, _fixture_store())
    written = write_convergence(tables, out, run_header(config))
    if check:
        check_convergence(tables, config)
    return written


def _stability(config: ExperimentConfig, out: Path, check: bool) -> list[Path]:
    result = run_stability(config)
    written = write_stability(result, out, run_header(config))
    if check:
        check_stability(result, config)
    return written


def _paths(config: ExperimentConfig, out: Path, check: bool) -> list[Path]:
    rows = run_paths(config)
    written = write_paths(rows, out, run_header(config))
    if check:
        check_paths(rows, config)
    return written


def _ssp(config: ExperimentConfig, out: Path, check: bool) -> list[Path]:
    curve = run_ssp(config)
    written = write_ssp(curve, out, run_header(config))
    if check:
        check_ssp(curve, config)
    return written


def _schrodinger(config: ExperimentConfig, out: Path, check: bool) -> list[Path]:
    comparison = run_schrodinger_compare(config)
    written = write_schrodinger(comparison, out, run_header(config))
    if check:
        check_schrodinger(comparison, config)
    return written


def _solve_composite(config: ExperimentConfig, out: Path, check: bool) -> list[Path]:
    outcome = run_solve_composite(config, _fixture_store())
    written = write_composite(outcome, out, run_header(config))
    if check:
        check_composite(outcome, config)
    return written


HANDLERS: dict[str, Callable[[ExperimentConfig, Path, bool], list[Path]]] = {
    "converge": _converge,
    "stability": _stability,
    "paths": _paths,
    "ssp": _ssp,
    "schrodinger": _schrodinger,
    "solve-composite": _solve_composite,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run one experiment and return its exit code; errors propagate."""
    args = build_parser().parse_args(argv)
    config = load_config(args.config, args.command, overrides_from(args))
    out = args.out or (Path(config.out_dir) if config.out_dir else get_settings().out_dir / args.command)
    logger.info("running %s into %s (seed %d)", args.command, out, config.seed)
    try:
        written = HANDLERS[args.command](config, out, args.check)
    finally:
        logger.info("metrics: %s", metrics_collector.snapshot())
    for path in written:
        print(path)
    return EXIT_OK
