"""
Command line interface of lmm_interp.

Usage:
    python -m lmm_interp sweep --figure 1
    python -m lmm_interp dynamics --figure 4 --seed 7 --out results/
    python -m lmm_interp impvol --figure 6 --paths 1000000
    python -m lmm_interp check --paths 100000

Exit codes: 0 on success, 1 when acceptance checks fail, 2 on configuration
errors, 3 on numerical failures.
"""

import argparse
import logging
import sys
from typing import List, Optional

from lmm_interp import __version__
from lmm_interp.engine import Engine
from lmm_interp.exception.config_failure import ConfigFailure
from lmm_interp.exception.model_failure import ModelFailure
from lmm_interp.exception.numerical_failure import NumericalFailure
from lmm_interp.scenario import METHODS, ScenarioConfig

logger = logging.getLogger("lmm_interp")

COMMANDS = {
    "sweep": "initial forwards f(0,T) and forward LIBORs L(0,T) (figures 1-3)",
    "dynamics": "interpolated rates along one simulated path (figures 4-5)",
    "impvol": "Monte Carlo and approximate caplet implied volatilities (figures 6-7)",
    "check": "run the acceptance checks",
}

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser of the command line interface."""
    parser = argparse.ArgumentParser(
        prog="lmm_interp",
        description="Arbitrage-free interpolation of the discrete tenor LIBOR market model.",
    )
    parser.add_argument("-v", "--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    verbosity.add_argument("--quiet", action="store_true", help="log warnings only")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, summary in COMMANDS.items():
        sub = subparsers.add_parser(command, help=summary, description=summary)
        sub.add_argument("--figure", type=int, help="figure preset 1-7")
        sub.add_argument("--config", help="key=value scenario file")
        sub.add_argument("--paths", type=int, help="number of Monte Carlo paths")
        sub.add_argument("--seed", type=int, help="64-bit seed")
        sub.add_argument("--method", choices=METHODS, help="interpolation method")
        sub.add_argument("--out", help="output directory for the CSV files")
    return parser


def load_scenario(args: argparse.Namespace) -> ScenarioConfig:
    """
    Build the scenario of a command: the config file (or the figure preset,
    or the defaults), then the command line flags on top.

    Raises:
        ConfigFailure: On an invalid file or flag.
    """
    if args.config:
        scenario = ScenarioConfig.from_file(args.config, args.figure)
    elif args.figure is not None:
        scenario = ScenarioConfig.for_figure(args.figure)
    else:
        scenario = ScenarioConfig()
    return scenario.override(
        n_paths=args.paths, seed=args.seed, method=args.method, output_dir=args.out
    )


def run(args: argparse.Namespace) -> int:
    """
    Run a parsed command and return its exit code.
    """
    scenario = load_scenario(args)
    engine = Engine(scenario)
    response = engine.run(args.command)
    path = engine.output_path(args.command)
    if args.command == "check":
        path.parent.mkdir(parents=True, exist_ok=True)
        response.get_frame().to_csv(path, index=False)
        for result in response.get_results():
            print(f"[{'PASS' if result.passed else 'FAIL'}] {result.name}: {result.detail}")
        print(response.get_message())
        logger.info("Wrote %s.", path)
        return EXIT_OK if response.is_status_ok() else EXIT_CHECKS_FAILED
    response.write_csv(path)
    for note in response.get_diagnostics():
        logger.warning(note)
    logger.info("Wrote %s.", path)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of `python -m lmm_interp`.
    """
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except ConfigFailure as error:
        logger.error("Configuration error: %s", error)
        return EXIT_CONFIG
    except NumericalFailure as error:
        logger.error("Numerical failure: %s", error)
        return EXIT_NUMERICAL
    except ModelFailure as error:
        logger.error("Model error: %s", error)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
