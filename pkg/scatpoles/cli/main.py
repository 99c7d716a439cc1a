"""``scatpoles`` command line: scan | poles | convergence | disk-oracle.

Settings are layered config JSON < environment < flags. Exit status is 0 on
success, 2 for configuration errors (nothing is written) and 3 for numerical
failures.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

from marshmallow import ValidationError

from scatpoles.cli.commands import COMMANDS
from scatpoles.cli.output import write_manifest
from scatpoles.common.console_logging import setup_console_logging
from scatpoles.config.models import RunConfig, dump_run_config, read_config_file, run_config_from_dict
from scatpoles.constants import EXIT_CONFIG_ERROR, EXIT_NUMERICAL_ERROR, EXIT_OK
from scatpoles.environment import threads_from_env
from scatpoles.scatpoles import ScatteringPoles
from scatpoles.utils import NumericalError


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="JSON run configuration.")
    common.add_argument("--n", type=int, default=None, help="Truncation order of the Galerkin matrices.")
    common.add_argument("--n-list", type=_int_list, default=None, dest="n_list", help="Orders for convergence, e.g. 5,6,7.")
    common.add_argument("--flavor", choices=["single", "double", "both"], default=None)
    common.add_argument("--seed", type=int, default=None, help="Seed of the random probing vectors.")
    common.add_argument("--threads", type=int, default=None, help="Worker threads (env SCATPOLES_THREADS).")
    common.add_argument("--output-dir", type=Path, default=None, dest="output_dir")
    common.add_argument("--grid", type=int, nargs=2, default=None, metavar=("N_RE", "N_IM"), help="Scan grid cells.")
    common.add_argument("--nu-max", type=int, default=None, dest="nu_max", help="Largest Hankel order for the oracle.")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true")
    verbosity.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="scatpoles", description="Scattering poles of sound-soft planar obstacles.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("scan", parents=[common], help="Indicator heatmap over the search region.")
    subparsers.add_parser("poles", parents=[common], help="Scan, refine and tabulate poles.")
    subparsers.add_parser("convergence", parents=[common], help="Pole error against n.")
    subparsers.add_parser("disk-oracle", parents=[common], help="Zeros of H_nu for the unit disk.")
    return parser


def effective_config(args: argparse.Namespace) -> RunConfig:
    data = read_config_file(args.config)
    env_threads = threads_from_env()
    if env_threads is not None:
        data["threads"] = env_threads
    overrides = {
        "n": args.n,
        "n_list": args.n_list,
        "flavor": args.flavor,
        "seed": args.seed,
        "threads": args.threads,
        "output": None if args.output_dir is None else str(args.output_dir),
    }
    data.update({key: value for key, value in overrides.items() if value is not None})
    if args.grid is not None:
        data["grid"] = {**data.get("grid", {}), "n_re": args.grid[0], "n_im": args.grid[1]}
    if args.nu_max is not None:
        data["oracle"] = {**data.get("oracle", {}), "nu_max": args.nu_max}
    return run_config_from_dict(data)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = "DEBUG" if args.verbose else "WARNING" if args.quiet else None
    logger = setup_console_logging(level)
    try:
        config = effective_config(args)
    except (ValueError, ValidationError, OSError) as e:
        logger.error(f"scatpoles: invalid configuration: {e}")
        return EXIT_CONFIG_ERROR

    output_dir = Path(config.output)
    started = time.perf_counter()
    poles = ScatteringPoles(config=config, logger=logging.getLogger("scatpoles"))
    try:
        result = COMMANDS[args.command](poles, output_dir)
    except NumericalError as e:
        logger.error(f"scatpoles {args.command}: numerical failure: {e}")
        return EXIT_NUMERICAL_ERROR
    except (ValueError, OSError) as e:
        logger.error(f"scatpoles {args.command}: {e}")
        return EXIT_CONFIG_ERROR
    finally:
        poles.close()
    timings = {"total_seconds": time.perf_counter() - started}
    manifest = write_manifest(output_dir, args.command, dump_run_config(config), timings, result.outputs, result.notes)
    logger.info(f"scatpoles {args.command}: wrote {', '.join(p.name for p in result.outputs + [manifest])}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
