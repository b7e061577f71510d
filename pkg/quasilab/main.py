import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from . import __version__
from .commands import COMMANDS
from .config.app_config import Config
from .exceptions import InvalidInputError, LabException, ReportIOError

logger = logging.getLogger("quasilab")


# Main entry point of the command-line interface
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasilab",
        description="Numerical laboratory for n-quasi [m,d]-operators",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=Config.LOG_LEVEL,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper,
                        help="Diagnostics on standard error")
    subparsers = parser.add_subparsers(dest="command", metavar="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def configure_logging(level: str) -> None:
    """Install a single stderr handler; standard output is reserved for JSON"""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(getattr(logging, level.upper(), logging.WARNING))
    logger.propagate = False


def cli_dispatch(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return e.code if isinstance(e.code, int) else 2

    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except LabException as e:
        logger.error("%s: %s", e.__class__.__name__, e.detail)
        return e.exit_code
    except ValidationError as e:
        logger.error("Invalid configuration: %s", e)
        return InvalidInputError.exit_code
    except ValueError as e:
        logger.error("Invalid input: %s", e)
        return InvalidInputError.exit_code
    except OSError as e:
        logger.error("I/O error: %s", e)
        return ReportIOError.exit_code


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
