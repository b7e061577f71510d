import argparse
import logging

from ..facades.verification_facade import VerificationFacade
from ..schemas.suite_schema import SuiteConfig, SuiteName
from .dependencies import get_report_repository, get_tolerance, parse_dims

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Run seeded verification suites and emit a JSON report")
    parser.add_argument("--suite", action="append", choices=[s.value for s in SuiteName], dest="suites",
                        help="Suite to run (repeatable; default all)")
    parser.add_argument("--trials", type=int, default=100, help="Trials per suite")
    parser.add_argument("--dims", type=parse_dims, default=(2, 6), help="Dimension range, e.g. 2..6")
    parser.add_argument("--seed", type=int, default=0, help="Master seed")
    parser.add_argument("--tol", type=float, help="Relative zero threshold")
    parser.add_argument("--report", help="Report path (standard output when absent)")
    parser.add_argument("--workers", type=int, default=1, help="Trials run concurrently")
    parser.add_argument("--sabotage", action="store_true",
                        help="Break the commuting hypotheses of generated theorem instances")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = SuiteConfig(
        suites=args.suites or [SuiteName.all],
        trials=args.trials,
        dims=args.dims,
        seed=args.seed,
        tol=get_tolerance(args),
        report_path=args.report,
        workers=args.workers,
        sabotage=args.sabotage,
    )
    report = VerificationFacade(get_report_repository()).run_suite(config)
    if not report.overall:
        failing = [name for name, summary in report.suites.items() if summary.failed]
        logger.error("Failures in suites: %s", ", ".join(failing))
    return 0 if report.overall else 1
