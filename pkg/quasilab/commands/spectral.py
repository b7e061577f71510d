import argparse

from ..schemas.spectral_schema import SpectralReportResponse
from .dependencies import get_matrix_repository, get_report_repository, get_services, get_tolerance


def register(subparsers) -> None:
    parser = subparsers.add_parser("spectral", help="Eigenvalues, pole orders and Riesz projections of a matrix")
    parser.add_argument("A", help="Matrix JSON file")
    parser.add_argument("--tol", type=float, help="Relative zero threshold")
    parser.add_argument("--out", help="Write the report here instead of standard output")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    _, spectral, _ = get_services(get_tolerance(args))
    report = spectral.spectral_report(get_matrix_repository().load_matrix(args.A))
    get_report_repository().emit(SpectralReportResponse.from_report(report), args.out)
    return 0
