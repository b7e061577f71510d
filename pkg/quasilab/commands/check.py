import argparse

from ..config.app_config import Config
from ..exceptions import InvalidInputError
from ..models.class_spec import ClassSpec, Family
from ..models.operator_pair import OperatorPair
from ..schemas.certificate_schema import CertificateResponse
from ..utils.linalg import adjoint
from .dependencies import (
    get_matrix_repository,
    get_report_repository,
    get_services,
    get_tolerance,
    load_conjugation,
    load_optional,
    parse_kind,
)


def register(subparsers) -> None:
    parser = subparsers.add_parser("check", help="Certify membership of a matrix in an operator class")
    parser.add_argument("S", help="Matrix JSON file")
    parser.add_argument("--T", dest="T", help="Partner matrix JSON file (pair families)")
    parser.add_argument("--class", dest="family", required=True, choices=[f.value for f in Family])
    parser.add_argument("--m", type=int, required=True, help="Order")
    parser.add_argument("--n", type=int, default=0, help="Quasi exponent")
    parser.add_argument("--kind", type=parse_kind, help="Elementary operator; must match the class")
    parser.add_argument("--conjugation", help="Matrix J of the conjugation x ↦ J·conj(x)")
    parser.add_argument("--m-max", type=int, default=Config.MAX_ORDER, help="Largest order tried by classification")
    parser.add_argument("--tol", type=float, help="Relative zero threshold")
    parser.add_argument("--out", help="Write the certificate here instead of standard output")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    family = Family(args.family)
    if args.kind is not None and args.kind is not family.kind:
        raise InvalidInputError(f"Class {family.value} uses kind {family.kind.value}, not {args.kind.value}")

    repo = get_matrix_repository()
    s = repo.load_matrix(args.S)
    t = load_optional(repo, args.T)
    conjugation = load_conjugation(repo, args.conjugation)

    classes, _, _ = get_services(get_tolerance(args))
    certificate = classes.certify(ClassSpec(family, args.m, args.n, conjugation), s, t)
    pair = OperatorPair(adjoint(s) if t is None else t, s, family.kind)
    classification = classes.classify(pair, args.n, max(args.m, args.m_max), conjugation)

    get_report_repository().emit(CertificateResponse.from_certificate(certificate, classification), args.out)
    return 0 if certificate.passed else 1
