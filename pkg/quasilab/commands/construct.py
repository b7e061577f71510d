import argparse

from ..models.certificate import CertificateStatus
from ..models.operator_pair import DKind
from ..schemas.certificate_schema import ConstructionCertificateResponse
from ..utils.linalg import adjoint
from .dependencies import (
    get_matrix_repository,
    get_report_repository,
    get_services,
    get_tolerance,
    load_conjugation,
    load_optional,
    parse_complex,
    parse_kind,
    require,
)

THEOREMS = (
    "similarity",
    "similarity-unitary",
    "conjugated",
    "left-inverse",
    "perturbed-similarity",
    "riesz",
    "strictness-counterexample",
)


def register(subparsers) -> None:
    parser = subparsers.add_parser("construct", help="Run a constructive theorem on given matrices")
    parser.add_argument("S", nargs="?", help="Matrix JSON file (not used by strictness-counterexample)")
    parser.add_argument("--theorem", required=True, choices=THEOREMS)
    parser.add_argument("--kind", type=parse_kind, default=DKind.delta)
    parser.add_argument("--m", type=int, help="Order")
    parser.add_argument("--n", type=int, default=0, help="Quasi exponent")
    parser.add_argument("--T", dest="T", help="Partner matrix (left-inverse, riesz; default S*)")
    parser.add_argument("--N", dest="N", help="Nilpotent perturbation (perturbed-similarity)")
    parser.add_argument("--n1", type=int, help="Nilpotency index of N")
    parser.add_argument("--p", type=int, default=1, help="Power of the left inverse C_p")
    parser.add_argument("--lam", type=parse_complex, help="Eigenvalue for the Riesz criterion, e.g. 1 or 0.6,0.8")
    parser.add_argument("--conjugation", help="Matrix J of the conjugation (conjugated)")
    parser.add_argument("--seed", type=int, default=0, help="Seed (strictness-counterexample)")
    parser.add_argument("--no-payload", action="store_true", help="Omit payload matrices from the output")
    parser.add_argument("--tol", type=float, help="Relative zero threshold")
    parser.add_argument("--out", help="Write the certificate here instead of standard output")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    _, _, structure = get_services(get_tolerance(args))
    repo = get_matrix_repository()
    theorem = args.theorem

    if theorem == "strictness-counterexample":
        certificate = structure.strictness_counterexample(require(args.m, "--m"), args.seed)
    else:
        s = repo.load_matrix(require(args.S, "the matrix S"))
        t = load_optional(repo, args.T)
        if theorem == "similarity":
            certificate = structure.construct_AQP(args.kind, s, require(args.m, "--m"), args.n)
        elif theorem == "similarity-unitary":
            certificate = structure.construct_B(args.kind, s, require(args.m, "--m"), args.n)
        elif theorem == "conjugated":
            conjugation = require(load_conjugation(repo, args.conjugation), "--conjugation")
            certificate = structure.construct_conjugated(args.kind, s, conjugation, require(args.m, "--m"), args.n)
        elif theorem == "left-inverse":
            certificate = structure.left_inverse_Cp(adjoint(s) if t is None else t, s,
                                                    require(args.m, "--m"), args.p)
        elif theorem == "perturbed-similarity":
            nilpotent = repo.load_matrix(require(args.N, "--N"))
            certificate = structure.construct_perturbed_similarity(args.kind, s, nilpotent, require(args.m, "--m"),
                                                                   args.n, require(args.n1, "--n1"))
        else:
            certificate = structure.riesz_selfadjoint_criterion(s, adjoint(s) if t is None else t, args.n,
                                                                require(args.lam, "--lam"), args.m)

    response = ConstructionCertificateResponse.from_certificate(certificate, include_payload=not args.no_payload)
    get_report_repository().emit(response, args.out)
    return 1 if certificate.status is CertificateStatus.failed else 0
