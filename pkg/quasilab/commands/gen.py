import argparse
import logging

from ..models.class_spec import ClassSpec, Family
from ..schemas.certificate_schema import CertificateResponse
from .dependencies import get_matrix_repository, get_report_repository, get_services, get_tolerance

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen", help="Generate a certified random instance of a class")
    parser.add_argument("--class", dest="family", required=True, choices=[f.value for f in Family])
    parser.add_argument("--m", type=int, required=True, help="Order")
    parser.add_argument("--n", type=int, default=0, help="Quasi exponent")
    parser.add_argument("--dim", type=int, default=4, help="Dimension")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--k", type=int, help="Size of the nilpotent block")
    parser.add_argument("--coupling", type=float, help="Constant value of the X block of a quasi lift")
    parser.add_argument("--out-dir", required=True, help="Directory receiving S.json, T.json, J.json, certificate.json")
    parser.add_argument("--tol", type=float, help="Relative zero threshold")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    classes, _, _ = get_services(get_tolerance(args))
    params = {name: getattr(args, name) for name in ("k", "coupling") if getattr(args, name) is not None}
    instance = classes.gen_instance(ClassSpec(Family(args.family), args.m, args.n), args.dim, args.seed, **params)

    matrices = {"S": instance.S, "T": instance.T}
    if instance.C is not None:
        matrices["J"] = instance.C.J
    response = CertificateResponse.from_certificate(instance.certificate)
    written = get_matrix_repository().save_instance(args.out_dir, matrices, response)
    logger.info("Wrote %s", ", ".join(written.values()))
    get_report_repository().emit(response)
    return 0
