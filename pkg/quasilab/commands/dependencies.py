"""
Shared wiring for the subcommands: services, repositories and argument parsing helpers.
"""
import argparse
from typing import Optional, Tuple

import numpy as np

from ..config.app_config import Config
from ..exceptions import InvalidInputError
from ..models.conjugation import Conjugation
from ..models.operator_pair import DKind
from ..config.tolerance import ToleranceConfig
from ..repositories.matrix_repository import MatrixRepository
from ..repositories.report_repository import ReportRepository
from ..services.calculus_service import CalculusService
from ..services.class_service import ClassService
from ..services.spectral_service import SpectralService
from ..services.structure_service import StructureService


def get_tolerance(args: argparse.Namespace) -> ToleranceConfig:
    """Environment profile first, then the --tol flag"""
    tol = Config.get_tolerance_config()
    if getattr(args, "tol", None) is not None:
        tol = tol.with_zero_rel(args.tol)
    return tol


def get_services(tol: ToleranceConfig) -> Tuple[ClassService, SpectralService, StructureService]:
    calculus = CalculusService(tol)
    spectral = SpectralService(tol, calculus)
    classes = ClassService(tol, calculus, spectral)
    structure = StructureService(tol, calculus, spectral, classes)
    return classes, spectral, structure


def get_matrix_repository() -> MatrixRepository:
    return MatrixRepository()


def get_report_repository() -> ReportRepository:
    return ReportRepository()


def load_optional(repo: MatrixRepository, path: Optional[str]) -> Optional[np.ndarray]:
    return None if path is None else repo.load_matrix(path)


def load_conjugation(repo: MatrixRepository, path: Optional[str]) -> Optional[Conjugation]:
    return None if path is None else repo.load_conjugation(path)


def parse_kind(value: str) -> DKind:
    aliases = {"delta": DKind.delta, "Delta": DKind.delta, "small_delta": DKind.small_delta,
               "small-delta": DKind.small_delta, "SmallDelta": DKind.small_delta}
    if value not in aliases:
        raise argparse.ArgumentTypeError(f"unknown kind {value!r}; use delta or small_delta")
    return aliases[value]


def parse_dims(value: str) -> Tuple[int, int]:
    """'4' or '2..6'"""
    try:
        if ".." in value:
            low, high = value.split("..", 1)
            return int(low), int(high)
        return int(value), int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 4 or 2..6, got {value!r}")


def parse_complex(value: str) -> complex:
    """'1', '-0.5+2j' or '0.3,0.4' (real, imaginary)"""
    try:
        if "," in value:
            real, imag = value.split(",", 1)
            return complex(float(real), float(imag))
        return complex(value.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {value!r}")


def require(value, flag: str):
    if value is None:
        raise InvalidInputError(f"{flag} is required for this command")
    return value
