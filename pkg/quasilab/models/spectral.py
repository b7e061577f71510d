from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np


@dataclass(frozen=True)
class EigenCluster:
    value: complex
    algebraic_mult: int


@dataclass(frozen=True)
class AscentDescent:
    ascent: int
    descent: int
    pole_order: int


@dataclass(frozen=True)
class RieszProjection:
    """Spectral idempotent with the conditioning of the bases it was built from"""

    matrix: np.ndarray
    condition: float
    warning: Optional[str] = None


@dataclass(frozen=True)
class EigenInfo:
    value: complex
    algebraic_mult: int
    geometric_mult: int
    ascent: int
    descent: int
    pole_order: int


@dataclass(frozen=True)
class ProjectionFlags:
    selfadjoint_projection: bool
    simple_pole: bool


@dataclass(frozen=True)
class SpectralReport:
    dim: int
    eigenvalues: List[EigenInfo]
    riesz: Dict[complex, np.ndarray]
    flags: Dict[complex, ProjectionFlags]
    warnings: List[str] = field(default_factory=list)
