from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .certificate import HypothesisViolation


@dataclass(frozen=True)
class Residual:
    """A matrix produced by a binomial sum and the largest term norm of that sum"""

    matrix: np.ndarray
    scale: float

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, "fro"))


@dataclass(frozen=True)
class ExpansionResult:
    lhs: np.ndarray
    rhs: np.ndarray
    residual: float
    scale: float
    hypothesis_violations: Tuple[HypothesisViolation, ...] = ()

    @property
    def hypotheses_hold(self) -> bool:
        return not self.hypothesis_violations
