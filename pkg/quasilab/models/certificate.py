from dataclasses import dataclass, field
import enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .class_spec import ClassSpec


class CertificateStatus(enum.Enum):
    passed = "passed"
    vacuous = "vacuous"
    failed = "failed"


class EntryKind(enum.Enum):
    residual = "residual"
    bound = "bound"


@dataclass(frozen=True)
class ResidualEntry:
    """A measured quantity with the threshold it must not exceed"""

    value: float
    scale: float
    threshold: float
    kind: EntryKind = EntryKind.residual

    @property
    def passed(self) -> bool:
        return self.value <= self.threshold

    @property
    def relative(self) -> float:
        return self.value / self.scale if self.scale > 0 else self.value


@dataclass(frozen=True)
class HypothesisViolation:
    name: str
    magnitude: float


@dataclass(frozen=True)
class Certificate:
    """Membership certificate for one operator class"""

    spec: ClassSpec
    residual_norm: float
    scale: float
    threshold: float
    hypothesis_violations: Tuple[HypothesisViolation, ...] = ()
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.residual_norm <= self.threshold and not self.hypothesis_violations


@dataclass(frozen=True)
class ConstructionCertificate:
    """Residuals attesting a construction or theorem on one concrete instance"""

    name: str
    residuals: Dict[str, ResidualEntry]
    hypotheses: Dict[str, ResidualEntry]
    hypothesis_violations: Tuple[HypothesisViolation, ...]
    notes: Tuple[str, ...] = ()
    payload: Dict[str, np.ndarray] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)
    vacuous: bool = False

    @property
    def passed(self) -> bool:
        return not self.hypothesis_violations and all(entry.passed for entry in self.residuals.values())

    @property
    def status(self) -> CertificateStatus:
        if self.hypothesis_violations or self.vacuous:
            return CertificateStatus.vacuous
        return CertificateStatus.passed if self.passed else CertificateStatus.failed

    def worst_residual(self) -> float:
        values = [entry.relative for entry in self.residuals.values() if entry.kind is EntryKind.residual]
        return max(values) if values else 0.0

    def residual(self, name: str) -> float:
        return self.residuals[name].value

    def matrix(self, name: str) -> Optional[np.ndarray]:
        return self.payload.get(name)
