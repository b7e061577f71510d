import logging
from typing import Any, Dict, List, Optional

import numpy as np

from ..models.certificate import (
    ConstructionCertificate,
    EntryKind,
    HypothesisViolation,
    ResidualEntry,
)
from ..config.tolerance import ToleranceConfig

logger = logging.getLogger(__name__)


class CertificateBuilder:
    """
    Builder for ConstructionCertificate values.

    Hypotheses and conclusions are recorded separately: a hypothesis that does
    not vanish becomes a violation and turns the certificate vacuous, while a
    conclusion that does not vanish makes it fail.
    """

    def __init__(self, tol: ToleranceConfig):
        self._tol = tol
        self._name: Optional[str] = None
        self._residuals: Dict[str, ResidualEntry] = {}
        self._hypotheses: Dict[str, ResidualEntry] = {}
        self._violations: List[HypothesisViolation] = []
        self._notes: List[str] = []
        self._payload: Dict[str, np.ndarray] = {}
        self._metadata: Dict[str, Any] = {}
        self._vacuous: bool = False

    def set_name(self, name: str) -> 'CertificateBuilder':
        """Set the name of the construction being certified"""
        if not name or not name.strip():
            raise ValueError("Certificate name is required and cannot be empty")
        self._name = name.strip()
        return self

    def add_residual(self, name: str, value: float, scale: float,
                     threshold: Optional[float] = None) -> 'CertificateBuilder':
        """Record a conclusion residual; by default it must vanish relative to scale"""
        if threshold is None:
            threshold = self._tol.zero_threshold(scale)
        self._residuals[name] = ResidualEntry(float(value), float(scale), float(threshold))
        return self

    def add_bound(self, name: str, value: float, bound: float) -> 'CertificateBuilder':
        """Record a quantity that must not exceed an explicit bound"""
        self._residuals[name] = ResidualEntry(float(value), float(bound), float(bound), EntryKind.bound)
        return self

    def add_hypothesis(self, name: str, value: float, scale: float,
                       threshold: Optional[float] = None) -> 'CertificateBuilder':
        """Record a hypothesis residual; a nonvanishing one is a violation"""
        if threshold is None:
            threshold = self._tol.zero_threshold(scale)
        entry = ResidualEntry(float(value), float(scale), float(threshold))
        self._hypotheses[name] = entry
        if not entry.passed:
            logger.warning("Hypothesis %s violated for %s: %.3e > %.3e",
                           name, self._name or "certificate", entry.value, entry.threshold)
            self._violations.append(HypothesisViolation(name, float(value)))
        return self

    def add_hypothesis_violation(self, name: str, magnitude: float = float("nan")) -> 'CertificateBuilder':
        """Record a hypothesis that fails for a structural reason"""
        logger.warning("Hypothesis %s violated for %s", name, self._name or "certificate")
        self._violations.append(HypothesisViolation(name, float(magnitude)))
        return self

    def add_note(self, note: str) -> 'CertificateBuilder':
        self._notes.append(note)
        return self

    def add_payload(self, name: str, matrix: np.ndarray) -> 'CertificateBuilder':
        self._payload[name] = np.array(matrix, dtype=np.complex128)
        return self

    def set_metadata(self, **metadata: Any) -> 'CertificateBuilder':
        self._metadata.update(metadata)
        return self

    def set_vacuous(self, note: str) -> 'CertificateBuilder':
        """Mark the conclusion as holding vacuously (nothing left to check)"""
        self._vacuous = True
        self._notes.append(note)
        return self

    def validate(self) -> None:
        """Validate all required fields are set"""
        if self._name is None:
            raise ValueError("Certificate name is required")
        if not self._residuals and not self._violations and not self._vacuous:
            raise ValueError(f"Certificate {self._name} records no residual")

    def build(self) -> ConstructionCertificate:
        """Build the immutable certificate"""
        self.validate()
        certificate = ConstructionCertificate(
            name=self._name,
            residuals=dict(self._residuals),
            hypotheses=dict(self._hypotheses),
            hypothesis_violations=tuple(self._violations),
            notes=tuple(self._notes),
            payload=dict(self._payload),
            metadata=dict(self._metadata),
            vacuous=self._vacuous,
        )
        logger.debug("Certificate %s: %s", certificate.name, certificate.status.value)
        return certificate
