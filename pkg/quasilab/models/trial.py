from dataclasses import dataclass
from typing import Optional, Tuple

from .certificate import CertificateStatus


@dataclass(frozen=True)
class TrialOutcome:
    """Result of one seeded trial of one suite"""

    suite: str
    trial: int
    seed: int
    dim: int
    status: CertificateStatus
    worst_residual: float
    # (certificate name, status) for every certificate of the trial
    certificates: Tuple[Tuple[str, CertificateStatus], ...] = ()
    detail: Optional[str] = None
