from dataclasses import dataclass
from typing import Optional

import numpy as np

from .certificate import Certificate
from .conjugation import Conjugation


@dataclass(frozen=True)
class GeneratedInstance:
    """A generated operator with its partner, optional conjugation and certificate"""

    S: np.ndarray
    T: np.ndarray
    C: Optional[Conjugation]
    certificate: Certificate

    @property
    def recipe(self) -> str:
        return self.certificate.metadata.get("recipe", "")

    @property
    def seed(self) -> int:
        return self.certificate.metadata.get("seed", 0)
