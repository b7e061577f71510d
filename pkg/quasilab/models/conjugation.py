from dataclasses import dataclass

import numpy as np

from ..exceptions import InvalidInputError
from ..utils.linalg import as_matrix, frobenius
from ..config.tolerance import ToleranceConfig


@dataclass(frozen=True)
class Conjugation:
    """Antilinear involution x ↦ J·conj(x) with J symmetric and unitary"""

    J: np.ndarray

    def __post_init__(self):
        j = as_matrix(self.J, "J")
        tol = ToleranceConfig()
        scale = float(np.sqrt(j.shape[0]))
        unitary_defect = frobenius(j.conj().T @ j - np.eye(j.shape[0]))
        symmetry_defect = frobenius(j - j.T)
        if not tol.is_zero(unitary_defect, scale):
            raise InvalidInputError(f"J is not unitary (‖J*J − I‖_F = {unitary_defect:.3e})")
        if not tol.is_zero(symmetry_defect, scale):
            raise InvalidInputError(f"J is not symmetric (‖J − Jᵀ‖_F = {symmetry_defect:.3e})")
        object.__setattr__(self, "J", j)

    @property
    def dim(self) -> int:
        return self.J.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.J @ np.conj(x)

    def in_basis(self, basis: np.ndarray) -> "Conjugation":
        """The same conjugation written in the orthonormal basis W: W*·J·conj(W)"""
        return Conjugation(basis.conj().T @ self.J @ basis.conj())

    @classmethod
    def identity(cls, dim: int) -> "Conjugation":
        """Entrywise complex conjugation"""
        return cls(np.eye(dim, dtype=np.complex128))
