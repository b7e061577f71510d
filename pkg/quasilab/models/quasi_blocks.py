from dataclasses import dataclass, field
from typing import Dict

import numpy as np


@dataclass(frozen=True)
class QuasiBlocks:
    """
    S and T written in the basis H = range(Sⁿ) ⊕ ker(S*ⁿ).

    In the basis W, S = [[S1, S0], [0, S2]] and T = [[T1, 0], [T0, T2]]
    (so that T* is upper block triangular); Sⁿ = [[S1ⁿ, X], [0, 0]].
    """

    W: np.ndarray
    d1: int
    d2: int
    n: int
    S1: np.ndarray
    S0: np.ndarray
    S2: np.ndarray
    T1: np.ndarray
    T0: np.ndarray
    T2: np.ndarray
    X: np.ndarray
    Sn: np.ndarray
    residuals: Dict[str, float] = field(default_factory=dict)
    scale: float = 1.0

    @property
    def degenerate(self) -> bool:
        return self.d1 == 0

    def s_in_basis(self) -> np.ndarray:
        dim = self.d1 + self.d2
        out = np.zeros((dim, dim), dtype=np.complex128)
        out[:self.d1, :self.d1] = self.S1
        out[:self.d1, self.d1:] = self.S0
        out[self.d1:, self.d1:] = self.S2
        return out

    def t_in_basis(self) -> np.ndarray:
        dim = self.d1 + self.d2
        out = np.zeros((dim, dim), dtype=np.complex128)
        out[:self.d1, :self.d1] = self.T1
        out[self.d1:, :self.d1] = self.T0
        out[self.d1:, self.d1:] = self.T2
        return out

    def reassemble(self) -> Dict[str, np.ndarray]:
        """S and T* rebuilt in the original coordinates"""
        w_h = self.W.conj().T
        return {
            "S": self.W @ self.s_in_basis() @ w_h,
            "T_star": self.W @ self.t_in_basis().conj().T @ w_h,
        }
