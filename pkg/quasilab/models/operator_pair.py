from dataclasses import dataclass
import enum

import numpy as np

from ..utils.linalg import as_matrix, require_same_shape


class DKind(enum.Enum):
    """Which elementary operator: X ↦ TXS − X or X ↦ TX − XS"""
    delta = "delta"
    small_delta = "small_delta"


@dataclass(frozen=True)
class OperatorPair:
    """A pair (T, S) together with the elementary operator built from it"""

    T: np.ndarray
    S: np.ndarray
    kind: DKind

    def __post_init__(self):
        t = as_matrix(self.T, "T")
        s = as_matrix(self.S, "S")
        require_same_shape(T=t, S=s)
        if not isinstance(self.kind, DKind):
            raise ValueError("kind must be a DKind")
        object.__setattr__(self, "T", t)
        object.__setattr__(self, "S", s)

    @property
    def dim(self) -> int:
        return self.S.shape[0]

    @classmethod
    def adjoint_of(cls, S, kind: DKind) -> "OperatorPair":
        """The pair (S*, S)"""
        s = as_matrix(S, "S")
        return cls(T=s.conj().T, S=s, kind=kind)
