"""
Dense complex matrix kernels.

Every other layer goes through these helpers so that validation, rank
decisions and the zero test are made the same way everywhere.
"""
import logging
from typing import Any, Optional, Tuple

import numpy as np
import scipy.linalg as sla

from ..config.app_config import Config
from ..exceptions import (
    DimensionError,
    DomainError,
    InvalidInputError,
    NotPSDError,
    SingularError,
    SizeError,
)
from ..config.tolerance import ToleranceConfig

logger = logging.getLogger(__name__)


def as_matrix(data: Any, name: str = "matrix", square: bool = True,
              max_dim: Optional[int] = None) -> np.ndarray:
    """Validate input and return it as a complex128 array"""
    try:
        matrix = np.array(data, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"{name}: cannot be read as a complex matrix ({e})")

    if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
        raise DimensionError(f"{name}: expected a non-empty 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidInputError(f"{name}: entries must be finite")
    if square and matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"{name}: expected a square matrix, got shape {matrix.shape}")

    limit = Config.MAX_DIM if max_dim is None else max_dim
    if max(matrix.shape) > limit:
        raise DimensionError(f"{name}: dimension {max(matrix.shape)} exceeds the maximum {limit}")
    return matrix


def require_same_shape(**matrices: np.ndarray) -> int:
    """Check that all named matrices share one square shape and return the dimension"""
    shapes = {name: m.shape for name, m in matrices.items()}
    if len(set(shapes.values())) > 1:
        raise DimensionError(f"Dimension mismatch: {shapes}")
    return next(iter(shapes.values()))[0]


def adjoint(matrix: np.ndarray) -> np.ndarray:
    return matrix.conj().T


def frobenius(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return float(np.linalg.norm(matrix, "fro"))


def op_norm(matrix: np.ndarray) -> float:
    """Spectral norm"""
    if matrix.size == 0:
        return 0.0
    return float(np.linalg.norm(matrix, 2))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def commutator_defect(a: np.ndarray, b: np.ndarray, tol: ToleranceConfig) -> Tuple[float, bool]:
    """Return ‖[A,B]‖_F and whether it passes as zero relative to ‖A‖_F·‖B‖_F"""
    magnitude = frobenius(commutator(a, b))
    return magnitude, tol.is_zero(magnitude, frobenius(a) * frobenius(b))


def matrix_power(matrix: np.ndarray, exponent: int) -> np.ndarray:
    """Integer power by repeated squaring"""
    if exponent < 0:
        raise DomainError(f"Matrix power exponent must be nonnegative, got {exponent}")
    return np.linalg.matrix_power(matrix, exponent)


def direct_sum(*blocks: np.ndarray) -> np.ndarray:
    return sla.block_diag(*blocks).astype(np.complex128)


def _normalize_phases(basis: np.ndarray) -> np.ndarray:
    # Largest entry of every column made real positive.
    if basis.size == 0:
        return basis
    pivots = np.argmax(np.abs(basis), axis=0)
    phases = basis[pivots, np.arange(basis.shape[1])]
    phases = phases / np.abs(phases)
    return basis * phases.conj()


def rank_threshold(singular_values: np.ndarray, shape: Tuple[int, int], tol: ToleranceConfig,
                   scale: Optional[float] = None) -> float:
    """Singular values above this threshold count toward the rank"""
    sigma_max = float(singular_values[0]) if singular_values.size else 0.0
    reference = max(sigma_max, scale or 0.0)
    return max(tol.rank_rel * reference * max(shape), tol.abs_floor)


def numerical_rank(matrix: np.ndarray, tol: ToleranceConfig, scale: Optional[float] = None) -> int:
    singular_values = sla.svd(matrix, compute_uv=False)
    return int(np.sum(singular_values > rank_threshold(singular_values, matrix.shape, tol, scale)))


def rank_and_bases(matrix: np.ndarray, tol: ToleranceConfig,
                   scale: Optional[float] = None) -> Tuple[int, np.ndarray, np.ndarray]:
    """
    Rank of M with orthonormal bases of range(M) and ker(M*).

    ``scale`` is the size of the data M was computed from; singular values
    that are noise relative to it are discarded even when M itself is tiny.
    """
    left, singular_values, _ = sla.svd(matrix, full_matrices=True)
    rank = int(np.sum(singular_values > rank_threshold(singular_values, matrix.shape, tol, scale)))
    range_basis = _normalize_phases(left[:, :rank])
    cokernel_basis = _normalize_phases(left[:, rank:])
    return rank, range_basis, cokernel_basis


def kernel_basis(matrix: np.ndarray, tol: ToleranceConfig, scale: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis of ker(M)"""
    return rank_and_bases(adjoint(matrix), tol, scale)[2]


def polar_decompose(matrix: np.ndarray, tol: Optional[ToleranceConfig] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Polar decomposition M = U·P with P = (M*M)^{1/2}.

    U is unitary when M is invertible and the partial isometry of the compact
    SVD otherwise.
    """
    tol = tol or ToleranceConfig()
    matrix = as_matrix(matrix, "polar input")
    left, singular_values, right_h = sla.svd(matrix)
    positive = adjoint(right_h) @ np.diag(singular_values) @ right_h
    positive = (positive + adjoint(positive)) / 2

    rank = int(np.sum(singular_values > rank_threshold(singular_values, matrix.shape, tol)))
    if rank == matrix.shape[0]:
        unitary = left @ right_h
    else:
        logger.debug("Polar decomposition of a rank-%d matrix of size %d", rank, matrix.shape[0])
        unitary = left[:, :rank] @ right_h[:rank, :]
    return unitary, positive


def _hermitian_spectrum(matrix: np.ndarray, tol: ToleranceConfig) -> Tuple[np.ndarray, np.ndarray]:
    matrix = as_matrix(matrix, "positive semidefinite input")
    defect = frobenius(matrix - adjoint(matrix))
    if not tol.is_zero(defect, frobenius(matrix)):
        raise InvalidInputError(f"Matrix is not Hermitian (‖Q − Q*‖_F = {defect:.3e})")

    eigenvalues, eigenvectors = sla.eigh((matrix + adjoint(matrix)) / 2)
    largest = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    floor = tol.abs_floor + tol.rank_rel * largest
    if eigenvalues.size and eigenvalues[0] < -floor:
        raise NotPSDError(f"Matrix has negative eigenvalue {eigenvalues[0]:.3e}")
    return np.clip(eigenvalues, 0.0, None), eigenvectors


def psd_sqrt(matrix: np.ndarray, tol: Optional[ToleranceConfig] = None) -> np.ndarray:
    """Hermitian positive square root"""
    tol = tol or ToleranceConfig()
    eigenvalues, eigenvectors = _hermitian_spectrum(matrix, tol)
    root = eigenvectors @ np.diag(np.sqrt(eigenvalues)) @ adjoint(eigenvectors)
    return (root + adjoint(root)) / 2


def psd_sqrt_inverse(matrix: np.ndarray, tol: Optional[ToleranceConfig] = None) -> np.ndarray:
    """Inverse of the Hermitian positive square root"""
    tol = tol or ToleranceConfig()
    eigenvalues, eigenvectors = _hermitian_spectrum(matrix, tol)
    largest = float(np.max(eigenvalues)) if eigenvalues.size else 0.0
    if eigenvalues.size == 0 or eigenvalues[0] <= max(tol.abs_floor, tol.rank_rel * largest * len(eigenvalues)):
        raise SingularError("Cannot invert the square root of a singular matrix")
    root_inv = eigenvectors @ np.diag(1.0 / np.sqrt(eigenvalues)) @ adjoint(eigenvectors)
    return (root_inv + adjoint(root_inv)) / 2


def kronecker(a: np.ndarray, b: np.ndarray, max_dim: Optional[int] = None) -> np.ndarray:
    limit = Config.MAX_KRON_DIM if max_dim is None else max_dim
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > limit:
        raise SizeError(f"Kronecker product of size {rows}×{cols} exceeds the maximum {limit}")
    return np.kron(a, b)


def nilpotency_index(matrix: np.ndarray, tol: ToleranceConfig) -> Optional[int]:
    """Least k ≤ dim with N^k ≈ 0, or None"""
    scale = max(frobenius(matrix), 1.0)
    power = np.eye(matrix.shape[0], dtype=np.complex128)
    for k in range(1, matrix.shape[0] + 1):
        power = power @ matrix
        if tol.is_zero(frobenius(power), scale ** k):
            return k
    return None
