"""
Seeded random matrices.

All generators take an explicit ``numpy.random.Generator`` so every instance
is a deterministic function of its seed.
"""
import hashlib
from typing import Tuple, Union

import numpy as np
import scipy.linalg as sla

SEED_MODULUS = 2 ** 64


def make_rng(seed: int) -> np.random.Generator:
    """Generator for any integer seed, negative ones included"""
    return np.random.default_rng(np.random.SeedSequence(int(seed) % SEED_MODULUS))


def derive_seed(seed: int, suite: str, trial: int) -> int:
    """Independent sub-seed for one trial of one suite"""
    digest = hashlib.blake2b(f"{seed}:{suite}:{trial}".encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def complex_gaussian(rng: np.random.Generator, shape: Union[int, Tuple[int, ...]]) -> np.ndarray:
    """Standard complex normal samples"""
    # 1/sqrt(2) keeps unit variance
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Gaussian"""
    q, r = sla.qr(complex_gaussian(rng, (dim, dim)))
    diagonal = np.diag(r)
    phases = np.where(np.abs(diagonal) > 0, diagonal / np.abs(diagonal), 1.0)
    return q * phases


def haar_orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed real orthogonal matrix"""
    q, r = sla.qr(rng.standard_normal((dim, dim)))
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return (q * signs).astype(np.complex128)


def unimodular(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.uniform()))


def unimodular_diagonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * rng.uniform(size=dim)))


def jordan_nilpotent(k: int) -> np.ndarray:
    """Nilpotent Jordan block of size k and index k"""
    return np.eye(k, k, 1, dtype=np.complex128)


def embed(block: np.ndarray, dim: int) -> np.ndarray:
    """Top-left embedding of a square block into a dim×dim zero matrix"""
    out = np.zeros((dim, dim), dtype=np.complex128)
    out[:block.shape[0], :block.shape[1]] = block
    return out


def well_conditioned(rng: np.random.Generator, dim: int, low: float = 0.5, high: float = 2.0,
                     real: bool = False) -> np.ndarray:
    """Invertible matrix with singular values in [low, high]"""
    left = haar_orthogonal(rng, dim) if real else haar_unitary(rng, dim)
    right = haar_orthogonal(rng, dim) if real else haar_unitary(rng, dim)
    return left @ np.diag(rng.uniform(low, high, size=dim)) @ right


def strictly_upper(rng: np.random.Generator, dim: int, real: bool = False) -> np.ndarray:
    """Random strictly upper triangular (hence nilpotent) matrix"""
    values = rng.standard_normal((dim, dim)) if real else complex_gaussian(rng, (dim, dim))
    return np.triu(values, 1).astype(np.complex128)


def polynomial_in(rng: np.random.Generator, base: np.ndarray, degree: int = 2,
                  constant: bool = True) -> np.ndarray:
    """Random polynomial in a matrix; commutes with it by construction"""
    dim = base.shape[0]
    result = np.zeros((dim, dim), dtype=np.complex128)
    power = np.eye(dim, dtype=np.complex128)
    for j in range(degree + 1):
        if j > 0 or constant:
            result = result + complex_gaussian(rng, ()) * power
        power = power @ base
    return result
