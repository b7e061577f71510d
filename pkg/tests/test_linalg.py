"""
Tests for the matrix kernels and seeded generators
"""
import numpy as np
from numpy.testing import assert_allclose
import pytest

from quasilab.exceptions import DimensionError, DomainError, InvalidInputError, NotPSDError, SingularError, SizeError
from quasilab.utils.linalg import (
    as_matrix,
    kernel_basis,
    kronecker,
    matrix_power,
    nilpotency_index,
    numerical_rank,
    polar_decompose,
    psd_sqrt,
    psd_sqrt_inverse,
    rank_and_bases,
)
from quasilab.utils.random_matrices import (
    complex_gaussian,
    derive_seed,
    haar_orthogonal,
    haar_unitary,
    jordan_nilpotent,
    make_rng,
    well_conditioned,
)


@pytest.mark.parametrize(
    "data, error",
    [
        ([[1.0, np.nan], [0.0, 1.0]], InvalidInputError),
        ([[1.0, np.inf], [0.0, 1.0]], InvalidInputError),
        ([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]], DimensionError),
        ([1.0, 2.0], DimensionError),
        ([["a", "b"], ["c", "d"]], InvalidInputError),
    ]
)
def test_as_matrix_rejects_bad_input(data, error):
    with pytest.raises(error):
        as_matrix(data)


def test_as_matrix_enforces_max_dim():
    with pytest.raises(DimensionError):
        as_matrix(np.eye(5), max_dim=4)


def test_polar_decomposition_invertible(rng):
    m = complex_gaussian(rng, (4, 4))
    u, p = polar_decompose(m)
    assert_allclose(u @ p, m, atol=1e-10)
    assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-10)
    assert np.min(np.linalg.eigvalsh(p)) > -1e-12


def test_polar_decomposition_singular():
    m = np.array([[1, 1], [0, 0]], dtype=np.complex128)
    u, p = polar_decompose(m)
    assert_allclose(u @ p, m, atol=1e-12)
    assert_allclose(p, np.array([[0.5, 0.5], [0.5, 0.5]]) * np.sqrt(2), atol=1e-12)


def test_psd_square_root(rng):
    g = complex_gaussian(rng, (3, 3))
    q = g.conj().T @ g
    root = psd_sqrt(q)
    assert_allclose(root @ root, q, atol=1e-10)
    assert_allclose(psd_sqrt_inverse(q) @ root, np.eye(3), atol=1e-6)


def test_psd_square_root_rejects_negative():
    with pytest.raises(NotPSDError):
        psd_sqrt(np.diag([1.0, -1.0]))


def test_psd_sqrt_inverse_rejects_singular():
    with pytest.raises(SingularError):
        psd_sqrt_inverse(np.ones((2, 2)))


def test_ranks_and_bases(tol):
    m = np.array([[1, 1], [0, 0]], dtype=np.complex128)
    rank, range_basis, cokernel = rank_and_bases(m, tol)
    assert rank == 1
    assert_allclose(range_basis, [[1], [0]], atol=1e-12)
    assert_allclose(cokernel, [[0], [1]], atol=1e-12)
    assert_allclose(m @ kernel_basis(m, tol), np.zeros((2, 1)), atol=1e-12)
    assert numerical_rank(np.eye(3), tol) == 3


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_nilpotency_index_of_jordan_blocks(tol, k):
    assert nilpotency_index(jordan_nilpotent(k), tol) == k


def test_nilpotency_index_of_invertible(tol):
    assert nilpotency_index(np.eye(3), tol) is None


def test_kronecker_size_cap():
    with pytest.raises(SizeError):
        kronecker(np.eye(4), np.eye(4), max_dim=8)
    assert kronecker(np.eye(2), np.eye(3)).shape == (6, 6)


def test_matrix_power_rejects_negative_exponent():
    with pytest.raises(DomainError):
        matrix_power(np.eye(2), -1)


def test_random_unitaries(rng):
    u = haar_unitary(rng, 5)
    o = haar_orthogonal(rng, 4)
    assert_allclose(u.conj().T @ u, np.eye(5), atol=1e-12)
    assert_allclose(o.T @ o, np.eye(4), atol=1e-12)
    assert np.all(o.imag == 0)


def test_well_conditioned_singular_values(rng):
    v = well_conditioned(rng, 4, 0.5, 2.0)
    singular_values = np.linalg.svd(v, compute_uv=False)
    assert singular_values.max() <= 2.0 + 1e-12
    assert singular_values.min() >= 0.5 - 1e-12


def test_seeded_generators_are_deterministic():
    first = complex_gaussian(make_rng(-7), (3, 3))
    second = complex_gaussian(make_rng(-7), (3, 3))
    assert_allclose(first, second, rtol=0, atol=0)


def test_derived_seeds_are_independent():
    seeds = {derive_seed(42, suite, trial) for suite in ("calculus", "products") for trial in range(50)}
    assert len(seeds) == 100
    assert all(0 <= s < 2 ** 63 for s in seeds)
    assert derive_seed(42, "calculus", 3) == derive_seed(42, "calculus", 3)
