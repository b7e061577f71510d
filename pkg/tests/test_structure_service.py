import numpy as np
from numpy.testing import assert_allclose
import pytest

from quasilab.exceptions import DomainError, PreconditionError
from quasilab.models.certificate import CertificateStatus
from quasilab.models.class_spec import ClassSpec, Family
from quasilab.models.operator_pair import DKind
from quasilab.utils.linalg import adjoint


@pytest.fixture
def quasi_jordan():
    """A 1-quasi strict 3-isometry: u(I + J₂) coupled to a zero block"""
    return np.array([[1, 1, 0.5], [0, 1, 0.5], [0, 0, 0]], dtype=np.complex128)


def test_block_decomposition(structure, quasi_jordan):
    blocks = structure.quasi_block_decompose(quasi_jordan, adjoint(quasi_jordan), 1)
    assert (blocks.d1, blocks.d2) == (2, 1)
    assert max(blocks.residuals.values()) < 1e-10
    assert_allclose(blocks.reassemble()["S"], quasi_jordan, atol=1e-12)
    assert_allclose(blocks.W.conj().T @ blocks.W, np.eye(3), atol=1e-12)


def test_block_decomposition_of_nilpotent_is_degenerate(structure, nilpotent):
    blocks = structure.quasi_block_decompose(nilpotent, adjoint(nilpotent), 2)
    assert blocks.degenerate
    assert blocks.d2 == 2


def test_block_decomposition_rejects_zero_exponent(structure, jordan):
    with pytest.raises(DomainError):
        structure.quasi_block_decompose(jordan, adjoint(jordan), 0)


def test_similarity_model_of_idempotent(structure, idempotent_like):
    certificate = structure.construct_AQP(DKind.delta, idempotent_like, 1, 1)
    assert certificate.status is CertificateStatus.passed
    assert_allclose(certificate.matrix("A"), idempotent_like, atol=1e-12)
    assert_allclose(certificate.matrix("Q"), np.ones((2, 2)), atol=1e-12)
    assert_allclose(certificate.matrix("P"), np.eye(2), atol=1e-12)


def test_similarity_model_of_quasi_jordan(structure, quasi_jordan):
    certificate = structure.construct_AQP(DKind.delta, quasi_jordan, 3, 1)
    assert certificate.status is CertificateStatus.passed
    assert certificate.metadata["d1"] == 2


def test_nilpotent_similarity_model_is_vacuous(structure, nilpotent):
    certificate = structure.construct_AQP(DKind.delta, nilpotent, 1, 2)
    assert certificate.status is CertificateStatus.vacuous


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_similarity_models_of_generated_isometries(structure, classes, seed):
    instance = classes.gen_instance(ClassSpec(Family.m_isometry, 3), 4, seed=seed)
    weighted = structure.construct_AQP(DKind.delta, instance.S, 3, 1)
    unweighted = structure.construct_B(DKind.delta, instance.S, 3, 1)
    assert weighted.status is CertificateStatus.passed
    assert unweighted.status is CertificateStatus.passed
    b = unweighted.matrix("B")
    assert classes.certify(ClassSpec(Family.m_isometry, 3), b).passed


def test_unweighted_model_needs_invertible_operator(structure, idempotent_like):
    with pytest.raises(PreconditionError):
        structure.construct_B(DKind.delta, idempotent_like, 1, 1)


def test_selfadjoint_similarity_model(structure, classes):
    instance = classes.gen_instance(ClassSpec(Family.m_selfadjoint, 3), 4, seed=8, shift=0.75)
    assert structure.construct_AQP(DKind.small_delta, instance.S, 3, 1).status is CertificateStatus.passed
    assert structure.construct_B(DKind.small_delta, instance.S, 3, 1).status is CertificateStatus.passed


def test_conjugated_similarity_model(structure, classes):
    instance = classes.gen_instance(ClassSpec(Family.mc_isometry, 3, 1), 4, seed=21)
    certificate = structure.construct_conjugated(DKind.delta, instance.S, instance.C, 3, 1)
    assert certificate.status is CertificateStatus.passed
    assert "CQC" in certificate.residuals


def test_conjugated_model_rejects_mismatched_conjugation(structure, classes, jordan):
    conjugation = classes.gen_conjugation(3, seed=0)
    with pytest.raises(PreconditionError):
        structure.construct_conjugated(DKind.delta, jordan, conjugation, 3, 1)


def test_left_inverse_of_jordan_block(structure, jordan):
    certificate = structure.left_inverse_Cp(adjoint(jordan), jordan, 3, 1)
    assert certificate.status is CertificateStatus.passed
    assert_allclose(certificate.matrix("C_p"), [[1, -1], [0, 1]], atol=1e-12)
    # the Jordan block is not power bounded
    assert "cp_norm_bound" not in certificate.residuals


@pytest.mark.parametrize("p", [1, 2, 3])
def test_left_inverses_of_generated_pair(structure, classes, p):
    pair = classes.gen_instance(ClassSpec(Family.left_m_invertible_pair, 2), 4, seed=17)
    certificate = structure.left_inverse_Cp(pair.T, pair.S, 2, p)
    assert certificate.status is CertificateStatus.passed


def test_left_inverse_norm_bound_for_unitary(structure):
    s = np.diag([1.0, 1j, -1.0])
    certificate = structure.left_inverse_Cp(np.linalg.inv(s), s, 2, 2)
    assert certificate.status is CertificateStatus.passed
    assert certificate.residuals["cp_norm_bound"].passed


def test_left_inverse_rejects_bad_orders(structure, jordan):
    with pytest.raises(DomainError):
        structure.left_inverse_Cp(adjoint(jordan), jordan, 0, 1)


@pytest.mark.parametrize("lam", [0.0, 1.0])
def test_riesz_criterion_on_non_normal_idempotent(structure, idempotent_like, lam):
    certificate = structure.riesz_selfadjoint_criterion(idempotent_like, adjoint(idempotent_like), 1, lam)
    assert certificate.status is CertificateStatus.passed
    assert certificate.metadata["m"] == 1
    assert not certificate.metadata["criterion_holds"]
    assert not certificate.metadata["projection_selfadjoint"]


def test_riesz_criterion_on_orthogonal_projection(structure):
    s = np.diag([1.0, 0.0])
    certificate = structure.riesz_selfadjoint_criterion(s, s, 1, 0.0)
    assert certificate.status is CertificateStatus.passed
    assert certificate.metadata["criterion_holds"]
    assert certificate.metadata["projection_selfadjoint"]


def test_riesz_criterion_rejects_non_eigenvalue(structure, idempotent_like):
    with pytest.raises(DomainError):
        structure.riesz_selfadjoint_criterion(idempotent_like, adjoint(idempotent_like), 1, 0.5)


@pytest.mark.parametrize("m", [2, 3])
def test_strictness_counterexample(structure, m):
    certificate = structure.strictness_counterexample(m, seed=7)
    assert certificate.status is CertificateStatus.passed
    assert certificate.metadata["product_minimal_order"] <= m - 1


def test_strictness_counterexample_needs_order_two(structure):
    with pytest.raises(DomainError):
        structure.strictness_counterexample(1, seed=0)


def test_perturbed_similarity(structure, classes):
    instance = classes.gen_instance(ClassSpec(Family.m_isometry, 3, 1), 3, seed=4, k=2, u=1.0)
    nilpotent = 0.8 * (instance.S - np.eye(3)) @ instance.S
    certificate = structure.construct_perturbed_similarity(DKind.delta, instance.S, nilpotent, 3, 1, 2)
    assert certificate.status is CertificateStatus.passed
    assert certificate.metadata["order"] == 5
    assert certificate.metadata["exponent"] == 2


def test_perturbed_similarity_order_cap(structure, quasi_jordan):
    with pytest.raises(DomainError):
        structure.construct_perturbed_similarity(DKind.delta, quasi_jordan, np.zeros((3, 3)), 9, 1, 3)
