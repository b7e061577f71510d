"""
Tests for the product and perturbation theorems on hand-built instances
"""
import numpy as np
import pytest

from quasilab.exceptions import DimensionError, DomainError
from quasilab.models.certificate import CertificateStatus
from quasilab.models.class_spec import ClassSpec, Family
from quasilab.models.conjugation import Conjugation
from quasilab.models.operator_pair import DKind
from quasilab.utils.linalg import adjoint
from quasilab.utils.random_matrices import complex_gaussian


def test_flat_perturbation_of_identity(theorems, nilpotent):
    # I + N is the Jordan block, a strict 3-isometry
    identity = np.eye(2)
    certificate = theorems.perturbation_flat(DKind.delta, identity, identity, nilpotent, adjoint(nilpotent), 1, 2, 2)
    assert certificate.status is CertificateStatus.passed
    assert certificate.metadata["order"] == 3
    assert certificate.residual("conclusion") < 1e-12


def test_flat_perturbation_with_non_commuting_nilpotent(theorems, jordan, nilpotent):
    certificate = theorems.perturbation_flat(DKind.delta, jordan, adjoint(jordan), adjoint(nilpotent),
                                             nilpotent, 3, 2, 2)
    assert certificate.status is CertificateStatus.vacuous
    assert "[S,N1]" in [v.name for v in certificate.hypothesis_violations]


def test_product_of_commuting_jordan_blocks(theorems, jordan):
    certificate = theorems.verify_product_theorem(DKind.delta, np.eye(2), jordan, adjoint(jordan),
                                                  jordan, adjoint(jordan), 3, 3, 0)
    assert certificate.status is CertificateStatus.passed
    assert certificate.metadata["order"] == 5


def test_product_with_broken_commutation_is_vacuous(theorems, jordan, rng):
    s2 = complex_gaussian(rng, (2, 2))
    certificate = theorems.verify_product_theorem(DKind.delta, np.eye(2), jordan, adjoint(jordan),
                                                  s2, adjoint(s2), 3, 3, 0)
    assert certificate.status is CertificateStatus.vacuous
    assert not certificate.passed


def test_product_wrappers(theorems, jordan, nilpotent):
    assert theorems.product_isometric(jordan, jordan, 3, 3, 0).status is CertificateStatus.passed
    assert theorems.product_tensor(DKind.delta, jordan, adjoint(jordan), jordan, adjoint(jordan),
                                   3, 3, 0).status is CertificateStatus.passed
    assert theorems.product_conjugated(DKind.delta, jordan, jordan, Conjugation.identity(2),
                                       3, 3).status is CertificateStatus.passed
    assert theorems.product_selfadjoint(nilpotent, nilpotent, 3, 3).status is CertificateStatus.passed


def test_quasi_product(theorems, idempotent_like):
    certificate = theorems.product_isometric(idempotent_like, idempotent_like, 1, 1, 1)
    assert certificate.status is CertificateStatus.passed


def test_product_order_cap(theorems, jordan):
    with pytest.raises(DomainError):
        theorems.verify_product_theorem(DKind.delta, np.eye(2), jordan, adjoint(jordan),
                                        jordan, adjoint(jordan), 7, 7, 0)


def test_product_shape_mismatch(theorems, jordan):
    with pytest.raises(DimensionError):
        theorems.verify_product_theorem(DKind.delta, np.eye(3), jordan, adjoint(jordan),
                                        jordan, adjoint(jordan), 3, 3, 0)


def test_isometric_perturbation(theorems, nilpotent):
    certificate = theorems.perturbation_isometric(DKind.delta, np.eye(2), nilpotent, 1, 1, 2)
    assert certificate.status is CertificateStatus.passed
    assert certificate.metadata["exponent"] == 2


def test_conjugated_perturbation(theorems, nilpotent):
    certificate = theorems.perturbation_conjugated(DKind.delta, np.eye(2), nilpotent, Conjugation.identity(2),
                                                   1, 1, 2)
    assert certificate.status is CertificateStatus.passed
    assert certificate.metadata["alternative_order"] == 2


def test_general_perturbation_theorem(theorems, nilpotent):
    identity = np.eye(2)
    quasi = theorems.verify_perturbation_theorem(DKind.delta, identity, identity, nilpotent,
                                                 adjoint(nilpotent), 1, 1, 2, 2)
    flat = theorems.verify_perturbation_theorem(DKind.delta, identity, identity, nilpotent,
                                                adjoint(nilpotent), 1, 0, 2, 2)
    assert quasi.name == "perturbation"
    assert flat.name == "perturbation-flat"
    assert quasi.status is CertificateStatus.passed
    assert flat.status is CertificateStatus.passed


def test_perturbation_rejects_bad_index(theorems, nilpotent):
    identity = np.eye(2)
    with pytest.raises(DomainError):
        theorems.perturbation_flat(DKind.delta, identity, identity, nilpotent, nilpotent, 1, 0, 2)
    with pytest.raises(DomainError):
        theorems.perturbation_flat(DKind.delta, identity, identity, nilpotent, nilpotent, 9, 3, 3)


@pytest.mark.parametrize("seed", range(6))
def test_conjugated_product_with_complex_tail_never_fails(theorems, classes, seed):
    base = classes.gen_instance(ClassSpec(Family.mc_isometry, 2), 4, seed)
    s2 = -base.S @ base.S
    certificate = theorems.product_conjugated(DKind.delta, base.S, s2, base.C, 2, 2)
    assert certificate.status is not CertificateStatus.failed
