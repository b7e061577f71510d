import numpy as np
from numpy.testing import assert_allclose
import pytest

from quasilab.exceptions import DimensionError, DomainError, GenerationError, PreconditionError
from quasilab.models.class_spec import ClassSpec, Family
from quasilab.models.conjugation import Conjugation
from quasilab.models.operator_pair import DKind, OperatorPair
from quasilab.utils.linalg import adjoint


def test_classify_jordan_block(classes, jordan):
    classification = classes.classify(OperatorPair.adjoint_of(jordan, DKind.delta), 0, 5)
    assert classification.minimal_m == 3
    assert classification.strict
    assert len(classification.certificates) == 3
    assert classification.certificates[-1].spec.family is Family.m_isometry


def test_classify_quasi_isometry(classes, idempotent_like):
    classification = classes.classify(OperatorPair.adjoint_of(idempotent_like, DKind.delta), 1, 4)
    assert classification.minimal_m == 1


def test_classify_reports_no_order(classes):
    s = np.diag([2.0, 0.5])
    classification = classes.classify(OperatorPair.adjoint_of(s, DKind.delta), 0, 4)
    assert classification.minimal_m is None
    assert not classification.strict


@pytest.mark.parametrize("m_max, n", [(0, 0), (13, 0), (3, -1)])
def test_classify_rejects_bad_ranges(classes, jordan, m_max, n):
    with pytest.raises(DomainError):
        classes.classify(OperatorPair.adjoint_of(jordan, DKind.delta), n, m_max)


def test_certify(classes, jordan):
    certificate = classes.certify(ClassSpec(Family.m_isometry, 3), jordan)
    assert certificate.passed
    assert not classes.certify(ClassSpec(Family.m_isometry, 2), jordan).passed


def test_certify_flags_a_partner_that_is_not_the_adjoint(classes, jordan):
    certificate = classes.certify(ClassSpec(Family.m_isometry, 3), jordan, T=np.eye(2))
    assert not certificate.passed
    assert [v.name for v in certificate.hypothesis_violations] == ["T = S*"]


def test_certify_preconditions(classes, jordan):
    with pytest.raises(PreconditionError):
        classes.certify(ClassSpec(Family.left_m_invertible_pair, 2), jordan)
    with pytest.raises(PreconditionError):
        classes.certify(ClassSpec(Family.mc_isometry, 2), jordan)


def test_conjugation_dimension_mismatch(classes, jordan):
    with pytest.raises(DimensionError):
        classes.classify(OperatorPair.adjoint_of(jordan, DKind.delta), 0, 3, Conjugation.identity(3))


def test_class_spec_validation():
    with pytest.raises(ValueError):
        ClassSpec(Family.m_isometry, 0)
    with pytest.raises(ValueError):
        ClassSpec(Family.m_isometry, 2, -1)
    with pytest.raises(ValueError):
        ClassSpec(Family.m_isometry, 2, conjugation=Conjugation.identity(2))


@pytest.mark.parametrize("family", list(Family))
@pytest.mark.parametrize("m, n", [(1, 0), (3, 0), (2, 1), (3, 2)])
def test_generated_instances_are_certified(classes, family, m, n):
    instance = classes.gen_instance(ClassSpec(family, m, n), 5, seed=11 * m + n)
    assert instance.certificate.passed
    assert instance.certificate.spec.family is family
    assert instance.seed == 11 * m + n
    if family.uses_conjugation:
        assert instance.C is not None
        assert_allclose(instance.C.J, instance.C.J.T, atol=1e-12)
    if family.adjoint_partner:
        assert_allclose(instance.T, adjoint(instance.S))


@pytest.mark.parametrize("family, expected", [
    (Family.m_isometry, 3),
    (Family.m_selfadjoint, 3),
    (Family.mc_isometry, 3),
    (Family.left_m_invertible_pair, 3),
    (Family.m_intertwined_pair, 3),
])
def test_generated_instances_have_strict_order(classes, family, expected):
    instance = classes.gen_instance(ClassSpec(family, 3), 4, seed=5)
    pair = OperatorPair(instance.T, instance.S, family.kind)
    classification = classes.classify(pair, 0, 6, instance.C)
    assert classification.minimal_m == expected
    assert classification.strict


def test_generation_is_deterministic(classes):
    spec = ClassSpec(Family.mc_symmetry, 2, 1)
    first = classes.gen_instance(spec, 4, seed=99)
    second = classes.gen_instance(spec, 4, seed=99)
    assert_allclose(first.S, second.S, rtol=0, atol=0)
    assert_allclose(first.C.J, second.C.J, rtol=0, atol=0)
    assert first.recipe == "quasi-lift/real-jordan-transported"


def test_generation_overrides(classes):
    instance = classes.gen_instance(ClassSpec(Family.m_isometry, 3, 1), 3, seed=1, u=1.0, coupling=0.5,
                                    similarity=False)
    assert_allclose(instance.S, [[1, 1, 0.5], [0, 1, 0.5], [0, 0, 0]])
    assert instance.certificate.metadata["parameters"]["k"] == 2


def test_generation_errors(classes):
    with pytest.raises(GenerationError):
        classes.gen_instance(ClassSpec(Family.m_isometry, 1, 1), 1, seed=0)
    with pytest.raises(DomainError):
        classes.gen_instance(ClassSpec(Family.m_isometry, 13), 3, seed=0)
    with pytest.raises(DimensionError):
        classes.gen_instance(ClassSpec(Family.m_isometry, 1), 0, seed=0)


def test_generated_conjugation(classes):
    conjugation = classes.gen_conjugation(4, seed=3, block_dims=(1, 3))
    assert_allclose(conjugation.J[:1, 1:], np.zeros((1, 3)))
    with pytest.raises(DimensionError):
        classes.gen_conjugation(4, seed=3, block_dims=(1, 2))


def test_power_boundedness(classes, jordan):
    assert not classes.is_power_bounded(jordan)
    assert classes.is_power_bounded(np.diag([1.0, -1.0, 0.5j]))
    assert not classes.is_power_bounded(np.diag([1.01, 0.2]))
    assert classes.empirical_power_bound(jordan, 10) == pytest.approx(np.linalg.norm([[1, 10], [0, 1]], 2))
    assert classes.empirical_power_bound(np.diag([0.5, 0.25]), 10) == 1.0
