import numpy as np
from numpy.testing import assert_allclose
import pytest
import scipy.linalg as sla

from quasilab.exceptions import DimensionError, DomainError
from quasilab.models.conjugation import Conjugation
from quasilab.models.operator_pair import DKind, OperatorPair
from quasilab.utils.linalg import adjoint, frobenius
from quasilab.utils.random_matrices import complex_gaussian, jordan_nilpotent, make_rng, polynomial_in


def test_jordan_block_is_a_strict_3_isometry(calculus, jordan):
    pair = OperatorPair.adjoint_of(jordan, DKind.delta)
    identity = np.eye(2)
    assert_allclose(calculus.d_power(pair, identity, 3), np.zeros((2, 2)), atol=1e-12)
    assert_allclose(calculus.d_power(pair, identity, 2), [[0, 0], [0, 2]], atol=1e-12)
    assert_allclose(calculus.d_power_closed(pair, identity, 3), np.zeros((2, 2)), atol=1e-12)


def test_nilpotent_is_a_strict_3_selfadjoint(calculus, nilpotent):
    pair = OperatorPair.adjoint_of(nilpotent, DKind.small_delta)
    identity = np.eye(2)
    assert_allclose(calculus.d_power(pair, identity, 3), np.zeros((2, 2)), atol=1e-15)
    assert_allclose(calculus.d_power(pair, identity, 2), [[0, 0], [0, -2]], atol=1e-15)


@pytest.mark.parametrize("kind", [DKind.delta, DKind.small_delta])
@pytest.mark.parametrize("m", [0, 1, 2, 4, 6])
@pytest.mark.parametrize("dim", [2, 5])
def test_recursive_and_closed_forms_agree(calculus, tol, kind, m, dim):
    rng = make_rng(1000 * m + dim)
    t, s, x = (complex_gaussian(rng, (dim, dim)) / np.sqrt(dim) for _ in range(3))
    pair = OperatorPair(t, s, kind)
    closed = calculus.closed_sum(pair, x, m)
    recursive = calculus.d_power(pair, x, m)
    assert frobenius(recursive - closed.matrix) <= tol.zero_threshold(closed.scale)


@pytest.mark.parametrize("kind, m, sign", [
    (DKind.delta, 3, 1),
    (DKind.small_delta, 2, 1),
    (DKind.small_delta, 3, -1),
])
def test_adjoint_duality(calculus, rng, kind, m, sign):
    t, s = complex_gaussian(rng, (3, 3)), complex_gaussian(rng, (3, 3))
    pair = OperatorPair(t, s, kind)
    identity = np.eye(3)
    direct = calculus.d_power(pair, identity, m)
    dual = calculus.d_power(calculus.adjoint_pair(pair), identity, m)
    assert_allclose(dual, sign * adjoint(direct), atol=1e-9 * max(1.0, frobenius(direct)))


def test_power_pair(calculus, jordan):
    pair = calculus.power_pair(OperatorPair.adjoint_of(jordan, DKind.delta), 3)
    assert_allclose(pair.S, [[1, 3], [0, 1]])
    assert calculus.quasi_residual(pair, 3, 0).norm < 1e-12
    with pytest.raises(DomainError):
        calculus.power_pair(pair, 0)


def test_quasi_residual_sandwich(calculus, idempotent_like):
    # [[1,1],[0,0]] is a 1-quasi isometry but not an isometry
    pair = OperatorPair.adjoint_of(idempotent_like, DKind.delta)
    assert calculus.quasi_residual(pair, 1, 1).norm < 1e-12
    assert calculus.quasi_residual(pair, 1, 0).norm > 0.5


def test_identity_conjugation_is_entrywise_conjugation(calculus, rng):
    m = complex_gaussian(rng, (3, 3))
    assert_allclose(calculus.cmc(Conjugation.identity(3), m), np.conj(m))


def test_cmc_shape_mismatch(calculus):
    with pytest.raises(DimensionError):
        calculus.cmc(Conjugation.identity(2), np.eye(3))


def test_product_expansion_for_commuting_operators(calculus, rng):
    base = complex_gaussian(rng, (3, 3)) / 2
    t1, s1, t2, s2 = (polynomial_in(rng, base) for _ in range(4))
    result = calculus.product_expansion(DKind.delta, t1, s1, t2, s2, 3)
    assert result.hypotheses_hold
    assert result.residual < 1e-10


def test_product_expansion_reports_commutators(calculus, rng):
    t1, s1, t2, s2 = (complex_gaussian(rng, (3, 3)) for _ in range(4))
    result = calculus.product_expansion(DKind.small_delta, t1, s1, t2, s2, 2)
    names = {v.name for v in result.hypothesis_violations}
    assert {"[S1,S2]", "[T1,T2]"} <= names


@pytest.mark.parametrize("kind", [DKind.delta, DKind.small_delta])
def test_perturbation_expansion(calculus, rng, kind):
    t = complex_gaussian(rng, (4, 4))
    nil = 0.7 * jordan_nilpotent(4)
    # N commutes with every polynomial in itself
    s = polynomial_in(rng, nil)
    result = calculus.perturbation_expansion(kind, t, s, nil, 3)
    assert result.hypotheses_hold
    assert result.residual < 1e-10


def test_order_and_shape_errors(calculus, jordan):
    pair = OperatorPair.adjoint_of(jordan, DKind.delta)
    with pytest.raises(DomainError):
        calculus.d_power(pair, np.eye(2), -1)
    with pytest.raises(DomainError):
        calculus.quasi_residual(pair, 0, 0)
    with pytest.raises(DimensionError):
        calculus.d_apply(pair, np.eye(3))
    with pytest.raises(DomainError):
        calculus.closed_sum(pair, np.eye(2), 63)


def test_propagated_scale_covers_cancellation(calculus, rng):
    # complex orthogonal: E^T E = I while ‖E‖ is large
    skew = complex_gaussian(rng, (3, 3))
    e = sla.expm(skew - skew.T)
    pair = OperatorPair(adjoint(e), e.conj(), DKind.delta)
    plain = calculus.closed_sum(pair, np.eye(3), 1)
    propagated = calculus.closed_sum(pair, np.eye(3), 1, propagated=True)
    assert_allclose(propagated.matrix, plain.matrix)
    assert propagated.scale >= plain.scale
    assert propagated.scale >= frobenius(e) ** 2 * np.sqrt(3) * (1 - 1e-12)
