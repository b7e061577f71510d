import numpy as np
from numpy.testing import assert_allclose
import pytest

from quasilab.exceptions import DomainError
from quasilab.models.certificate import CertificateStatus
from quasilab.services.spectral_service import SpectralService
from quasilab.utils.random_matrices import haar_unitary


def test_jordan_block_forms_one_cluster(spectral, jordan):
    clusters = spectral.eigen_data(jordan)
    assert len(clusters) == 1
    assert clusters[0].value == pytest.approx(1.0)
    assert clusters[0].algebraic_mult == 2


def test_clusters_are_sorted(spectral):
    clusters = spectral.eigen_data(np.diag([2.0, -1.0, 1j, -1j]))
    assert [c.value for c in clusters] == [pytest.approx(v) for v in (-1.0, -1j, 1j, 2.0)]


def test_ascent_descent_of_jordan_block(spectral, jordan):
    poles = spectral.ascent_descent(jordan, 1.0)
    assert (poles.ascent, poles.descent, poles.pole_order) == (2, 2, 2)


def test_locate_rejects_non_eigenvalue(spectral, jordan):
    with pytest.raises(DomainError):
        spectral.locate(jordan, 2.0)
    with pytest.raises(DomainError):
        spectral.riesz_projection(jordan, 0.5)


def test_riesz_projection_at_zero(spectral, idempotent_like):
    projection = spectral.riesz_projection(idempotent_like, 0.0)
    assert_allclose(projection.matrix, [[0, -1], [0, 1]], atol=1e-12)
    assert projection.warning is None
    assert not spectral.is_hermitian(projection.matrix)


def test_riesz_projections_sum_to_identity(spectral, rng):
    u = haar_unitary(rng, 4)
    a = u @ np.diag([1.0, 1.0, -1.0, 0.5j]) @ u.conj().T
    total = sum(spectral.riesz_projection(a, c.value).matrix for c in spectral.eigen_data(a))
    assert_allclose(total, np.eye(4), atol=1e-8)


def test_spectral_report_flags(spectral, jordan, idempotent_like):
    report = spectral.spectral_report(jordan)
    [info] = report.eigenvalues
    assert (info.algebraic_mult, info.geometric_mult, info.pole_order) == (2, 1, 2)
    flags = report.flags[info.value]
    assert flags.selfadjoint_projection
    assert not flags.simple_pole
    assert not report.warnings

    report = spectral.spectral_report(idempotent_like)
    assert [info.pole_order for info in report.eigenvalues] == [1, 1]
    assert not any(f.selfadjoint_projection for f in report.flags.values())


def test_spectrum_distance():
    assert SpectralService.spectrum_distance([1, 2], [2.1, 1]) == pytest.approx(0.1)
    assert SpectralService.spectrum_distance([], []) == 0.0
    assert SpectralService.spectrum_distance([1], [1, 2]) == float("inf")


def test_power_bounded_with_semisimple_unit_eigenvalues(spectral, jordan):
    assert spectral.is_power_bounded(np.diag([1.0, 1j, 0.3]))
    assert not spectral.is_power_bounded(jordan)


def test_unimodular_semisimple_check(spectral):
    s = np.diag([1.0, -1.0, 1j])
    certificate = spectral.unimodular_semisimple_check(s, np.linalg.inv(s), 1)
    assert certificate.status is CertificateStatus.passed


def test_unimodular_semisimple_check_needs_power_bounded_partner(spectral):
    s = np.diag([1.0, 0.5])
    certificate = spectral.unimodular_semisimple_check(s, np.linalg.inv(s), 1)
    assert certificate.status is CertificateStatus.vacuous
    assert "T power bounded" in [v.name for v in certificate.hypothesis_violations]


def test_real_spectrum_check(spectral, nilpotent):
    assert spectral.real_spectrum_check(nilpotent, 3).status is CertificateStatus.passed
    assert spectral.real_spectrum_check(np.diag([1j, 0.0]), 1).status is CertificateStatus.vacuous


def test_point_spectrum_circle_check(spectral):
    a = np.diag([1.0, 1j])
    certificate = spectral.point_spectrum_circle_check(a, np.eye(2), 1)
    assert certificate.status is CertificateStatus.passed


def test_point_spectrum_circle_check_is_vacuous_for_singular_weight(spectral):
    certificate = spectral.point_spectrum_circle_check(np.diag([1.0, 2.0]), np.diag([1.0, 0.0]), 1)
    assert certificate.status is CertificateStatus.vacuous
    assert certificate.notes


def test_conjugated_triple_pole_forms_one_cluster(spectral, rng):
    u = haar_unitary(rng, 3)
    shift = np.diag([1.0, 1.0], k=1)
    a = u @ (np.eye(3) + shift) @ u.conj().T
    [cluster] = spectral.eigen_data(a)
    assert cluster.algebraic_mult == 3
    assert cluster.value == pytest.approx(1.0, abs=1e-4)

    report = spectral.spectral_report(a)
    [info] = report.eigenvalues
    assert (info.algebraic_mult, info.geometric_mult, info.pole_order) == (3, 1, 3)
    assert not report.warnings
    assert_allclose(spectral.riesz_projection(a, 1.0).matrix, np.eye(3), atol=1e-8)


def test_scatter_radius_grows_with_multiplicity(spectral, jordan):
    assert spectral.scatter_radius(jordan, 1) <= spectral.scatter_radius(jordan, 2)
    assert spectral.scatter_radius(jordan, 2) <= spectral.scatter_radius(jordan, 3)
