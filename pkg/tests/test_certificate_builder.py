import numpy as np
import pytest

from quasilab.builders import CertificateBuilder
from quasilab.models.certificate import CertificateStatus, EntryKind


def test_passing_certificate(tol):
    certificate = (CertificateBuilder(tol)
                   .set_name("  demo ")
                   .add_residual("conclusion", 1e-14, 1.0)
                   .add_bound("norm", 2.0, 4.0)
                   .add_payload("P", np.eye(2))
                   .set_metadata(m=3)
                   .build())
    assert certificate.name == "demo"
    assert certificate.status is CertificateStatus.passed
    assert certificate.residuals["norm"].kind is EntryKind.bound
    # bounds do not count toward the worst relative residual
    assert certificate.worst_residual() == pytest.approx(1e-14)
    assert certificate.matrix("P").dtype == np.complex128
    assert certificate.matrix("Q") is None


def test_failed_conclusion(tol):
    certificate = CertificateBuilder(tol).set_name("demo").add_residual("conclusion", 1.0, 1.0).build()
    assert certificate.status is CertificateStatus.failed


def test_violated_hypothesis_makes_it_vacuous(tol):
    certificate = (CertificateBuilder(tol)
                   .set_name("demo")
                   .add_hypothesis("[S,N]", 0.5, 1.0)
                   .add_residual("conclusion", 1.0, 1.0)
                   .build())
    assert certificate.status is CertificateStatus.vacuous
    assert certificate.hypothesis_violations[0].magnitude == 0.5


def test_vacuous_without_residuals(tol):
    certificate = CertificateBuilder(tol).set_name("demo").set_vacuous("nothing to check").build()
    assert certificate.status is CertificateStatus.vacuous
    assert certificate.notes == ("nothing to check",)


def test_validation(tol):
    with pytest.raises(ValueError):
        CertificateBuilder(tol).set_name(" ")
    with pytest.raises(ValueError):
        CertificateBuilder(tol).add_residual("r", 0.0, 1.0).build()
    with pytest.raises(ValueError):
        CertificateBuilder(tol).set_name("empty").build()
