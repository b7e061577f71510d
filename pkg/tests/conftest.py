import numpy as np
import pytest

from quasilab.config.tolerance import ToleranceConfig
from quasilab.services.calculus_service import CalculusService
from quasilab.services.class_service import ClassService
from quasilab.services.spectral_service import SpectralService
from quasilab.services.structure_service import StructureService
from quasilab.services.theorem_service import TheoremService
from quasilab.utils.random_matrices import make_rng


@pytest.fixture
def tol():
    return ToleranceConfig()


@pytest.fixture
def calculus(tol):
    return CalculusService(tol)


@pytest.fixture
def spectral(tol, calculus):
    return SpectralService(tol, calculus)


@pytest.fixture
def classes(tol, calculus, spectral):
    return ClassService(tol, calculus, spectral)


@pytest.fixture
def structure(tol, calculus, spectral, classes):
    return StructureService(tol, calculus, spectral, classes)


@pytest.fixture
def theorems(tol, calculus, structure):
    return TheoremService(tol, calculus, structure)


@pytest.fixture
def rng():
    return make_rng(20240601)


@pytest.fixture
def jordan():
    """[[1,1],[0,1]]: a strict 3-isometry"""
    return np.array([[1, 1], [0, 1]], dtype=np.complex128)


@pytest.fixture
def nilpotent():
    return np.array([[0, 1], [0, 0]], dtype=np.complex128)


@pytest.fixture
def idempotent_like():
    """[[1,1],[0,0]]: eigenvalues 1 and 0 with non-Hermitian Riesz projections"""
    return np.array([[1, 1], [0, 0]], dtype=np.complex128)
