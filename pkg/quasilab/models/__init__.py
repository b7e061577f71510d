"""
Domain value types
"""
from .certificate import (
    Certificate,
    CertificateStatus,
    ConstructionCertificate,
    EntryKind,
    HypothesisViolation,
    ResidualEntry,
)
from .class_spec import Classification, ClassSpec, Family
from .conjugation import Conjugation
from .instance import GeneratedInstance
from .operator_pair import DKind, OperatorPair
from .quasi_blocks import QuasiBlocks
from .residual import ExpansionResult, Residual
from .spectral import (
    AscentDescent,
    EigenCluster,
    EigenInfo,
    ProjectionFlags,
    RieszProjection,
    SpectralReport,
)
from .trial import TrialOutcome

__all__ = [
    'AscentDescent',
    'Certificate',
    'CertificateStatus',
    'ClassSpec',
    'Classification',
    'Conjugation',
    'ConstructionCertificate',
    'DKind',
    'EigenCluster',
    'EigenInfo',
    'EntryKind',
    'ExpansionResult',
    'Family',
    'GeneratedInstance',
    'HypothesisViolation',
    'OperatorPair',
    'ProjectionFlags',
    'QuasiBlocks',
    'Residual',
    'ResidualEntry',
    'RieszProjection',
    'SpectralReport',
    'TrialOutcome',
]
