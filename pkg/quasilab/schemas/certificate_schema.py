from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..models.certificate import Certificate, ConstructionCertificate, HypothesisViolation, ResidualEntry
from ..models.class_spec import Classification
from .matrix_schema import MatrixPayload, to_plain


class ResidualEntryResponse(BaseModel):
    """One measured residual with its threshold"""
    value: float
    scale: float
    threshold: float
    kind: str
    passed: bool

    @classmethod
    def from_entry(cls, entry: ResidualEntry) -> "ResidualEntryResponse":
        return cls(value=entry.value, scale=entry.scale, threshold=entry.threshold,
                   kind=entry.kind.value, passed=entry.passed)


class ViolationResponse(BaseModel):
    name: str
    magnitude: Optional[float] = Field(None, description="Size of the violated hypothesis when measurable")

    @classmethod
    def from_violation(cls, violation: HypothesisViolation) -> "ViolationResponse":
        return cls(name=violation.name, magnitude=to_plain(violation.magnitude))


class ClassSpecResponse(BaseModel):
    family: str
    m: int
    n: int
    label: str
    conjugation: Optional[MatrixPayload] = None


class CertificateResponse(BaseModel):
    """Membership certificate, optionally with the classification it came from"""
    spec: ClassSpecResponse
    passed: bool
    residual_norm: float
    scale: float
    threshold: float
    hypothesis_violations: List[ViolationResponse] = []
    minimal_m: Optional[int] = None
    strict: Optional[bool] = None
    seed: Optional[int] = None
    recipe: Optional[str] = None
    parameters: Dict[str, Any] = {}

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "spec": {"family": "m-isometry", "m": 3, "n": 0, "label": "m-isometry (m=3)", "conjugation": None},
            "passed": True,
            "residual_norm": 0.0,
            "scale": 3.0,
            "threshold": 3.0e-8,
            "hypothesis_violations": [],
            "minimal_m": 3,
            "strict": True
        }
    })

    @classmethod
    def from_certificate(cls, certificate: Certificate,
                         classification: Optional[Classification] = None) -> "CertificateResponse":
        spec = certificate.spec
        conjugation = None if spec.conjugation is None else MatrixPayload.from_array(spec.conjugation.J)
        metadata = certificate.metadata
        return cls(
            spec=ClassSpecResponse(family=spec.family.value, m=spec.m, n=spec.n,
                                   label=spec.label(), conjugation=conjugation),
            passed=certificate.passed,
            residual_norm=certificate.residual_norm,
            scale=certificate.scale,
            threshold=certificate.threshold,
            hypothesis_violations=[ViolationResponse.from_violation(v) for v in certificate.hypothesis_violations],
            minimal_m=None if classification is None else classification.minimal_m,
            strict=None if classification is None else classification.strict,
            seed=metadata.get("seed"),
            recipe=metadata.get("recipe"),
            parameters=to_plain(metadata.get("parameters", {})),
        )


class ConstructionCertificateResponse(BaseModel):
    """Residuals of a construction or theorem, with its payload matrices"""
    name: str
    passed: bool
    status: str
    residuals: Dict[str, ResidualEntryResponse]
    hypotheses: Dict[str, ResidualEntryResponse]
    hypothesis_violations: List[ViolationResponse]
    notes: List[str] = []
    payload: Dict[str, MatrixPayload] = {}
    seed: Optional[int] = None
    recipe: Optional[str] = None
    parameters: Dict[str, Any] = {}

    @classmethod
    def from_certificate(cls, certificate: ConstructionCertificate,
                         include_payload: bool = True) -> "ConstructionCertificateResponse":
        metadata = dict(certificate.metadata)
        seed = metadata.pop("seed", None)
        recipe = metadata.pop("recipe", None)
        return cls(
            name=certificate.name,
            passed=certificate.passed,
            status=certificate.status.value,
            residuals={k: ResidualEntryResponse.from_entry(v) for k, v in certificate.residuals.items()},
            hypotheses={k: ResidualEntryResponse.from_entry(v) for k, v in certificate.hypotheses.items()},
            hypothesis_violations=[ViolationResponse.from_violation(v) for v in certificate.hypothesis_violations],
            notes=list(certificate.notes),
            payload={k: MatrixPayload.from_array(v) for k, v in certificate.payload.items()} if include_payload else {},
            seed=seed,
            recipe=recipe,
            parameters=to_plain(metadata),
        )
