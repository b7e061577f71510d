from typing import List

from pydantic import BaseModel, Field

from ..models.spectral import SpectralReport
from .matrix_schema import MatrixPayload


class EigenInfoResponse(BaseModel):
    """One eigenvalue cluster with its pole data and Riesz projection"""
    value: List[float] = Field(..., description="[re, im]")
    algebraic_mult: int
    geometric_mult: int
    ascent: int
    descent: int
    pole_order: int
    selfadjoint_projection: bool
    simple_pole: bool
    projection: MatrixPayload


class SpectralReportResponse(BaseModel):
    dim: int
    eigenvalues: List[EigenInfoResponse]
    warnings: List[str] = []

    @classmethod
    def from_report(cls, report: SpectralReport) -> "SpectralReportResponse":
        entries = []
        for info in report.eigenvalues:
            flags = report.flags[info.value]
            entries.append(EigenInfoResponse(
                value=[float(info.value.real), float(info.value.imag)],
                algebraic_mult=info.algebraic_mult,
                geometric_mult=info.geometric_mult,
                ascent=info.ascent,
                descent=info.descent,
                pole_order=info.pole_order,
                selfadjoint_projection=flags.selfadjoint_projection,
                simple_pole=flags.simple_pole,
                projection=MatrixPayload.from_array(report.riesz[info.value]),
            ))
        return cls(dim=report.dim, eigenvalues=entries, warnings=list(report.warnings))
