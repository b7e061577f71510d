import enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config.tolerance import ToleranceConfig


class SuiteName(str, enum.Enum):
    calculus = "calculus"
    classes = "classes"
    spectral = "spectral"
    similarity = "similarity"
    conjugated = "conjugated"
    left_inverse = "left-inverse"
    riesz = "riesz"
    products = "products"
    perturbation = "perturbation"
    all = "all"

    @classmethod
    def concrete(cls) -> List["SuiteName"]:
        """Every suite except the 'all' alias, in run order"""
        return [suite for suite in cls if suite is not cls.all]


class SuiteConfig(BaseModel):
    """Batch verification settings"""
    suites: List[SuiteName] = Field(default_factory=lambda: [SuiteName.all], min_length=1)
    trials: int = Field(100, ge=1, description="Trials per suite")
    dims: Tuple[int, int] = Field((2, 6), description="Inclusive dimension range")
    seed: int = Field(0, description="Master seed; sub-seeds derive from (seed, suite, trial)")
    tol: ToleranceConfig = Field(default_factory=ToleranceConfig)
    report_path: Optional[str] = Field(None, description="Where to write the JSON report; stdout when absent")
    workers: int = Field(1, ge=1, description="Trials run concurrently")
    sabotage: bool = Field(False, description="Break commuting hypotheses in generated instances")

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "suites": ["calculus", "products"],
            "trials": 10,
            "dims": [2, 4],
            "seed": 42
        }
    })

    @field_validator("dims")
    @classmethod
    def validate_dims(cls, v: Tuple[int, int]) -> Tuple[int, int]:
        low, high = v
        if not 1 <= low <= high <= 16:
            raise ValueError(f"dims must satisfy 1 ≤ low ≤ high ≤ 16, got {low}..{high}")
        return v

    def expanded_suites(self) -> List[SuiteName]:
        if SuiteName.all in self.suites:
            return SuiteName.concrete()
        return [suite for suite in SuiteName.concrete() if suite in self.suites]

    def report_fields(self) -> Dict[str, Any]:
        """The part of the configuration that determines the report"""
        return self.model_dump(mode="json", exclude={"report_path", "workers"})


class CertificateCounts(BaseModel):
    """Outcome counts of one certificate kind across the trials of a suite"""
    passed: int = Field(0, ge=0)
    vacuous: int = Field(0, ge=0)
    failed: int = Field(0, ge=0)

    @property
    def total(self) -> int:
        return self.passed + self.vacuous + self.failed


class SuiteSummary(BaseModel):
    """Outcome counts of one suite"""
    trials: int = Field(..., ge=0)
    passed: int = Field(0, ge=0)
    vacuous: int = Field(0, ge=0)
    failed: int = Field(0, ge=0)
    worst_residual: float = Field(0.0, description="Largest relative conclusion residual over all trials")
    exemplar_seeds: List[int] = Field(default_factory=list, description="Sub-seeds of failed trials")
    certificates: Dict[str, CertificateCounts] = Field(default_factory=dict,
                                                       description="Counts per certificate name")

    @model_validator(mode="after")
    def check_counts(self) -> "SuiteSummary":
        if self.passed + self.vacuous + self.failed != self.trials:
            raise ValueError(
                f"passed + vacuous + failed = {self.passed + self.vacuous + self.failed}, "
                f"expected {self.trials}"
            )
        return self


class SuiteReport(BaseModel):
    suites: Dict[str, SuiteSummary]
    overall: bool
    config: Dict[str, Any]

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "suites": {
                "calculus": {"trials": 1, "passed": 1, "vacuous": 0, "failed": 0,
                             "worst_residual": 0.0, "exemplar_seeds": []}
            },
            "overall": True,
            "config": {"suites": ["calculus"], "trials": 1, "dims": [2, 2], "seed": 0}
        }
    })

    @classmethod
    def from_summaries(cls, config: SuiteConfig, summaries: Dict[str, SuiteSummary]) -> "SuiteReport":
        return cls(
            suites=summaries,
            overall=all(summary.failed == 0 for summary in summaries.values()),
            config=config.report_fields(),
        )
