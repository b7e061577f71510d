from pydantic import BaseModel, ConfigDict, Field


class ToleranceConfig(BaseModel):
    """Thresholds used by every zero, rank and clustering decision"""

    model_config = ConfigDict(frozen=True)

    zero_rel: float = Field(1e-8, ge=0, description="Relative residual threshold")
    rank_rel: float = Field(1e-10, ge=0, description="Singular-value threshold factor")
    abs_floor: float = Field(1e-12, ge=0, description="Absolute floor added to every threshold")
    cluster_rel: float = Field(1e-6, ge=0, description="Eigenvalue clustering radius relative to the norm")

    def zero_threshold(self, scale: float) -> float:
        """Largest residual norm still counted as zero for terms of the given scale"""
        return self.abs_floor + self.zero_rel * scale

    def is_zero(self, norm: float, scale: float) -> bool:
        return norm <= self.zero_threshold(scale)

    def strict_threshold(self, scale: float) -> float:
        """Looser bound a residual must exceed to count as structurally nonzero"""
        return 1e3 * self.zero_threshold(scale)

    def with_zero_rel(self, zero_rel: float) -> "ToleranceConfig":
        return self.model_copy(update={"zero_rel": zero_rel})
