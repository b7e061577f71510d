import os

from .tolerance import ToleranceConfig
from .tolerance_config import ToleranceProfiles


# Configuration settings
class Config:
    """Lab configuration read from the environment"""

    # Tolerance profile (individual thresholds are overridden by QIL_TOL and friends)
    TOL_PROFILE: str = os.getenv("QIL_TOL_PROFILE", "default")

    # Size caps
    MAX_DIM: int = int(os.getenv("QIL_MAX_DIM", "64"))
    MAX_KRON_DIM: int = int(os.getenv("QIL_MAX_KRON_DIM", "4096"))
    MAX_ORDER: int = min(int(os.getenv("QIL_MAX_ORDER", "12")), 12)
    BINOMIAL_CAP: int = 62

    # Empirical power-boundedness horizon
    POWER_HORIZON: int = int(os.getenv("QIL_POWER_HORIZON", "200"))

    # Logging
    LOG_LEVEL: str = os.getenv("QIL_LOG_LEVEL", "WARNING")

    @classmethod
    def get_tolerance_config(cls) -> ToleranceConfig:
        """Get the tolerance configuration described by the environment"""
        return ToleranceProfiles.create_tolerance()
