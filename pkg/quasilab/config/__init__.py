from .app_config import Config
from .tolerance import ToleranceConfig
from .tolerance_config import ToleranceProfiles

__all__ = ['Config', 'ToleranceConfig', 'ToleranceProfiles']
