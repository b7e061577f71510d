"""
Named tolerance profiles
"""
import logging
import os
from typing import Any, Dict, Optional

from pydantic import ValidationError

from .tolerance import ToleranceConfig

logger = logging.getLogger(__name__)


class ToleranceProfiles:
    """Presets for the tolerance configuration"""

    # Default settings for each profile
    DEFAULT_SETTINGS = {
        'default': {
            'zero_rel': 1e-8,
            'rank_rel': 1e-10,
            'abs_floor': 1e-12,
            'cluster_rel': 1e-6,
        },
        'strict': {
            'zero_rel': 1e-10,
            'rank_rel': 1e-12,
            'abs_floor': 1e-14,
            'cluster_rel': 1e-8,
        },
        'loose': {
            'zero_rel': 1e-6,
            'rank_rel': 1e-8,
            'abs_floor': 1e-10,
            'cluster_rel': 1e-5,
        },
    }

    ENV_OVERRIDES = {
        'zero_rel': 'QIL_TOL',
        'rank_rel': 'QIL_RANK_REL',
        'abs_floor': 'QIL_ABS_FLOOR',
        'cluster_rel': 'QIL_CLUSTER_REL',
    }

    @classmethod
    def get_profile(cls) -> str:
        """Get the profile name from environment or default"""
        return os.getenv('QIL_TOL_PROFILE', 'default').lower()

    @classmethod
    def get_profile_settings(cls, profile: Optional[str] = None) -> Dict[str, Any]:
        """Get settings for the specified profile"""
        if profile is None:
            profile = cls.get_profile()
        if profile not in cls.DEFAULT_SETTINGS:
            raise ValueError(f"Unsupported tolerance profile: {profile}. Available: {list(cls.DEFAULT_SETTINGS.keys())}")

        settings = cls.DEFAULT_SETTINGS[profile].copy()

        # Override with environment variables if available
        for field, env_name in cls.ENV_OVERRIDES.items():
            env_value = os.getenv(env_name)
            if not env_value:
                continue
            try:
                settings[field] = float(env_value)
            except ValueError:
                logger.warning("Ignoring non-numeric %s=%r", env_name, env_value)

        return settings

    @classmethod
    def create_tolerance(cls, zero_rel: Optional[float] = None) -> ToleranceConfig:
        """Create a ToleranceConfig from the configured profile"""
        profile = cls.get_profile()
        try:
            settings = cls.get_profile_settings(profile)
        except ValueError as e:
            logger.warning("%s. Falling back to default profile.", e)
            settings = cls.DEFAULT_SETTINGS['default'].copy()

        if zero_rel is not None:
            settings['zero_rel'] = zero_rel

        try:
            return ToleranceConfig(**settings)
        except ValidationError as e:
            logger.warning("Invalid tolerance settings %s: %s. Falling back to default profile.", settings, e)
            return ToleranceConfig(**cls.DEFAULT_SETTINGS['default'])

    @classmethod
    def get_current_config_info(cls) -> Dict[str, Any]:
        """Get current configuration information for logging/debugging"""
        profile = cls.get_profile()
        return {
            'profile': profile,
            'settings': cls.create_tolerance().model_dump(),
            'profile_source': 'environment' if os.getenv('QIL_TOL_PROFILE') else 'default',
        }
