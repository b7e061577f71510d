"""
Facade coordinating batch verification runs.

The facade wires suite strategies, trial observers and the report
repository together.
"""

from .verification_facade import VerificationFacade

__all__ = [
    "VerificationFacade"
]
