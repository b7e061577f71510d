"""
Exception hierarchy shared by every layer.

Each exception carries a ``detail`` message and the process ``exit_code`` the
CLI reports when it escapes a command.
"""
from typing import Optional


class LabException(Exception):
    """Base class for all lab errors"""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code

    def __str__(self) -> str:
        return self.detail


class InvalidInputError(LabException, ValueError):
    """Malformed or non-finite input"""
    exit_code = 2


class DimensionError(InvalidInputError):
    """Shapes do not agree or exceed the configured maximum"""


class SizeError(DimensionError):
    """Kronecker product grows beyond the configured maximum"""


class DomainError(InvalidInputError):
    """Parameter outside its admissible range"""


class NotPSDError(InvalidInputError):
    """Matrix expected to be positive semidefinite is not"""


class SingularError(InvalidInputError):
    """Inverse requested for a singular matrix"""


class PreconditionError(InvalidInputError):
    """A construction precondition does not hold"""


class GenerationError(InvalidInputError):
    """Generator asked for an infeasible instance"""


class NumericalError(LabException):
    """A numerical backend failed to converge"""
    exit_code = 1


class ReportIOError(LabException, OSError):
    """Reading or writing a file failed"""
    exit_code = 3
