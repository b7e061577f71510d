"""
Builders package for certificates using the Builder pattern.
"""

from .certificate_builder import CertificateBuilder

__all__ = ["CertificateBuilder"]
