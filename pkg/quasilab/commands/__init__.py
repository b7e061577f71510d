"""
Command-line subcommands; each module exposes register(subparsers).
"""
from . import check, construct, gen, spectral, verify

COMMANDS = [verify, check, construct, spectral, gen]

__all__ = ["COMMANDS"]
