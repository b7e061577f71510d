#!/usr/bin/env python3
"""
Command-line runner for the quasilab package
Usage: python3 run_cli.py verify --suite all --seed 42
"""

import sys

from quasilab.main import cli_dispatch


def main():
    """Run the lab CLI and exit with its status"""
    try:
        sys.exit(cli_dispatch(sys.argv[1:]))
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    main()
