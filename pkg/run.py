"""
Hyperbolic Sobolev Lab - Application Entry Point
Run this script with a subcommand, e.g. ``python run.py coeffs --k 3 --symbolic``
"""

import sys

from app.cli import main


if __name__ == "__main__":
    sys.exit(main())
