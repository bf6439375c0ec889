"""Hyperbolic Sobolev Lab - exact operators and sharp-constant verification"""

__version__ = "1.0.0"
