"""
Hyperbolic Sobolev Lab - Error hierarchy
Every error carries a machine-readable code and the CLI exit status it maps to
"""

from typing import Any, Dict, Optional


class LabError(Exception):
    """Base class for all library errors"""

    code = "LAB_ERROR"
    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


# ============================================================================
# EXACT ALGEBRA
# ============================================================================

class SingularSystem(LabError):
    """No full-column-rank square subsystem exists"""
    code = "SINGULAR_SYSTEM"


class DegreeExceeded(LabError):
    """Interpolation points need a higher degree than allowed"""
    code = "DEGREE_EXCEEDED"


# ============================================================================
# OPERATORS AND SYMBOLIC IDENTITIES
# ============================================================================

class IndexOutOfRange(LabError, ValueError):
    code = "INDEX_OUT_OF_RANGE"


class SurplusNonzero(LabError):
    """A surplus equation of an overdetermined system does not vanish"""
    code = "SURPLUS_NONZERO"
    exit_code = 2


class NonzeroResidual(LabError):
    """A symbolic identity left a nonzero monomial behind"""
    code = "NONZERO_RESIDUAL"
    exit_code = 2


# ============================================================================
# NUMERICS
# ============================================================================

class DimensionTooSmall(LabError, ValueError):
    """Requires n > 2k"""
    code = "DIMENSION_TOO_SMALL"


class ToleranceNotMet(LabError):
    code = "TOLERANCE_NOT_MET"


class JetOrderTooLow(LabError, ValueError):
    code = "JET_ORDER_TOO_LOW"


# ============================================================================
# CLI
# ============================================================================

class UsageError(LabError, ValueError):
    code = "USAGE_ERROR"


class DomainError(LabError, ValueError):
    code = "DOMAIN_ERROR"


class VerificationFailure(LabError):
    code = "VERIFICATION_FAILURE"
    exit_code = 2
