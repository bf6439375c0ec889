"""
Hyperbolic Sobolev Lab - Pydantic Schemas
Parameter validation and report records
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from app.config import settings

logger = logging.getLogger(__name__)


class Subcommand(str, Enum):
    """CLI subcommands"""
    COEFFS = "coeffs"
    CONSTANTS = "constants"
    VERIFY = "verify"
    QUOTIENT = "quotient"
    EUCLID_QUOTIENT = "euclid-quotient"
    CONFORMAL = "conformal"
    THM33_PROBE = "thm33-probe"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class Suite(str, Enum):
    """Verification suites"""
    EL = "el"
    EUCLID_EL = "euclid-el"
    RECURSION = "recursion"
    CONSTANTS = "constants"
    CONFORMAL = "conformal"
    ALL = "all"


# ============================================================================
# PARAMETER SCHEMAS
# ============================================================================

class ExtremalParams(BaseModel):
    """Dimension, order and parameter of the extremal family u_beta"""

    n: int = Field(..., description="Dimension of hyperbolic space", ge=3)
    k: int = Field(..., description="Order of the operator", ge=1)
    beta: float = Field(0.0, description="Extremal parameter in [0, 1)", ge=0.0, lt=1.0)

    @field_validator("beta")
    @classmethod
    def cap_beta(cls, v: float) -> float:
        if v > settings.beta_cap:
            logger.warning("beta=%r capped at %r", v, settings.beta_cap)
            return settings.beta_cap
        return v

    @model_validator(mode="after")
    def check_dimension(self) -> "ExtremalParams":
        if self.n <= 2 * self.k:
            raise ValueError(f"Need n > 2k, got n={self.n}, k={self.k}")
        return self

    class Config:
        frozen = True
        json_schema_extra = {"example": {"n": 5, "k": 1, "beta": 0.9}}

    @property
    def q(self) -> Fraction:
        """Critical exponent 2n/(n - 2k)"""
        return Fraction(2 * self.n, self.n - 2 * self.k)

    @property
    def one_minus_beta(self) -> float:
        return 1.0 - self.beta

    @property
    def tau2(self) -> float:
        return self.one_minus_beta / (1.0 + self.beta)

    @property
    def exponent(self) -> float:
        """k - n/2"""
        return self.k - self.n / 2.0


class BumpSpec(BaseModel):
    """Radial test function for conformal-law checks"""

    kind: Literal["bump", "constant", "extremal"] = "bump"
    center: float = Field(1.0, description="Bump centre R0", gt=0.0)
    width: float = Field(0.8, description="Bump radius W", gt=0.0)
    beta: float = Field(0.5, description="Parameter when kind is extremal", ge=0.0, lt=1.0)

    @model_validator(mode="after")
    def check_support(self) -> "BumpSpec":
        if self.kind == "bump" and self.width >= self.center:
            raise ValueError("Bump support must stay away from the origin (width < center)")
        return self

    class Config:
        frozen = True


# ============================================================================
# RESULT SCHEMAS
# ============================================================================

class QuadratureResult(BaseModel):
    """Outcome of one adaptive 1-D integral"""

    value: float
    error_estimate: float = Field(..., ge=0.0)
    subdivisions: int = Field(0, ge=0)
    endpoint_exponents: Tuple[float, float] = (0.0, 0.0)
    converged: bool = True

    @property
    def divergent(self) -> bool:
        return not self.converged and self.value == float("inf")


class QuotientReport(BaseModel):
    """Sobolev quotient of one extremal against the sharp value 1/Lambda_k"""

    params: ExtremalParams
    integral_uq: float = Field(..., gt=0.0, description="Integral of |u|^q")
    quotient: float
    sharp_value: float = Field(..., gt=0.0, description="1 / Lambda_k")
    gap: float = Field(..., description="sharp_value - quotient")
    err_estimate: float = Field(0.0, ge=0.0)

    @property
    def relative_gap(self) -> float:
        return self.gap / self.sharp_value


class ConstantsRecord(BaseModel):
    """Sharp constants for one (n, k)"""

    n: int
    k: int
    q: str = Field(..., description="Critical exponent as an exact fraction")
    omega_n: float = Field(..., gt=0.0)
    lambda_k: float = Field(..., gt=0.0)
    b_k: str = Field(..., description="Euler-Lagrange constant as an exact fraction")

    class Config:
        json_schema_extra = {
            "example": {
                "n": 4,
                "k": 1,
                "q": "4",
                "omega_n": 26.3189450696716,
                "lambda_k": 0.0974620860537196,
                "b_k": "2",
            }
        }


class ConformalReport(BaseModel):
    """Transformation-law check at matched sample points"""

    n: int
    k: int
    kind: str
    jet_order: int
    samples: int
    max_residual: float = Field(..., ge=0.0)


class Thm33Report(BaseModel):
    """Divergence diagnostics for the energies of the extremal family"""

    params: ExtremalParams
    l2_form: QuadratureResult
    gradient_form: QuadratureResult
    growth_rate: float
    expected_growth_rate: float
    growth_radii: List[float]
    probe: Optional[float] = None
    sharp_value: float


class VerificationCheck(BaseModel):
    name: str
    k: int
    n: Optional[int] = None
    residual: str
    passed: bool


class VerificationReport(BaseModel):
    suite: Suite
    k: int
    checks: List[VerificationCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


# ============================================================================
# RUN CONFIGURATION
# ============================================================================

class RunConfig(BaseModel):
    """Validated command line request"""

    subcommand: Subcommand
    n: Optional[int] = Field(None, ge=1)
    k: int = Field(..., ge=1)
    beta: Optional[float] = Field(None, ge=0.0, lt=1.0)
    beta_list: Optional[List[float]] = None
    rel_tol: float = Field(default_factory=lambda: settings.rel_tol, gt=0.0)
    cutoff_R: float = Field(default_factory=lambda: settings.cutoff_radius, gt=0.0)
    output: OutputFormat = OutputFormat.JSON
    seed: int = 0
    suite: Suite = Suite.ALL
    symbolic: bool = False
    jet_order: Optional[int] = Field(None, ge=1)
    kind: Literal["bump", "constant", "extremal"] = "bump"
    center: float = 1.0
    width: float = 0.8
    i: int = Field(0, ge=0)
    tau: Optional[List[float]] = None

    @field_validator("beta_list")
    @classmethod
    def validate_beta_list(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is None:
            return v
        if not v:
            raise ValueError("beta list is empty")
        if any(not 0.0 <= b < 1.0 for b in v):
            raise ValueError("beta values must lie in [0, 1)")
        if any(b2 <= b1 for b1, b2 in zip(v, v[1:])):
            raise ValueError("beta list must be strictly increasing")
        return v

    @model_validator(mode="after")
    def check_requiredness(self) -> "RunConfig":
        needs_n = {
            Subcommand.CONSTANTS,
            Subcommand.QUOTIENT,
            Subcommand.EUCLID_QUOTIENT,
            Subcommand.CONFORMAL,
            Subcommand.THM33_PROBE,
        }
        if self.subcommand in needs_n and self.n is None:
            raise ValueError(f"--n is required for {self.subcommand.value}")
        if self.subcommand in {Subcommand.QUOTIENT, Subcommand.EUCLID_QUOTIENT}:
            if self.beta is None and self.beta_list is None:
                raise ValueError("--beta or --beta-list is required")
            if self.beta is not None and self.beta_list is not None:
                raise ValueError("--beta and --beta-list are mutually exclusive")
        if self.subcommand == Subcommand.COEFFS and not self.symbolic and self.n is None:
            raise ValueError("coeffs needs --symbolic or --n")
        if self.subcommand == Subcommand.THM33_PROBE:
            if self.i > self.k - 1:
                raise ValueError("--i must lie in 0..k-1")
            if self.tau is not None and len(self.tau) != self.i + 1:
                raise ValueError("--tau needs exactly i+1 values")
        return self

    @property
    def betas(self) -> List[float]:
        if self.beta_list is not None:
            return list(self.beta_list)
        return [self.beta] if self.beta is not None else []


# ============================================================================
# ERROR RESPONSE SCHEMAS
# ============================================================================

class ErrorDetail(BaseModel):
    """Detailed error information"""

    field: Optional[str] = Field(None, description="Parameter that caused the error")
    message: str = Field(..., description="Error message")


class ErrorResponse(BaseModel):
    """Structured error document emitted by the CLI"""

    error: str = Field(..., description="Machine-readable error code")
    message: str = Field(..., description="Human-readable error message")
    details: Optional[List[ErrorDetail]] = Field(None, description="Detailed error information")

    class Config:
        json_schema_extra = {
            "example": {
                "error": "DOMAIN_ERROR",
                "message": "Need n > 2k, got n=4, k=2",
                "details": [{"field": "n", "message": "4"}],
            }
        }
