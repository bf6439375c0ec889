"""
Hyperbolic Sobolev Lab - Sharp Constants
Sphere areas, the best Sobolev constants Lambda_k and the consistency law
b_k * Lambda_k * omega_n^(2k/n) = 1. Powers of omega_n are taken in log space.
"""

import logging
import math
from fractions import Fraction
from typing import Tuple

from scipy.special import gammaln

from app.errors import DimensionTooSmall
from app.operator_core import b_constant
from app.exact_algebra import poly_eval
from app.schemas import ConstantsRecord

logger = logging.getLogger(__name__)

LOG_PI = math.log(math.pi)
LOG_2 = math.log(2.0)


def _require_dimension(n: int, k: int) -> None:
    if k < 1 or n <= 2 * k:
        raise DimensionTooSmall(
            f"Need n > 2k with k >= 1, got n={n}, k={k}", {"n": n, "k": k}
        )


def log_sphere_area(n: int) -> float:
    """log omega_n, omega_n = 2 pi^((n+1)/2) / Gamma((n+1)/2)"""
    if n < 1:
        raise ValueError(f"Sphere dimension must be >= 1, got {n}")
    half = (n + 1) / 2.0
    return LOG_2 + half * LOG_PI - float(gammaln(half))


def sphere_area(n: int) -> float:
    """Surface area of the unit n-sphere in R^(n+1)"""
    return math.exp(log_sphere_area(n))


def gamma_half_integer(m: int) -> Tuple[Fraction, int]:
    """
    Exact Gamma(m/2) as (rational, power of sqrt(pi)).

    Gamma(m/2) = rational * sqrt(pi)^power with power 0 for even m and 1 for
    odd m, via Gamma(x + 1) = x Gamma(x).
    """
    if m < 1:
        raise ValueError(f"Need m >= 1, got {m}")
    if m % 2 == 0:
        return Fraction(math.factorial(m // 2 - 1)), 0
    value = Fraction(1)
    x = Fraction(1, 2)
    while x < Fraction(m, 2):
        value *= x
        x += 1
    return value, 1


def sphere_area_exact_check(n: int) -> float:
    """Relative difference between sphere_area(n) and the exact sqrt(pi) recursion"""
    rational, power = gamma_half_integer(n + 1)
    gamma = float(rational) * math.sqrt(math.pi) ** power
    exact = 2.0 * math.pi ** ((n + 1) / 2.0) / gamma
    return abs(sphere_area(n) - exact) / exact


def log_best_constant(n: int, k: int) -> float:
    """log Lambda_k"""
    _require_dimension(n, k)
    denominator = n * (n - 2 * k)
    for j in range(1, k):
        denominator *= n * n - (2 * j) ** 2
    return 2 * k * LOG_2 - (2.0 * k / n) * log_sphere_area(n) - math.log(denominator)


def best_constant(n: int, k: int) -> float:
    """
    Lambda_k = 2^(2k) omega_n^(-2k/n) / (n (n-2k) prod_{j<k} (n^2 - (2j)^2))

    Raises:
        DimensionTooSmall: If n <= 2k
    """
    return math.exp(log_best_constant(n, k))


def best_constant_k1(n: int) -> float:
    """Classical first-order constant 4 / (n (n-2) omega_n^(2/n))"""
    _require_dimension(n, 1)
    return 4.0 / (n * (n - 2) * math.exp((2.0 / n) * log_sphere_area(n)))


def sharp_value(n: int, k: int) -> float:
    """1 / Lambda_k, the infimum of the Sobolev quotient"""
    return math.exp(-log_best_constant(n, k))


def consistency_residual(n: int, k: int) -> float:
    """b_k(n) * Lambda_k * omega_n^(2k/n) - 1"""
    _require_dimension(n, k)
    b = poly_eval(b_constant(k), n)
    log_total = math.log(b) + log_best_constant(n, k) + (2.0 * k / n) * log_sphere_area(n)
    return math.expm1(log_total)


def gamma_identity_residual(n: int) -> float:
    """2^(n-1) omega_(n-1) Gamma(n/2)^2 / Gamma(n) / omega_n - 1"""
    if n < 2:
        raise ValueError(f"Need n >= 2, got {n}")
    log_lhs = (
        (n - 1) * LOG_2
        + log_sphere_area(n - 1)
        + 2.0 * float(gammaln(n / 2.0))
        - float(gammaln(float(n)))
    )
    return math.expm1(log_lhs - log_sphere_area(n))


def constants_record(n: int, k: int) -> ConstantsRecord:
    """Bundle q, omega_n, Lambda_k and b_k for one (n, k)"""
    _require_dimension(n, k)
    record = ConstantsRecord(
        n=n,
        k=k,
        q=str(Fraction(2 * n, n - 2 * k)),
        omega_n=sphere_area(n),
        lambda_k=best_constant(n, k),
        b_k=str(poly_eval(b_constant(k), n)),
    )
    logger.debug("Constants for n=%d k=%d: Lambda=%.6e", n, k, record.lambda_k)
    return record
