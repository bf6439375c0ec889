"""
Hyperbolic Sobolev Lab - Standard Operators
Builds P_k = P_1(P_1 + 2)(P_1 + 6)...(P_1 + k(k-1)) as an exact polynomial in
an abstract Laplacian symbol with coefficients in Q[n], with
P_1 = Delta - n(n-2)/4.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Tuple

from app.errors import IndexOutOfRange
from app.exact_algebra import DimPoly, Scalar, as_rational, poly_eval

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OperatorPoly:
    """Polynomial sum_m coeffs[m] * Delta^m; monic of the given order"""

    coeffs: Tuple[DimPoly, ...]
    order: int

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError(f"Order {self.order} operator needs {self.order + 1} coefficients")
        if self.coeffs[-1] != 1:
            raise ValueError("Operator polynomials are monic")

    def __mul__(self, other: "OperatorPoly") -> "OperatorPoly":
        return operator_product(self, other)

    def pretty(self) -> str:
        parts = []
        for m in range(self.order, -1, -1):
            c = self.coeffs[m]
            if c.is_zero():
                continue
            power = "" if m == 0 else ("Delta" if m == 1 else f"Delta^{m}")
            if c == 1 and power:
                parts.append(power)
            elif power:
                parts.append(f"({c.pretty()})*{power}")
            else:
                parts.append(f"({c.pretty()})")
        return " + ".join(parts)


def operator_product(first: OperatorPoly, second: OperatorPoly) -> OperatorPoly:
    """Product of two polynomials in the Laplacian symbol"""
    out = [DimPoly()] * (first.order + second.order + 1)
    for i, a in enumerate(first.coeffs):
        for j, b in enumerate(second.coeffs):
            out[i + j] = out[i + j] + a * b
    return OperatorPoly(tuple(out), first.order + second.order)


def shifted(op: OperatorPoly, shift: Scalar) -> OperatorPoly:
    """op + shift (adds a constant to the order-zero coefficient)"""
    coeffs = list(op.coeffs)
    coeffs[0] = coeffs[0] + as_rational(shift)
    return OperatorPoly(tuple(coeffs), op.order)


def first_operator() -> OperatorPoly:
    """P_1 = Delta - n(n-2)/4"""
    return OperatorPoly((DimPoly([0, Fraction(1, 2), Fraction(-1, 4)]), DimPoly.constant(1)), 1)


def factor_shifts(k: int) -> List[int]:
    """Shifts j(j-1), j = 1..k, of the linear factors of P_k"""
    return [j * (j - 1) for j in range(1, k + 1)]


@lru_cache(maxsize=None)
def standard_operator(k: int) -> OperatorPoly:
    """
    The k-th standard operator on hyperbolic space.

    Args:
        k: Order, at least 1

    Returns:
        Expanded OperatorPoly with DimPoly coefficients
    """
    if k < 1:
        raise ValueError(f"Operator order must be >= 1, got {k}")
    if k == 1:
        return first_operator()
    op = standard_operator(k - 1) * shifted(first_operator(), k * (k - 1))
    logger.debug("Built P_%d with degree-%d constant term", k, op.coeffs[0].degree)
    return op


def coefficient(op: OperatorPoly, m: int) -> DimPoly:
    """a_{km}(n), the coefficient of Delta^m"""
    if not 0 <= m <= op.order:
        raise IndexOutOfRange(
            f"Coefficient index {m} outside 0..{op.order}", {"m": m, "order": op.order}
        )
    return op.coeffs[m]


@lru_cache(maxsize=None)
def b_constant(k: int) -> DimPoly:
    """b_k = n(n-2k) prod_{j=1}^{k-1} (n^2 - (2j)^2) / 2^{2k}"""
    if k < 1:
        raise ValueError(f"Order must be >= 1, got {k}")
    n = DimPoly.n()
    result = n * (n - 2 * k)
    for j in range(1, k):
        result = result * (n * n - (2 * j) ** 2)
    return result.scale(Fraction(1, 4 ** k))


def verify_a0_identity(k: int) -> bool:
    """(-1)^k a_{k0} == b_k as polynomials"""
    a0 = coefficient(standard_operator(k), 0)
    sign = 1 if k % 2 == 0 else -1
    return (a0.scale(sign) - b_constant(k)).is_zero()


def check_recursion(k: int) -> bool:
    """
    Check the factorisation bookkeeping of P_k.

    P_k must equal P_{k-1}(P_1 + k(k-1)), and a_{k,k-1} must equal
    k*a_{10} plus the sum of the shifts j(j-1).
    """
    op = standard_operator(k)
    if k > 1 and op != standard_operator(k - 1) * shifted(first_operator(), k * (k - 1)):
        return False
    expected = first_operator().coeffs[0].scale(k) + sum(factor_shifts(k))
    return coefficient(op, k - 1) == expected


def instantiate(op: OperatorPoly, n_value: Scalar) -> List[Fraction]:
    """Coefficients evaluated at a concrete dimension"""
    return [poly_eval(c, n_value) for c in op.coeffs]


def coefficient_name(k: int, m: int) -> str:
    return f"a_{{{k}{m}}}"


def to_json(op: OperatorPoly) -> Dict[str, Any]:
    """{"k": ..., "coefficients": [{"m": ..., "poly": ...}]} in exact serialization"""
    return {
        "k": op.order,
        "coefficients": [
            {
                "m": m,
                "name": coefficient_name(op.order, m),
                "poly": c.serialize(),
                "pretty": c.pretty(),
            }
            for m, c in enumerate(op.coeffs)
        ],
    }


def published_table() -> Dict[str, DimPoly]:
    """Closed forms of the low-order coefficients as printed in the literature"""
    n = DimPoly.n()
    q = Fraction
    return {
        "a_{10}": (n * (n - 2)).scale(q(-1, 4)),
        "a_{21}": (n * n - 2 * n - 4).scale(q(-1, 2)),
        "a_{20}": (n * (n - 4) * (n * n - 4)).scale(q(1, 16)),
        "a_{32}": (3 * n * n - 6 * n - 32).scale(q(-1, 4)),
        "a_{31}": (3 * n ** 4 - 12 * n ** 3 - 52 * n * n + 128 * n + 192).scale(q(1, 16)),
        "a_{30}": -b_constant(3),
        "a_{43}": -(n * n - 2 * n - 20),
        "a_{42}": DimPoly([108, 30, q(-27, 2), q(-3, 2), q(3, 8)]),
        "a_{41}": -DimPoly([-144, -108, 39, q(29, 2), -3, q(-3, 8), q(1, 16)]),
        "a_{40}": b_constant(4),
        "a_{54}": (5 * n * n - 10 * n - 160).scale(q(-1, 4)),
        "a_{50}": -b_constant(5),
    }
