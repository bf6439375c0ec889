"""
Hyperbolic Sobolev Lab - Standard Operator Tests
Coefficient tables, the b_k identity and the factorisation recursion
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from app.errors import IndexOutOfRange
from app.exact_algebra import DimPoly
from app.operator_core import (
    OperatorPoly,
    b_constant,
    check_recursion,
    coefficient,
    first_operator,
    instantiate,
    operator_product,
    published_table,
    shifted,
    standard_operator,
    to_json,
    verify_a0_identity,
)

n = DimPoly.n()


def print_section(title: str) -> None:
    print("\n" + "=" * 70)
    print(f"  {title}")
    print("=" * 70)


def test_published_coefficients():
    """Every published a_km matches the expanded product exactly"""
    print("🧪 Testing published coefficient table...")
    table = published_table()
    assert len(table) == 12
    for name, expected in table.items():
        k, m = int(name[3]), int(name[4])
        assert coefficient(standard_operator(k), m) == expected, name
        print(f"   ✓ {name} = {expected.pretty()}")


def test_a32_serialization():
    a32 = coefficient(standard_operator(3), 2)
    assert a32 == (3 * n * n - 6 * n - 32).scale(Fraction(-1, 4))
    assert a32.serialize() == "[8, 3/2, -3/4]"


def test_b_constants():
    print("🧪 Testing b_k...")
    assert b_constant(1) == (n * (n - 2)).scale(Fraction(1, 4))
    assert b_constant(2) == (n * (n - 4) * (n * n - 4)).scale(Fraction(1, 16))
    assert b_constant(3) == (n * (n - 6) * (n * n - 4) * (n * n - 16)).scale(Fraction(1, 64))
    for k in range(1, 6):
        assert b_constant(k).degree == 2 * k
        assert b_constant(k)(2 * k) == 0
    print("   ✓ b_1..b_5 vanish at n = 2k with degree 2k")


@pytest.mark.parametrize("k", range(1, 9))
def test_a0_identity(k):
    assert verify_a0_identity(k)


@pytest.mark.parametrize("k", range(1, 7))
def test_recursion(k):
    assert check_recursion(k)


def test_operator_shape():
    for k in range(1, 7):
        op = standard_operator(k)
        assert op.order == k
        assert op.coeffs[-1] == 1
        assert all(coefficient(op, m).degree <= 2 * (k - m) for m in range(k + 1))


def test_first_operator():
    p1 = first_operator()
    assert p1.coeffs[0] == (n * (n - 2)).scale(Fraction(-1, 4))
    assert standard_operator(1) == p1


def test_product_of_shifted_factors():
    """P_3 = P_1 (P_1 + 2)(P_1 + 6)"""
    p1 = first_operator()
    product = operator_product(operator_product(p1, shifted(p1, 2)), shifted(p1, 6))
    assert product == standard_operator(3)
    assert p1 * shifted(p1, 2) == standard_operator(2)
    assert p1 * shifted(p1, 2) * shifted(p1, 6) * shifted(p1, 12) == standard_operator(4)


def test_coefficient_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        coefficient(standard_operator(2), 3)
    with pytest.raises(IndexOutOfRange):
        coefficient(standard_operator(2), -1)
    with pytest.raises(ValueError):
        standard_operator(0)


def test_operator_poly_validation():
    with pytest.raises(ValueError):
        OperatorPoly((DimPoly.constant(1),), 1)
    with pytest.raises(ValueError):
        OperatorPoly((DimPoly.constant(1), DimPoly.constant(2)), 1)


def test_instantiate_at_dimension():
    print("🧪 Testing instantiation at n = 5...")
    values = instantiate(standard_operator(2), 5)
    # P_1 = Delta - 15/4 and P_1 + 2 = Delta - 7/4 at n = 5
    assert values == [Fraction(105, 16), Fraction(-11, 2), Fraction(1)]
    print(f"   ✓ {values}")


def test_to_json_document():
    doc = to_json(standard_operator(3))
    assert doc["k"] == 3
    names = [c["name"] for c in doc["coefficients"]]
    assert names == ["a_{30}", "a_{31}", "a_{32}", "a_{33}"]
    assert doc["coefficients"][2]["poly"] == "[8, 3/2, -3/4]"
    assert doc["coefficients"][3]["poly"] == "[1]"


def main():
    """Run all operator tests"""
    print_section("STANDARD OPERATOR TESTS")
    test_published_coefficients()
    test_a32_serialization()
    test_b_constants()
    for k in range(1, 9):
        test_a0_identity(k)
    for k in range(1, 7):
        test_recursion(k)
    test_operator_shape()
    test_first_operator()
    test_product_of_shifted_factors()
    test_coefficient_index_out_of_range()
    test_operator_poly_validation()
    test_instantiate_at_dimension()
    test_to_json_document()
    print_section("ALL OPERATOR TESTS PASSED")
    return True


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
