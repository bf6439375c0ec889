"""
Hyperbolic Sobolev Lab - Sharp Constants Tests
Sphere areas, Lambda_k and the consistency law b_k Lambda_k omega_n^(2k/n) = 1
"""

import math
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from app.constants import (
    best_constant,
    best_constant_k1,
    consistency_residual,
    constants_record,
    gamma_half_integer,
    gamma_identity_residual,
    sharp_value,
    sphere_area,
    sphere_area_exact_check,
)
from app.errors import DimensionTooSmall


def print_section(title: str) -> None:
    print("\n" + "=" * 70)
    print(f"  {title}")
    print("=" * 70)


def test_low_dimensional_sphere_areas():
    print("🧪 Testing sphere areas...")
    assert sphere_area(1) == pytest.approx(2 * math.pi, rel=1e-14)
    assert sphere_area(2) == pytest.approx(4 * math.pi, rel=1e-14)
    assert sphere_area(3) == pytest.approx(2 * math.pi ** 2, rel=1e-14)
    assert sphere_area(4) == pytest.approx(8 * math.pi ** 2 / 3, rel=1e-14)
    print("   ✓ omega_1..omega_4 match closed forms")


@pytest.mark.parametrize("n", range(1, 31))
def test_sphere_area_exact_recursion(n):
    assert sphere_area_exact_check(n) <= 1e-13


@pytest.mark.parametrize("n", range(3, 41))
def test_sphere_area_two_step_recurrence(n):
    """omega_n = 2 pi omega_(n-2) / (n-1)"""
    assert sphere_area(n) == pytest.approx(2 * math.pi * sphere_area(n - 2) / (n - 1), rel=1e-13)


def test_gamma_half_integer():
    assert gamma_half_integer(1) == (Fraction(1), 1)
    assert gamma_half_integer(3) == (Fraction(1, 2), 1)
    assert gamma_half_integer(5) == (Fraction(3, 4), 1)
    assert gamma_half_integer(4) == (Fraction(1), 0)
    assert gamma_half_integer(8) == (Fraction(6), 0)
    with pytest.raises(ValueError):
        gamma_half_integer(0)


def test_consistency_law():
    print("🧪 Testing b_k Lambda_k omega_n^(2k/n) = 1...")
    worst = 0.0
    for k in range(1, 6):
        for n in range(2 * k + 1, 21):
            residual = abs(consistency_residual(n, k))
            assert residual <= 1e-12, (n, k, residual)
            worst = max(worst, residual)
    print(f"   ✓ Worst residual over 1 <= k <= 5, 2k < n <= 20: {worst:.2e}")


@pytest.mark.parametrize("n", range(3, 31))
def test_gamma_identity(n):
    assert abs(gamma_identity_residual(n)) <= 1e-12


@pytest.mark.parametrize("n", range(3, 21))
def test_first_order_constant(n):
    assert best_constant_k1(n) == pytest.approx(best_constant(n, 1), rel=1e-14)


def test_sharp_value_is_reciprocal():
    for n, k in [(5, 1), (6, 2), (9, 3), (10, 4)]:
        assert sharp_value(n, k) * best_constant(n, k) == pytest.approx(1.0, rel=1e-14)


def test_dimension_too_small():
    for n, k in [(2, 1), (4, 2), (6, 3)]:
        with pytest.raises(DimensionTooSmall):
            best_constant(n, k)
        with pytest.raises(DimensionTooSmall):
            constants_record(n, k)


def test_constants_record():
    print("🧪 Testing ConstantsRecord...")
    record = constants_record(4, 1)
    assert record.q == "4"
    assert record.b_k == "2"
    assert record.omega_n == pytest.approx(26.3189450696716, rel=1e-13)
    assert record.lambda_k == pytest.approx(best_constant(4, 1), rel=1e-14)

    record = constants_record(7, 2)
    assert record.q == "14/3"
    assert record.b_k == str(Fraction(7 * 3 * 45, 16))
    print(f"   ✓ (7, 2): q={record.q}, b_k={record.b_k}")


def main():
    """Run all constants tests"""
    print_section("SHARP CONSTANTS TESTS")
    test_low_dimensional_sphere_areas()
    for n in range(1, 31):
        test_sphere_area_exact_recursion(n)
    test_gamma_half_integer()
    test_consistency_law()
    for n in range(3, 31):
        test_gamma_identity(n)
    for n in range(3, 21):
        test_first_order_constant(n)
    test_sharp_value_is_reciprocal()
    test_dimension_too_small()
    test_constants_record()
    print_section("ALL CONSTANTS TESTS PASSED")
    return True


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
