"""
Hyperbolic Sobolev Lab - Exact Algebra Tests
Polynomials in n, multivariate polynomials, rational functions and the exact
linear solver
"""

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from app.errors import DegreeExceeded, SingularSystem
from app.exact_algebra import (
    DimPoly,
    MultiPoly,
    RatFun,
    SYMBOLS,
    interpolate,
    poly_gcd,
    solve_linear_exact,
    unsatisfied_rows,
)


def print_section(title: str) -> None:
    print("\n" + "=" * 70)
    print(f"  {title}")
    print("=" * 70)


def random_dimpoly(rng: np.random.Generator, degree: int) -> DimPoly:
    return DimPoly(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(degree + 1))


def random_multipoly(rng: np.random.Generator, terms: int) -> MultiPoly:
    poly = MultiPoly()
    for _ in range(terms):
        exps = tuple(int(e) for e in rng.integers(0, 3, size=len(SYMBOLS)))
        poly = poly + MultiPoly({exps: Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))})
    return poly


def random_point(rng: np.random.Generator) -> dict:
    return {name: Fraction(int(rng.integers(-7, 8)), int(rng.integers(1, 4))) for name in SYMBOLS}


# ============================================================================
# DimPoly
# ============================================================================

def test_dimpoly_ring_laws():
    """Commutativity, associativity and distributivity on random polynomials"""
    print("🧪 Testing DimPoly ring laws...")
    rng = np.random.default_rng(7)
    for _ in range(25):
        p, q, r = (random_dimpoly(rng, int(rng.integers(0, 5))) for _ in range(3))
        assert p + q == q + p
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p - p == DimPoly()
    print("   ✓ 25 random triples satisfy the ring laws")


def test_dimpoly_evaluation_is_a_homomorphism():
    rng = np.random.default_rng(19)
    for _ in range(25):
        p, q = (random_dimpoly(rng, int(rng.integers(0, 6))) for _ in range(2))
        x = Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, 5)))
        assert (p * q)(x) == p(x) * q(x)
        assert (p + q)(x) == p(x) + q(x)


def test_dimpoly_canonical_zero():
    print("🧪 Testing canonical zero...")
    zero = DimPoly([0, 0, 0])
    assert zero.is_zero()
    assert zero.degree == DimPoly.ZERO_DEGREE
    assert zero.serialize() == "[]"
    assert DimPoly([1, 2, 0]) == DimPoly([1, 2])
    print("   ✓ Trailing zeros trimmed")


def test_dimpoly_serialization():
    print("🧪 Testing serialization...")
    p = DimPoly([0, Fraction(-1, 2), Fraction(-1, 2)])
    assert p.serialize() == "[0, -1/2, -1/2]"
    assert DimPoly.parse(p.serialize()) == p
    assert DimPoly.parse("[]") == DimPoly()
    with pytest.raises(ValueError):
        DimPoly.parse("0, 1")
    print(f"   ✓ {p.serialize()} -> {p.pretty()}")


def test_dimpoly_division_and_gcd():
    print("🧪 Testing division and gcd...")
    n = DimPoly.n()
    a = (n - 2) * (n + 3) * (n - 5)
    b = (n - 2) * (n + 7)
    quot, rem = divmod(a, b)
    assert quot * b + rem == a
    assert rem.degree < b.degree
    assert poly_gcd(a, b) == n - 2
    with pytest.raises(ZeroDivisionError):
        divmod(a, DimPoly())
    print("   ✓ gcd((n-2)(n+3)(n-5), (n-2)(n+7)) = n - 2")


def test_dimpoly_evaluation_is_exact():
    p = DimPoly([Fraction(1, 3), Fraction(-2, 7), 5])
    assert p(Fraction(3, 2)) == Fraction(1, 3) - Fraction(3, 7) + Fraction(45, 4)
    assert p.derivative() == DimPoly([Fraction(-2, 7), 10])


# ============================================================================
# MultiPoly
# ============================================================================

def test_multipoly_collect_and_substitute():
    print("🧪 Testing MultiPoly collect/substitute...")
    c, beta, n = MultiPoly.var("c"), MultiPoly.var("beta"), MultiPoly.var("n")
    p = (c - beta) ** 2 * n + c
    groups = p.collect(("c",))
    assert set(groups) == {(0,), (1,), (2,)}
    assert groups[(2,)] == n
    assert groups[(1,)] == 1 - 2 * beta * n
    assert p.substitute("c", 0) == beta * beta * n
    assert p.evaluate({"c": 2, "beta": 1, "n": 3}) == 5
    with pytest.raises(ValueError):
        p.evaluate({"c": 1})
    print("   ✓ (c - beta)^2 n + c collected by c")


def test_multipoly_derivative_product_rule():
    rng = np.random.default_rng(11)
    for _ in range(10):
        a = MultiPoly({(int(rng.integers(0, 3)), 0, int(rng.integers(0, 4)), 0, 0): int(rng.integers(1, 9))})
        b = MultiPoly.var("c", int(rng.integers(0, 4))) + MultiPoly.var("beta")
        assert (a * b).derivative("c") == a.derivative("c") * b + a * b.derivative("c")


def test_multipoly_ring_laws():
    print("🧪 Testing MultiPoly ring laws...")
    rng = np.random.default_rng(23)
    for _ in range(20):
        p, q, r = (random_multipoly(rng, int(rng.integers(0, 5))) for _ in range(3))
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p - p == MultiPoly()
        assert p * 1 == p
    print("   ✓ 20 random triples satisfy the ring laws")


def test_multipoly_evaluation_is_a_homomorphism():
    rng = np.random.default_rng(29)
    for _ in range(20):
        p, q = (random_multipoly(rng, int(rng.integers(1, 5))) for _ in range(2))
        point = random_point(rng)
        assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)
        assert (p - q).evaluate(point) == p.evaluate(point) - q.evaluate(point)


def test_multipoly_to_dimpoly():
    n = MultiPoly.var("n")
    assert (n * n - 2 * n).to_dimpoly() == DimPoly([0, -2, 1])
    with pytest.raises(ValueError):
        (n + MultiPoly.var("beta")).to_dimpoly()


def test_unknown_symbol_rejected():
    with pytest.raises(ValueError):
        MultiPoly.var("x")


# ============================================================================
# RatFun
# ============================================================================

def test_ratfun_reduction():
    print("🧪 Testing RatFun reduction...")
    n = DimPoly.n()
    f = RatFun((n - 1) * (n + 2), (n + 2) * (n - 3).scale(4))
    assert f.den == n - 3
    assert f.num == (n - 1).scale(Fraction(1, 4))
    assert RatFun(n * n - 1, n - 1).is_polynomial()
    assert RatFun(n * n - 1, n - 1).to_dimpoly() == n + 1
    assert f / f == RatFun(1)
    with pytest.raises(ZeroDivisionError):
        RatFun(1, DimPoly())
    print(f"   ✓ Reduced to {f.pretty()}")


# ============================================================================
# Linear algebra and interpolation
# ============================================================================

def test_solve_square_system_over_q_of_n():
    print("🧪 Testing exact solver...")
    n = DimPoly.n()
    A = [[n, 1], [1, n]]
    rhs = [n + 1, n + 1]
    x = solve_linear_exact(A, rhs)
    assert x == [RatFun(1), RatFun(1)]
    assert unsatisfied_rows(A, x, rhs) == []
    print("   ✓ [[n, 1], [1, n]] x = [n+1, n+1] gives x = (1, 1)")


def test_overdetermined_dependent_rows():
    """A scaled copy of a row is consistent; a perturbed copy is reported"""
    A = [[1, 2], [2, 4], [1, 3]]
    x = solve_linear_exact(A, [3, 6, 4])
    assert x == [RatFun(1), RatFun(1)]
    assert unsatisfied_rows(A, x, [3, 6, 4]) == []

    bad = unsatisfied_rows(A, x, [3, 7, 4])
    assert [row for row, _ in bad] == [1]

    column = solve_linear_exact([[1], [2]], [5, 10])
    assert column == [RatFun(5)]


def test_singular_square_system():
    with pytest.raises(SingularSystem):
        solve_linear_exact([[1, 2], [2, 4]], [3, 6])


def test_underdetermined_rejected():
    with pytest.raises(ValueError):
        solve_linear_exact([[1, 2]], [3])


def test_interpolation():
    print("🧪 Testing interpolation...")
    target = DimPoly([3, Fraction(-1, 2), 0, Fraction(7, 3)])
    points = [(x, target(x)) for x in range(5, 11)]
    assert interpolate(points, 3) == target
    assert interpolate(points, 5) == target
    with pytest.raises(DegreeExceeded):
        interpolate(points, 2)
    with pytest.raises(ValueError):
        interpolate([(1, 1), (1, 2)], 1)
    print("   ✓ Cubic recovered; degree 2 rejected")


def test_interpolation_recovers_random_polynomials():
    rng = np.random.default_rng(31)
    for degree in range(9):
        for _ in range(3):
            p = random_dimpoly(rng, degree)
            xs = [int(x) for x in rng.choice(np.arange(-20, 21), size=degree + 1, replace=False)]
            assert interpolate([(x, p(x)) for x in xs], degree) == p


def main():
    """Run all exact algebra tests"""
    print_section("EXACT ALGEBRA TESTS")
    tests = [value for name, value in globals().items() if name.startswith("test_") and callable(value)]
    failed = 0
    for test in tests:
        try:
            test()
        except AssertionError as e:
            failed += 1
            print(f"   ✗ {test.__name__} failed: {e}")
    print_section(f"{len(tests) - failed}/{len(tests)} passed")
    return failed == 0


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
