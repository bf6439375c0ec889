"""
Hyperbolic Sobolev Lab - Radial Symbolic Calculus
Exact radial expressions on hyperbolic space (variable c = cosh r, base c - beta)
and on flat space (variable w = rho^2, base tau^2 + w), closed under the
respective radial Laplacians, plus the Euler-Lagrange coefficient solver and
zero-residual certificates for the extremal family.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from app.errors import NonzeroResidual, SingularSystem, SurplusNonzero
from app.exact_algebra import (
    DimPoly,
    MultiPoly,
    RatFun,
    Scalar,
    as_rational,
    interpolate,
    monomial_name,
    solve_linear_exact,
    unsatisfied_rows,
)
from app.operator_core import b_constant, standard_operator

logger = logging.getLogger(__name__)

PolyLike = Union[MultiPoly, DimPoly, int, Fraction]


def _poly(value: PolyLike) -> MultiPoly:
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, DimPoly):
        return MultiPoly.from_dimpoly(value)
    return MultiPoly.constant(as_rational(value))


@lru_cache(maxsize=None)
def _base_power(variable: str, offset: str, sign: int, power: int) -> MultiPoly:
    """(variable + sign*offset)^power"""
    return (MultiPoly.var(variable) + MultiPoly.var(offset) * sign) ** power


class _RadialExpr:
    """
    Sum over shifts s of terms[s] * base^(anchor - s).

    ``anchor`` is a polynomial in n (k - n/2 for the extremal family) and each
    term is a polynomial in the ring variable with coefficients in n and the
    offset symbol. Normalization factors with fractional powers are carried
    as text metadata only.
    """

    VARIABLE = ""
    OFFSET = ""
    OFFSET_SIGN = 1
    BASE_TEXT = ""

    __slots__ = ("anchor", "_terms", "normalization")

    def __init__(
        self,
        anchor: DimPoly,
        terms: Optional[Mapping[int, PolyLike]] = None,
        normalization: str = "",
    ):
        clean: Dict[int, MultiPoly] = {}
        for shift, p in (terms or {}).items():
            if shift < 0:
                raise ValueError(f"Shifts must be nonnegative, got {shift}")
            p = _poly(p)
            if not p.is_zero():
                clean[shift] = p
        self.anchor = anchor
        self._terms = dict(sorted(clean.items()))
        self.normalization = normalization

    # ------------------------------------------------------------------ access

    def terms(self) -> Iterator[Tuple[int, MultiPoly]]:
        return iter(self._terms.items())

    def term(self, shift: int) -> MultiPoly:
        return self._terms.get(shift, MultiPoly())

    @property
    def shifts(self) -> Tuple[int, ...]:
        return tuple(self._terms)

    @property
    def max_shift(self) -> int:
        return max(self._terms, default=0)

    def exponent(self, shift: int) -> MultiPoly:
        """Exponent of the base at the given shift, anchor - shift"""
        return MultiPoly.from_dimpoly(self.anchor - shift)

    def _like(self, terms: Mapping[int, PolyLike]) -> "_RadialExpr":
        return type(self)(self.anchor, terms, self.normalization)

    # -------------------------------------------------------------- arithmetic

    def _check_anchor(self, other: "_RadialExpr") -> None:
        if type(other) is not type(self) or other.anchor != self.anchor:
            raise ValueError("Radial expressions must share ring and anchor")

    def __add__(self, other: "_RadialExpr") -> "_RadialExpr":
        self._check_anchor(other)
        out: Dict[int, MultiPoly] = dict(self._terms)
        for shift, p in other._terms.items():
            out[shift] = out.get(shift, MultiPoly()) + p
        return self._like(out)

    def __neg__(self) -> "_RadialExpr":
        return self._like({s: -p for s, p in self._terms.items()})

    def __sub__(self, other: "_RadialExpr") -> "_RadialExpr":
        return self + (-other)

    def scale(self, factor: PolyLike) -> "_RadialExpr":
        factor = _poly(factor)
        return self._like({s: p * factor for s, p in self._terms.items()})

    # ------------------------------------------------------------ canonical forms

    def base_power(self, power: int) -> MultiPoly:
        return _base_power(self.VARIABLE, self.OFFSET, self.OFFSET_SIGN, power)

    def cleared(self, total: Optional[int] = None) -> MultiPoly:
        """Multiply through by base^(total - anchor): sum_s p_s * base^(total - s)"""
        total = self.max_shift if total is None else total
        if total < self.max_shift:
            raise ValueError(f"Clearing order {total} below maximal shift {self.max_shift}")
        acc = MultiPoly()
        for shift, p in self._terms.items():
            acc = acc + p * self.base_power(total - shift)
        return acc

    def is_zero(self) -> bool:
        return self.cleared().is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, _RadialExpr):
            return NotImplemented
        return type(other) is type(self) and other.anchor == self.anchor and (self - other).is_zero()

    __hash__ = None

    def normalized(self) -> "_RadialExpr":
        """Single-term form at the maximal shift, or the empty expression"""
        cleared = self.cleared()
        if cleared.is_zero():
            return self._like({})
        return self._like({self.max_shift: cleared})

    def rebased(self) -> "_RadialExpr":
        """
        Rewrite so no term involves the ring variable.

        Substitutes variable = base - sign*offset and collects by powers of
        the base. Requires deg_variable(terms[s]) <= s, which holds for every
        image of the extremal family under the Laplacian.
        """
        back = MultiPoly.var(self.OFFSET) * (-self.OFFSET_SIGN)
        out: Dict[int, MultiPoly] = {}
        for shift, p in self._terms.items():
            for (power,), rest in p.collect((self.VARIABLE,)).items():
                for i in range(power + 1):
                    target = shift - i
                    if target < 0:
                        raise ValueError("Expression is not rebasable: variable degree exceeds shift")
                    piece = rest * comb(power, i) * back ** (power - i)
                    out[target] = out.get(target, MultiPoly()) + piece
        return self._like(out)

    # ---------------------------------------------------------------- display

    def pretty(self) -> str:
        if not self._terms:
            return "0"
        parts = [
            f"({p.pretty()})*({self.BASE_TEXT})^({(self.anchor - s).pretty()})"
            for s, p in self._terms.items()
        ]
        text = " + ".join(parts)
        if self.normalization:
            text = f"{self.normalization} * [{text}]"
        return text

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.pretty()})"


class HypRadialExpr(_RadialExpr):
    """sum_s p_s(c; n, beta) * (c - beta)^(anchor - s), with c = cosh r"""

    VARIABLE = "c"
    OFFSET = "beta"
    OFFSET_SIGN = -1
    BASE_TEXT = "c - beta"


class EuclidRadialExpr(_RadialExpr):
    """sum_s p_s(w, tau2; n) * (tau2 + w)^(anchor - s), with w = rho^2"""

    VARIABLE = "w"
    OFFSET = "tau2"
    OFFSET_SIGN = 1
    BASE_TEXT = "tau2 + w"


@dataclass(frozen=True)
class RadialDerivative:
    """Radial derivative as factor * expression, factor "sinh r" or "rho" """

    factor: str
    expression: _RadialExpr

    def pretty(self) -> str:
        return f"{self.factor} * [{self.expression.pretty()}]"


_N = MultiPoly.var("n")
_C = MultiPoly.var("c")
_W = MultiPoly.var("w")
_SINH2 = _C * _C - 1


# ============================================================================
# LAPLACIANS
# ============================================================================

def hyp_laplacian(e: HypRadialExpr) -> HypRadialExpr:
    """Delta_r f = -[(c^2 - 1) f_cc + n c f_c], applied termwise"""
    out: Dict[int, MultiPoly] = {}

    def put(shift: int, p: MultiPoly) -> None:
        out[shift] = out.get(shift, MultiPoly()) + p

    for s, p in e.terms():
        ex = e.exponent(s)
        p_c = p.derivative("c")
        p_cc = p_c.derivative("c")
        put(s, -(_SINH2 * p_cc + _N * _C * p_c))
        put(s + 1, -(2 * ex * _SINH2 * p_c + _N * ex * _C * p))
        put(s + 2, -(ex * (ex - 1) * _SINH2 * p))
    return HypRadialExpr(e.anchor, out, e.normalization)


def euclid_laplacian(e: EuclidRadialExpr) -> EuclidRadialExpr:
    """Delta g = -(4 w g_ww + 2 n g_w) for g a function of w = rho^2"""
    out: Dict[int, MultiPoly] = {}

    def put(shift: int, p: MultiPoly) -> None:
        out[shift] = out.get(shift, MultiPoly()) + p

    for s, p in e.terms():
        ex = e.exponent(s)
        p_w = p.derivative("w")
        p_ww = p_w.derivative("w")
        put(s, -(4 * _W * p_ww + 2 * _N * p_w))
        put(s + 1, -(8 * ex * _W * p_w + 2 * _N * ex * p))
        put(s + 2, -(4 * ex * (ex - 1) * _W * p))
    return EuclidRadialExpr(e.anchor, out, e.normalization)


def radial_derivative(e: _RadialExpr) -> RadialDerivative:
    """
    d/dr (hyperbolic) or d/drho (flat) of a radial expression.

    Hyperbolic: d/dr = sinh r * d/dc. Flat: d/drho = rho * 2 d/dw.
    """
    out: Dict[int, MultiPoly] = {}
    factor, scale = ("sinh r", 1) if isinstance(e, HypRadialExpr) else ("rho", 2)
    for s, p in e.terms():
        d = p.derivative(e.VARIABLE) * scale
        out[s] = out.get(s, MultiPoly()) + d
        out[s + 1] = out.get(s + 1, MultiPoly()) + e.exponent(s) * p * scale
    return RadialDerivative(factor, type(e)(e.anchor, out, e.normalization))


# ============================================================================
# EXTREMAL FAMILY
# ============================================================================

def extremal_anchor(k: int) -> DimPoly:
    """k - n/2"""
    return DimPoly([k, Fraction(-1, 2)])


def extremal_expr(k: int) -> HypRadialExpr:
    """(c - beta)^(k - n/2), normalized by (1 - beta^2)^((n - 2k)/4)"""
    if k < 1:
        raise ValueError(f"Order must be >= 1, got {k}")
    return HypRadialExpr(extremal_anchor(k), {0: 1}, f"(1 - beta^2)^((n - {2 * k})/4)")


def euclid_extremal_expr(k: int) -> EuclidRadialExpr:
    """(tau^2 + rho^2)^(k - n/2), normalized by (2 tau)^(n/2 - k)"""
    if k < 1:
        raise ValueError(f"Order must be >= 1, got {k}")
    return EuclidRadialExpr(extremal_anchor(k), {0: 1}, f"(2*tau)^(n/2 - {k})")


@lru_cache(maxsize=None)
def hyp_images(k: int) -> Tuple[HypRadialExpr, ...]:
    """psi_k, Delta_r psi_k, ..., Delta_r^k psi_k"""
    images = [extremal_expr(k)]
    for _ in range(k):
        images.append(hyp_laplacian(images[-1]))
    return tuple(images)


@lru_cache(maxsize=None)
def euclid_images(k: int) -> Tuple[EuclidRadialExpr, ...]:
    """G, Delta G, ..., Delta^k G for G = (tau^2 + rho^2)^(k - n/2)"""
    images = [euclid_extremal_expr(k)]
    for _ in range(k):
        images.append(euclid_laplacian(images[-1]))
    return tuple(images)


# ============================================================================
# EULER-LAGRANGE SOLVER
# ============================================================================

def _rhs_factor(k: int) -> MultiPoly:
    """(1 - beta^2)^k"""
    return (1 - MultiPoly.var("beta") ** 2) ** k


def _el_system(k: int, beta: Optional[Scalar] = None):
    """
    Linear system for a_{k0..k,k-1} and b_k.

    Each row equates one monomial of
    sum_m a_m Delta^m psi * (c - beta)^(n/2 + k) = b (1 - beta^2)^k.
    """
    total = 2 * k
    cleared = [img.cleared(total) for img in hyp_images(k)]
    rhs_poly = _rhs_factor(k)
    names: Tuple[str, ...] = ("beta", "c")
    if beta is not None:
        cleared = [cl.substitute("beta", beta) for cl in cleared]
        rhs_poly = rhs_poly.substitute("beta", beta)
        names = ("c",)

    groups = [cl.collect(names) for cl in cleared]
    rhs_groups = rhs_poly.collect(names)
    monomials = sorted(set(rhs_groups).union(*(g.keys() for g in groups)))

    A: List[List[DimPoly]] = []
    rhs: List[DimPoly] = []
    for mono in monomials:
        row = [groups[m].get(mono, MultiPoly()).to_dimpoly() for m in range(k)]
        row.append(-rhs_groups.get(mono, MultiPoly()).to_dimpoly())
        A.append(row)
        rhs.append(-groups[k].get(mono, MultiPoly()).to_dimpoly())

    labels = []
    for mono in monomials:
        exps = [0] * 5
        for name, e in zip(names, mono):
            exps[{"beta": 1, "c": 2}[name]] = e
        labels.append(monomial_name(tuple(exps)))
    return A, rhs, labels


def el_solve(k: int, beta: Optional[Scalar] = None) -> Tuple[List[RatFun], RatFun]:
    """
    Re-derive the coefficients of P_k from the Euler-Lagrange identity.

    Builds P(Delta_r) psi_k with unknown a_{k0..k,k-1}, clears
    (c - beta)^(n/2 + k), equates monomials against b (1 - beta^2)^k and
    solves exactly over Q(n). Every surplus equation is then checked.

    Args:
        k: Operator order
        beta: Optional rational value fixing beta before equating monomials

    Returns:
        (coefficients a_{k0}, ..., a_{k,k-1}, 1) and b_k, all in Q(n)

    Raises:
        SingularSystem, SurplusNonzero: Only on an implementation fault
    """
    if k < 1:
        raise ValueError(f"Order must be >= 1, got {k}")
    A, rhs, labels = _el_system(k, beta)
    logger.info("Euler-Lagrange system for k=%d: %d equations, %d unknowns", k, len(A), k + 1)

    solution = solve_linear_exact(A, rhs)
    bad = unsatisfied_rows(A, solution, rhs)
    if bad:
        row, residual = bad[0]
        raise SurplusNonzero(
            f"Equation for monomial {labels[row]} does not vanish",
            {"k": k, "monomial": labels[row], "residual": residual.pretty()},
        )
    return solution[:k] + [RatFun(1)], solution[k]


def el_solve_by_interpolation(k: int, extra_points: int = 2) -> Tuple[List[DimPoly], DimPoly]:
    """
    Evaluate-and-interpolate route to the same coefficients.

    Solves the system over Q at integer dimensions n > 2k and interpolates
    each unknown with degree bound 2k.
    """
    A, rhs, _ = _el_system(k)
    needed = 2 * k + 1 + extra_points
    samples: List[Tuple[int, List[RatFun]]] = []
    n_value = 2 * k + 1
    while len(samples) < needed:
        A_n = [[entry(n_value) for entry in row] for row in A]
        rhs_n = [entry(n_value) for entry in rhs]
        try:
            x = solve_linear_exact(A_n, rhs_n)
        except SingularSystem:
            logger.warning("System singular at n=%d, skipping", n_value)
        else:
            if unsatisfied_rows(A_n, x, rhs_n):
                raise SurplusNonzero(f"Surplus equation fails at n={n_value}", {"k": k, "n": n_value})
            samples.append((n_value, x))
        n_value += 1

    polys = []
    for j in range(k + 1):
        points = [(n_at, x[j].evaluate(0)) for n_at, x in samples]
        polys.append(interpolate(points, 2 * k))
    return polys[:k] + [DimPoly.constant(1)], polys[k]


# ============================================================================
# RESIDUAL CERTIFICATES
# ============================================================================

def _raise_if_nonzero(cleared: MultiPoly, what: str, k: int) -> None:
    if cleared.is_zero():
        return
    exps, coef = cleared.leading_term()
    raise NonzeroResidual(
        f"{what} residual for k={k} has nonzero monomial {monomial_name(exps)}",
        {"k": k, "monomial": monomial_name(exps), "coefficient": str(coef)},
    )


def el_residual(
    k: int,
    coefficients: Optional[Sequence[DimPoly]] = None,
    b: Optional[DimPoly] = None,
    raise_on_nonzero: bool = True,
) -> HypRadialExpr:
    """
    P_k psi - b_k (1 - beta^2)^k (c - beta)^(-k - n/2) for psi = (c - beta)^(k - n/2).

    Coefficients default to the standard operator and b_k; substitute
    others to check uniqueness.
    """
    coeffs = list(coefficients) if coefficients is not None else list(standard_operator(k).coeffs)
    if len(coeffs) != k + 1:
        raise ValueError(f"Need {k + 1} coefficients, got {len(coeffs)}")
    b = b_constant(k) if b is None else b

    images = hyp_images(k)
    total = HypRadialExpr(extremal_anchor(k))
    for a_m, image in zip(coeffs, images):
        total = total + image.scale(a_m)
    target = HypRadialExpr(extremal_anchor(k), {2 * k: _poly(b) * _rhs_factor(k)})
    residual = total - target

    cleared = residual.cleared(2 * k)
    if raise_on_nonzero:
        _raise_if_nonzero(cleared, "Hyperbolic Euler-Lagrange", k)
    return residual.normalized()


def euclid_el_residual(
    k: int,
    b: Optional[DimPoly] = None,
    raise_on_nonzero: bool = True,
) -> EuclidRadialExpr:
    """Delta^k X^(k - n/2) - b_k (4 tau^2)^k X^(-k - n/2) with X = tau^2 + rho^2"""
    b = b_constant(k) if b is None else b
    image = euclid_images(k)[k]
    target = EuclidRadialExpr(
        extremal_anchor(k), {2 * k: _poly(b) * 4 ** k * MultiPoly.var("tau2") ** k}
    )
    residual = image - target
    cleared = residual.cleared(2 * k)
    if raise_on_nonzero:
        _raise_if_nonzero(cleared, "Euclidean Euler-Lagrange", k)
    return residual.normalized()
