"""
Hyperbolic Sobolev Lab - Numeric Laboratory
Floating-point checks on the extremal family: pointwise values and lifts,
the integral of |u_beta|^q and the Sobolev quotient, Euclidean ball quotients,
the conformal transformation law on test functions via Taylor jets, and
divergence diagnostics for the L^2 and gradient energies.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import jax.numpy as jnp
import numpy as np

from app.config import settings
from app.constants import log_sphere_area, sharp_value, sphere_area
from app.errors import DimensionTooSmall, DomainError, JetOrderTooLow, ToleranceNotMet
from app.exact_algebra import DimPoly, MultiPoly, SYMBOLS
from app.jets import TaylorJet, push
from app.operator_core import b_constant, instantiate, standard_operator
from app.quadrature import integrate, integrate_with_diagnosis
from app.radial_symbolic import (
    HypRadialExpr,
    euclid_images,
    extremal_anchor,
    hyp_images,
    radial_derivative,
)
from app.schemas import (
    BumpSpec,
    ConformalReport,
    ExtremalParams,
    QuadratureResult,
    QuotientReport,
    Thm33Report,
)

logger = logging.getLogger(__name__)

LOG_2 = math.log(2.0)


# ============================================================================
# NUMERIC EVALUATION OF SYMBOLIC EXPRESSIONS
# ============================================================================

def _dim_float(p: DimPoly, n: float) -> float:
    return sum(float(c) * n ** i for i, c in enumerate(p.coeffs))


def _poly_float(poly: MultiPoly, values: Dict[str, float]) -> float:
    total = 0.0
    for exps, coef in poly.items():
        term = float(coef)
        for name, e in zip(SYMBOLS, exps):
            if e:
                term *= values[name] ** e
        total += term
    return total


@dataclass(frozen=True)
class RadialEvaluator:
    """
    Float view of a rebased radial expression: base^exponent * sum_t coeff_t base^-t.

    Evaluation happens in log space so very large or very small bases stay
    finite.
    """

    exponent: float
    shifts: np.ndarray
    coefficients: np.ndarray

    @classmethod
    def from_expr(cls, expr, n: float, offset: float) -> "RadialEvaluator":
        rebased = expr.rebased()
        values = {"n": float(n), rebased.OFFSET: float(offset)}
        shifts, coeffs = [], []
        for shift, poly in rebased.terms():
            shifts.append(shift)
            coeffs.append(_poly_float(poly, values))
        return cls(
            exponent=_dim_float(rebased.anchor, n),
            shifts=np.array(shifts, dtype=float),
            coefficients=np.array(coeffs, dtype=float),
        )

    def log_abs(self, log_base: np.ndarray) -> np.ndarray:
        """log |f| given log(base)"""
        log_base = np.asarray(log_base, dtype=float)
        powers = np.exp(-np.multiply.outer(log_base, self.shifts))
        series = powers @ self.coefficients
        with np.errstate(divide="ignore"):
            return self.exponent * log_base + np.log(np.abs(series))

    def __call__(self, base: np.ndarray) -> np.ndarray:
        log_base = np.log(np.asarray(base, dtype=float))
        powers = np.exp(-np.multiply.outer(log_base, self.shifts))
        return np.exp(self.exponent * log_base) * (powers @ self.coefficients)


def _log_cosh_minus_beta(r: np.ndarray, one_minus_beta: float) -> np.ndarray:
    """log(cosh r - beta) using cosh r - 1 = 2 sinh^2(r/2)"""
    r = np.asarray(r, dtype=float)
    return np.log(2.0 * np.sinh(0.5 * r) ** 2 + one_minus_beta)


def _log_sinh(r: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.sinh(np.asarray(r, dtype=float)))


def _log_normalization(p: ExtremalParams) -> float:
    """log (1 - beta^2)^((n - 2k)/4)"""
    return (p.n - 2 * p.k) / 4.0 * (math.log(p.one_minus_beta) + math.log1p(p.beta))


def _scale_breakpoints(scale: float, upper: float) -> List[float]:
    """Geometric partition points from scale/8 up to the upper limit"""
    points, x = [], scale / 8.0
    while x < upper:
        points.append(x)
        x *= 2.0
    return points


# ============================================================================
# EXTREMAL FAMILY
# ============================================================================

def u_beta_value(p: ExtremalParams, r):
    """u_beta(r) = (1 - beta^2)^((n-2k)/4) (cosh r - beta)^(k - n/2)"""
    log_u = _log_normalization(p) + p.exponent * _log_cosh_minus_beta(r, p.one_minus_beta)
    value = np.exp(log_u)
    return float(value) if np.ndim(value) == 0 else value


def lift_residual(p: ExtremalParams, x_norm: float) -> float:
    """
    Relative mismatch of the conformal lift of G_beta against u_beta.

    Checks (2/(1-|x|^2))^(k-n/2) G_beta(x) = u_beta(r) and
    (1+|x|^2)/(1-|x|^2) = cosh r at r = 2 artanh |x|.
    """
    if not 0.0 <= x_norm < 1.0:
        raise DomainError(f"Need 0 <= |x| < 1, got {x_norm}")
    x2 = x_norm * x_norm
    r = 2.0 * math.atanh(x_norm)
    tau2 = p.tau2
    e = p.exponent

    log_lhs = e * (LOG_2 - math.log1p(-x2)) + e * (math.log(tau2 + x2) - math.log(2.0 * math.sqrt(tau2)))
    log_rhs = _log_normalization(p) + e * float(_log_cosh_minus_beta(r, p.one_minus_beta))
    lift = abs(math.expm1(log_lhs - log_rhs))

    cosh_ball = (1.0 + x2) / (1.0 - x2)
    cosh_direct = math.cosh(r)
    coords = abs(cosh_ball - cosh_direct) / cosh_direct
    return max(lift, coords)


# ============================================================================
# INTEGRAL OF |u|^q AND THE SOBOLEV QUOTIENT
# ============================================================================

@dataclass(frozen=True)
class _UqPieces:
    """Integral of |u|^q split as full - tail, with tail/full kept separately"""

    full: float
    tail: float
    deficit: float
    error: float
    subdivisions: int

    @property
    def value(self) -> float:
        return self.full - self.tail


def _uq_pieces(p: ExtremalParams, rel_tol: float) -> _UqPieces:
    """
    2^n omega_(n-1) int_0^Z z^(n-1) (1+z^2)^(-n) dz with Z = sqrt((1+beta)/(1-beta)).

    The map z -> 1/z carries the integrand to itself, so the integral equals
    twice the part on [0, 1] minus the part on [0, 1/Z]. The latter is
    rescaled to [0, 1] to keep its relative accuracy when beta is near 1.
    """
    n = p.n
    tol = rel_tol / 4.0
    eps = math.sqrt(p.tau2)

    half = integrate(lambda z: z ** (n - 1) * (1.0 + z * z) ** (-n), 0.0, 1.0, rel_tol=tol)
    scaled = integrate(
        lambda t: t ** (n - 1) * (1.0 + eps * eps * t * t) ** (-n), 0.0, 1.0, rel_tol=tol
    )
    for part in (half, scaled):
        if not part.converged:
            raise ToleranceNotMet(
                f"Integral of |u|^q did not reach rel_tol={rel_tol}",
                {"n": n, "k": p.k, "beta": p.beta, "error": part.error_estimate},
            )

    log_scale = n * LOG_2 + log_sphere_area(n - 1)
    log_tail = n * math.log(eps) + math.log(scaled.value)
    full = math.exp(log_scale) * 2.0 * half.value
    tail = math.exp(log_scale + log_tail)
    deficit = math.exp(log_tail - math.log(2.0 * half.value))
    error = math.exp(log_scale) * (2.0 * half.error_estimate + math.exp(n * math.log(eps)) * scaled.error_estimate)
    return _UqPieces(full, tail, deficit, error, half.subdivisions + scaled.subdivisions)


def integral_uq(p: ExtremalParams, rel_tol: Optional[float] = None) -> QuadratureResult:
    """
    Integral of |u_beta|^q over hyperbolic space.

    Raises:
        ToleranceNotMet: If the quadrature does not converge
    """
    rel_tol = settings.rel_tol if rel_tol is None else rel_tol
    pieces = _uq_pieces(p, rel_tol)
    return QuadratureResult(
        value=pieces.value,
        error_estimate=pieces.error,
        subdivisions=pieces.subdivisions,
        converged=True,
    )


def integral_uq_ball(p: ExtremalParams, rel_tol: Optional[float] = None) -> QuadratureResult:
    """Same integral on the ball: omega_(n-1) int_0^1 G_beta^q rho^(n-1) drho"""
    rel_tol = settings.rel_tol if rel_tol is None else rel_tol
    n, tau2 = p.n, p.tau2
    tau = math.sqrt(tau2)
    log_const = n * math.log(2.0 * tau) + log_sphere_area(n - 1)

    def integrand(rho):
        return np.exp(log_const - n * np.log(tau2 + rho * rho) + (n - 1) * np.log(rho))

    result = integrate(integrand, 0.0, 1.0, rel_tol=rel_tol, breakpoints=_scale_breakpoints(tau, 1.0))
    _require_converged(result, "ball integral of |G|^q", p)
    return result


def integral_uq_direct(p: ExtremalParams, R: float, rel_tol: Optional[float] = None) -> QuadratureResult:
    """Truncated geodesic-polar form omega_(n-1) int_0^R u^q sinh^(n-1) r dr"""
    rel_tol = settings.rel_tol if rel_tol is None else rel_tol
    n = p.n
    log_const = 2.0 * n / (n - 2 * p.k) * _log_normalization(p) + log_sphere_area(n - 1)

    def integrand(r):
        return np.exp(log_const - n * _log_cosh_minus_beta(r, p.one_minus_beta) + (n - 1) * _log_sinh(r))

    scale = math.sqrt(p.one_minus_beta)
    result = integrate(integrand, 0.0, R, rel_tol=rel_tol, breakpoints=_scale_breakpoints(scale, R))
    _require_converged(result, "direct integral of |u|^q", p)
    return result


def _require_converged(result: QuadratureResult, what: str, p: ExtremalParams) -> None:
    if not result.converged:
        raise ToleranceNotMet(
            f"{what} did not converge",
            {"n": p.n, "k": p.k, "beta": p.beta, "error": result.error_estimate},
        )


def hyperbolic_quotient(p: ExtremalParams, rel_tol: Optional[float] = None) -> QuotientReport:
    """
    Sobolev quotient of u_beta: b_k (int |u|^q)^(2k/n).

    Uses P_k u_beta = b_k u_beta^(q-1) and b_k = omega_n^(-2k/n) / Lambda_k,
    so quotient = (1/Lambda_k) (int |u|^q / omega_n)^(2k/n). The ratio is
    formed from the tail share of the z-integral, which keeps the gap
    accurate as beta approaches 1.
    """
    rel_tol = settings.rel_tol if rel_tol is None else rel_tol
    pieces = _uq_pieces(p, rel_tol)
    sharp = sharp_value(p.n, p.k)
    power = 2.0 * p.k / p.n
    log_ratio = power * math.log1p(-pieces.deficit)
    quotient = sharp * math.exp(log_ratio)
    gap = -sharp * math.expm1(log_ratio)
    err = quotient * power * pieces.error / pieces.value
    logger.debug("Quotient n=%d k=%d beta=%g: gap %.3e", p.n, p.k, p.beta, gap)
    return QuotientReport(
        params=p,
        integral_uq=pieces.value,
        quotient=quotient,
        sharp_value=sharp,
        gap=gap,
        err_estimate=err,
    )


def quotient_curve(
    n: int,
    k: int,
    betas: Sequence[float],
    rel_tol: Optional[float] = None,
    report: Callable[[ExtremalParams, Optional[float]], QuotientReport] = hyperbolic_quotient,
) -> List[QuotientReport]:
    """Quotient reports along a strictly increasing beta grid, in input order"""
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise DomainError("betas must be strictly increasing")
    params = [ExtremalParams(n=n, k=k, beta=b) for b in betas]
    with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
        return list(pool.map(lambda q: report(q, rel_tol), params))


# ============================================================================
# EUCLIDEAN BALL QUOTIENT
# ============================================================================

def _euclid_energy_evaluator(n: int, k: int, tau2: float) -> Tuple[RadialEvaluator, int]:
    """Evaluator of Delta^(k/2) G (even k) or of its rho-derivative cofactor (odd k)"""
    images = euclid_images(k)
    if k % 2 == 0:
        return RadialEvaluator.from_expr(images[k // 2], n, tau2), 0
    derivative = radial_derivative(images[(k - 1) // 2])
    return RadialEvaluator.from_expr(derivative.expression, n, tau2), 2


def euclidean_ball_quotient(p: ExtremalParams, rel_tol: Optional[float] = None) -> QuotientReport:
    """
    int_B |Delta^(k/2) G_beta|^2 / (int_B |G_beta|^q)^(2/q) on the unit ball.

    Raises:
        ToleranceNotMet: If either radial integral does not converge
    """
    rel_tol = settings.rel_tol if rel_tol is None else rel_tol
    n, k, tau2 = p.n, p.k, p.tau2
    tau = math.sqrt(tau2)
    evaluator, rho_power = _euclid_energy_evaluator(n, k, tau2)
    log_const = (n - 2 * k) * math.log(2.0 * tau) + log_sphere_area(n - 1)

    def integrand(rho):
        log_x = np.log(tau2 + rho * rho)
        return np.exp(
            log_const + 2.0 * evaluator.log_abs(log_x) + (n - 1 + rho_power) * np.log(rho)
        )

    numerator = integrate(integrand, 0.0, 1.0, rel_tol=rel_tol, breakpoints=_scale_breakpoints(tau, 1.0))
    _require_converged(numerator, "ball energy", p)
    denominator = integral_uq_ball(p, rel_tol)

    sharp = sharp_value(n, k)
    power = (n - 2.0 * k) / n
    quotient = numerator.value / denominator.value ** power
    err = quotient * (
        numerator.error_estimate / numerator.value
        + power * denominator.error_estimate / denominator.value
    )
    return QuotientReport(
        params=p,
        integral_uq=denominator.value,
        quotient=quotient,
        sharp_value=sharp,
        gap=sharp - quotient,
        err_estimate=err,
    )


# ============================================================================
# TRUNCATED ENERGIES AND DIVERGENCE DIAGNOSTICS
# ============================================================================

def _hyp_energy_evaluator(n: int, k: int, m: int, beta: float) -> Tuple[RadialEvaluator, int]:
    images = hyp_images(k)
    if m % 2 == 0:
        return RadialEvaluator.from_expr(images[m // 2], n, beta), 0
    derivative = radial_derivative(images[(m - 1) // 2])
    return RadialEvaluator.from_expr(derivative.expression, n, beta), 2


def truncated_energy(
    p: ExtremalParams,
    m: int,
    R: float,
    rel_tol: Optional[float] = None,
) -> QuadratureResult:
    """
    int_0^R |Delta^(m/2) u_beta|^2 omega_(n-1) sinh^(n-1) r dr.

    Even m squares the symbolic image Delta_r^(m/2) u_beta; odd m squares the
    radial derivative of Delta_r^((m-1)/2) u_beta.

    Raises:
        ToleranceNotMet: If the quadrature does not converge
    """
    rel_tol = settings.rel_tol if rel_tol is None else rel_tol
    if not 0 <= m <= p.k:
        raise DomainError(f"Energy order m must lie in 0..{p.k}, got {m}")
    if R <= 0:
        raise DomainError(f"Need R > 0, got {R}")
    evaluator, sinh_power = _hyp_energy_evaluator(p.n, p.k, m, p.beta)
    log_const = 2.0 * _log_normalization(p) + log_sphere_area(p.n - 1)

    def integrand(r):
        log_d = _log_cosh_minus_beta(r, p.one_minus_beta)
        return np.exp(log_const + 2.0 * evaluator.log_abs(log_d) + (p.n - 1 + sinh_power) * _log_sinh(r))

    scale = math.sqrt(p.one_minus_beta)
    result = integrate(integrand, 0.0, R, rel_tol=rel_tol, breakpoints=_scale_breakpoints(scale, R))
    _require_converged(result, f"truncated energy m={m}", p)
    return result


def growth_rate(
    p: ExtremalParams,
    m: int = 0,
    radii: Sequence[float] = (20.0, 30.0, 40.0),
    rel_tol: Optional[float] = None,
) -> float:
    """Least-squares slope of log truncated_energy against R"""
    logs = [math.log(truncated_energy(p, m, R, rel_tol).value) for R in radii]
    return float(np.polyfit(np.asarray(radii, dtype=float), np.asarray(logs), 1)[0])


def paper_integrals_thm33(
    p: ExtremalParams,
    rel_tol: Optional[float] = None,
) -> Tuple[QuadratureResult, QuadratureResult]:
    """
    The t-variable forms of int |u_beta|^2 and int |grad u_beta|^2.

    Both are integrated over t in [0, T], T = sqrt((1+beta)/(1-beta)), with
    the endpoint factor 1 - ((1-beta)/(1+beta)) t^2. Divergence is diagnosed
    from fitted endpoint exponents and reported, never raised.
    """
    n, k, beta = p.n, p.k, p.beta
    if n <= 4 * k - 2:
        raise DimensionTooSmall(f"Need n > 4k - 2, got n={n}, k={k}", {"n": n, "k": k})
    T = math.sqrt((1.0 + beta) / p.one_minus_beta)
    one_minus_beta2 = p.one_minus_beta * (1.0 + beta)

    def endpoint_factor(t):
        return (T - t) * (T + t) / (T * T)

    def l2_integrand(t):
        s = endpoint_factor(t)
        return one_minus_beta2 / s * s ** (-(2 * k - 1)) * t ** (n - 1) / (1.0 + t * t) ** (n - 2 * k)

    def gradient_integrand(t):
        s = endpoint_factor(t)
        return s ** (-(2 * k - 2)) * t ** (n + 1) / (1.0 + t * t) ** (n - 2 * k + 2)

    log_common = (
        n * LOG_2
        + log_sphere_area(n - 1)
        - (k + 1) * math.log(one_minus_beta2)
        + 2 * k * math.log(p.one_minus_beta)
    )
    prefactors = (math.exp(log_common), (k - n / 2.0) ** 2 * math.exp(log_common))

    results = []
    for integrand, prefactor in zip((l2_integrand, gradient_integrand), prefactors):
        raw = integrate_with_diagnosis(integrand, 0.0, T, rel_tol=rel_tol)
        if math.isfinite(raw.value):
            raw = raw.model_copy(
                update={"value": raw.value * prefactor, "error_estimate": raw.error_estimate * prefactor}
            )
        results.append(raw)
    return results[0], results[1]


def _uq_truncated(p: ExtremalParams, R: float, rel_tol: float) -> float:
    """int over the geodesic ball of radius R of u^q, through z = Z tanh(R/2)"""
    n = p.n
    upper = math.tanh(R / 2.0) / math.sqrt(p.tau2)
    result = integrate(
        lambda z: z ** (n - 1) * (1.0 + z * z) ** (-n),
        0.0,
        upper,
        rel_tol=rel_tol,
        breakpoints=_scale_breakpoints(1.0, upper),
    )
    _require_converged(result, "truncated integral of |u|^q", p)
    return math.exp(n * LOG_2 + log_sphere_area(n - 1)) * result.value


def perturbed_quotient_probe(
    p: ExtremalParams,
    i: int,
    tau: Optional[Sequence[float]] = None,
    R: Optional[float] = None,
    rel_tol: Optional[float] = None,
) -> float:
    """
    Truncated-domain quotient with the lower coefficients replaced.

    The numerator is sum_{m>i} a_km E_m(R) + sum_{m<=i} tau_m E_m(R), with
    E_m the truncated energies; the denominator is the truncated
    (int |u|^q)^(2/q). Exploratory: the truncated energies grow without
    bound in R.
    """
    n, k = p.n, p.k
    R = settings.cutoff_radius if R is None else R
    rel_tol = settings.rel_tol if rel_tol is None else rel_tol
    if not 0 <= i <= k - 1:
        raise DomainError(f"Need 0 <= i <= k-1, got i={i}")
    if n <= 4 * k - 2:
        raise DimensionTooSmall(f"Need n > 4k - 2, got n={n}, k={k}", {"n": n, "k": k})
    coeffs = [float(a) for a in instantiate(standard_operator(k), n)]
    tau = coeffs[: i + 1] if tau is None else list(tau)
    if len(tau) != i + 1:
        raise DomainError(f"Need {i + 1} replacement coefficients, got {len(tau)}")

    weights = list(tau) + coeffs[i + 1:]
    numerator = sum(w * truncated_energy(p, m, R, rel_tol).value for m, w in enumerate(weights) if w)
    denominator = _uq_truncated(p, R, rel_tol) ** ((n - 2.0 * k) / n)
    return numerator / denominator


def thm33_report(
    p: ExtremalParams,
    radii: Sequence[float] = (20.0, 30.0, 40.0),
    rel_tol: Optional[float] = None,
    probe_i: Optional[int] = None,
    probe_tau: Optional[Sequence[float]] = None,
    cutoff: Optional[float] = None,
) -> Thm33Report:
    """Displayed energy integrals, growth rate and an optional perturbed probe"""
    l2_form, gradient_form = paper_integrals_thm33(p, rel_tol)
    probe = None
    if probe_i is not None:
        probe = perturbed_quotient_probe(p, probe_i, probe_tau, cutoff, rel_tol)
    return Thm33Report(
        params=p,
        l2_form=l2_form,
        gradient_form=gradient_form,
        growth_rate=growth_rate(p, 0, radii, rel_tol),
        expected_growth_rate=2.0 * p.k - 1.0,
        growth_radii=list(radii),
        probe=probe,
        sharp_value=sharp_value(p.n, p.k),
    )


@lru_cache(maxsize=None)
def _combined_image(k: int) -> HypRadialExpr:
    """P_k psi_k combined exactly, before any float instantiation"""
    images = hyp_images(k)
    total = HypRadialExpr(extremal_anchor(k))
    for a_m, image in zip(standard_operator(k).coeffs, images):
        total = total + image.scale(a_m)
    return total


def el_residual_numeric(p: ExtremalParams, radii: Sequence[float]) -> float:
    """
    Max relative gap between P_k u_beta evaluated from the symbolic image and
    b_k u_beta^(q-1) at the given radii.
    """
    n, k = p.n, p.k
    evaluator = RadialEvaluator.from_expr(_combined_image(k), n, p.beta)
    log_d = _log_cosh_minus_beta(np.asarray(radii, dtype=float), p.one_minus_beta)
    series = np.exp(-np.multiply.outer(log_d, evaluator.shifts)) @ evaluator.coefficients
    lhs = np.exp(_log_normalization(p) + evaluator.exponent * log_d) * series

    b = _dim_float(b_constant(k), n)
    q_minus_1 = (n + 2.0 * k) / (n - 2.0 * k)
    rhs = b * np.exp(q_minus_1 * (_log_normalization(p) + p.exponent * log_d))
    return float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))


# ============================================================================
# CONFORMAL TRANSFORMATION LAW
# ============================================================================

def _test_function(bump: BumpSpec, n: int, k: int, r0: np.ndarray) -> Callable:
    """
    Radial test function u(r) as a jax-traceable map.

    r0 are the radii the map will be expanded at; the bump is cut to zero
    where exp(-1/g) would underflow.
    """
    if bump.kind == "constant":
        return jnp.ones_like
    if bump.kind == "extremal":
        norm = math.exp((n - 2 * k) / 4.0 * math.log1p(-bump.beta * bump.beta))
        exponent = k - n / 2.0
        return lambda r: norm * jnp.exp(exponent * jnp.log(jnp.cosh(r) - bump.beta))

    t0 = (np.asarray(r0, dtype=float) - bump.center) / bump.width
    inside = 1.0 - t0 * t0 > 1.0 / 700.0

    def u(r):
        t = (r - bump.center) / bump.width
        g = jnp.where(inside, 1.0 - t * t, 1.0)
        return jnp.where(inside, jnp.exp(-1.0 / g), 0.0)

    return u


def _radial_laplacian(f: TaylorJet, weight: TaylorJet, n: int) -> TaylorJet:
    """-(f'' + (n-1) w f') with w = coth r on H^n or 1/rho on R^n"""
    d1 = f.differentiate()
    return push(lambda d2, w, g: -(d2 + (n - 1) * w * g), d1.differentiate(), weight, d1)


def _hyperbolic_images(n: int, k: int, bump: BumpSpec, r0: np.ndarray, order: int) -> List[TaylorJet]:
    """u, Delta_r u, ..., Delta_r^k u as jets at r0"""
    r = TaylorJet.variable(r0, order)
    coth = push(lambda x: jnp.cosh(x) / jnp.sinh(x), r)
    images = [push(_test_function(bump, n, k, r0), r)]
    for _ in range(k):
        images.append(_radial_laplacian(images[-1], coth, n))
    return images


def _lifted_images(n: int, k: int, bump: BumpSpec, rho0: np.ndarray, order: int) -> List[TaylorJet]:
    """v = xi_k (u o sigma) and its flat radial Laplacians as jets at rho0"""
    rho = TaylorJet.variable(rho0, order)
    u = _test_function(bump, n, k, 2.0 * np.arctanh(rho0))
    xi_power = (n - 2 * k) / 2.0

    def lifted(x):
        xi = jnp.exp(xi_power * jnp.log(2.0 / (1.0 - x * x)))
        return xi * u(jnp.log(1.0 + x) - jnp.log(1.0 - x))

    images = [push(lifted, rho)]
    inv_rho = push(lambda x: 1.0 / x, rho)
    for _ in range(k):
        images.append(_radial_laplacian(images[-1], inv_rho, n))
    return images


def _apply_operator(images: List[TaylorJet], coeffs: Sequence[float]) -> np.ndarray:
    """sum_m a_m Delta^m u at the anchors"""
    return sum(a * image.value for a, image in zip(coeffs, images))


def _default_samples(bump: BumpSpec, count: int) -> np.ndarray:
    if bump.kind == "bump":
        return np.linspace(bump.center - 0.9 * bump.width, bump.center + 0.9 * bump.width, count)
    return np.linspace(0.2, 2.0, count)


def conformal_law_residual(
    n: int,
    k: int,
    bump: Optional[BumpSpec] = None,
    sample_points: Optional[Sequence[float]] = None,
    jet_order: Optional[int] = None,
) -> ConformalReport:
    """
    Compare xi_k^((n+2k)/(n-2k)) P_k u with Delta^k(xi_k u o sigma) at r <-> tanh(r/2).

    The residual at each sample is normalized by the largest |left side|
    over all samples.

    Raises:
        JetOrderTooLow: If jet_order < 2k + 2
        DimensionTooSmall: If n <= 2k
    """
    bump = bump or BumpSpec()
    order = settings.default_jet_order(k) if jet_order is None else jet_order
    if order < 2 * k + 2:
        raise JetOrderTooLow(f"Jet order {order} below 2k+2 = {2 * k + 2}", {"order": order, "k": k})
    if n <= 2 * k:
        raise DimensionTooSmall(f"Need n > 2k, got n={n}, k={k}", {"n": n, "k": k})

    r0 = np.asarray(
        _default_samples(bump, settings.conformal_samples) if sample_points is None else sample_points,
        dtype=float,
    )
    if bump.kind == "bump" and np.any(np.abs(r0 - bump.center) >= 0.99 * bump.width):
        raise DomainError("Sample points must stay inside the bump support")
    if np.any(r0 <= 0):
        raise DomainError("Sample radii must be positive")

    coeffs = [float(a) for a in instantiate(standard_operator(k), n)]
    lhs_core = _apply_operator(_hyperbolic_images(n, k, bump, r0, order), coeffs)

    rho0 = np.tanh(0.5 * r0)
    weight = (2.0 / (1.0 - rho0 * rho0)) ** ((n + 2.0 * k) / 2.0)
    lhs = weight * lhs_core
    rhs = _lifted_images(n, k, bump, rho0, order)[-1].value

    scale = float(np.max(np.abs(lhs)))
    residual = float(np.max(np.abs(lhs - rhs))) / scale if scale > 0 else float(np.max(np.abs(rhs)))
    logger.info("Conformal law n=%d k=%d (%s): residual %.3e", n, k, bump.kind, residual)
    return ConformalReport(
        n=n, k=k, kind=bump.kind, jet_order=order, samples=len(r0), max_residual=residual
    )


def bump_quotients(
    n: int,
    k: int,
    bump: Optional[BumpSpec] = None,
    rel_tol: Optional[float] = None,
) -> Tuple[float, float]:
    """
    Hyperbolic and Euclidean Sobolev quotients of a compactly supported bump.

    Hyperbolic: int (P_k u) u dV_h / (int |u|^q dV_h)^(2/q).
    Euclidean: int |Delta^(k/2) v|^2 dx / (int |v|^q dx)^(2/q) for the lift
    v = xi_k (u o sigma). The two agree because compact support kills the
    boundary terms of the integrations by parts.
    """
    bump = bump or BumpSpec()
    if bump.kind != "bump":
        raise DomainError("Quotient identity needs a compactly supported bump")
    rel_tol = 1e-8 if rel_tol is None else rel_tol
    order = settings.default_jet_order(k)
    coeffs = [float(a) for a in instantiate(standard_operator(k), n)]
    q = 2.0 * n / (n - 2.0 * k)
    omega = sphere_area(n - 1)
    lo, hi = bump.center - bump.width, bump.center + bump.width

    def hyp_numerator(r):
        images = _hyperbolic_images(n, k, bump, r, order)
        pku = _apply_operator(images, coeffs)
        return omega * pku * images[0].value * np.sinh(r) ** (n - 1)

    def hyp_denominator(r):
        u = np.asarray(_test_function(bump, n, k, r)(jnp.asarray(r)))
        return omega * np.abs(u) ** q * np.sinh(r) ** (n - 1)

    def flat_numerator(rho):
        images = _lifted_images(n, k, bump, rho, order)
        if k % 2 == 0:
            density = images[k // 2].value ** 2
        else:
            density = images[(k - 1) // 2].differentiate().value ** 2
        return omega * density * rho ** (n - 1)

    def flat_denominator(rho):
        r = 2.0 * np.arctanh(rho)
        u = np.asarray(_test_function(bump, n, k, r)(jnp.asarray(r)))
        xi = (2.0 / (1.0 - rho * rho)) ** ((n - 2.0 * k) / 2.0)
        return omega * np.abs(xi * u) ** q * rho ** (n - 1)

    rho_lo, rho_hi = math.tanh(lo / 2.0), math.tanh(hi / 2.0)
    parts = [
        integrate(hyp_numerator, lo, hi, rel_tol=rel_tol),
        integrate(hyp_denominator, lo, hi, rel_tol=rel_tol),
        integrate(flat_numerator, rho_lo, rho_hi, rel_tol=rel_tol),
        integrate(flat_denominator, rho_lo, rho_hi, rel_tol=rel_tol),
    ]
    power = 2.0 / q
    hyperbolic = parts[0].value / parts[1].value ** power
    euclidean = parts[2].value / parts[3].value ** power
    return hyperbolic, euclidean
