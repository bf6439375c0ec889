"""
Hyperbolic Sobolev Lab - Adaptive Quadrature
Globally adaptive bisection with the embedded Gauss-Kronrod 7/15 pair, and a
pre-pass that fits power-law exponents at finite endpoints so divergent
integrals are reported instead of hammered.
"""

import heapq
import logging
import math
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from app.config import settings
from app.schemas import QuadratureResult

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

# Kronrod abscissae on [0, 1], descending; odd indices are the Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK, _XGK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK, _WGK[-2::-1]])
_gauss_half = np.zeros(8)
_gauss_half[1::2] = _WG
GAUSS_WEIGHTS = np.concatenate([_gauss_half, _gauss_half[-2::-1]])


def gauss_kronrod(f: Integrand, a: float, b: float) -> Tuple[float, float]:
    """One 15-point Kronrod estimate on [a, b] and |K15 - G7| as its error"""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fx = np.asarray(f(center + half * NODES), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise FloatingPointError(f"Integrand not finite on [{a}, {b}]")
    kronrod = half * float(np.dot(KRONROD_WEIGHTS, fx))
    gauss = half * float(np.dot(GAUSS_WEIGHTS, fx))
    return kronrod, abs(kronrod - gauss)


def integrate(
    f: Integrand,
    a: float,
    b: float,
    rel_tol: Optional[float] = None,
    abs_tol: float = 0.0,
    breakpoints: Iterable[float] = (),
    max_subdivisions: Optional[int] = None,
) -> QuadratureResult:
    """
    Adaptive integral of a vectorized integrand over [a, b].

    The interval with the largest error estimate is bisected until the total
    error drops below max(rel_tol * |value|, abs_tol).

    Args:
        f: Integrand accepting and returning numpy arrays
        a, b: Finite limits, a < b
        rel_tol: Relative tolerance (defaults to settings.rel_tol)
        abs_tol: Absolute floor on the tolerance
        breakpoints: Interior points where the initial partition is split
        max_subdivisions: Cap on bisections (defaults to settings)

    Returns:
        QuadratureResult with converged set from the final error estimate
    """
    rel_tol = settings.rel_tol if rel_tol is None else rel_tol
    max_subdivisions = settings.quad_max_subdivisions if max_subdivisions is None else max_subdivisions
    if not a < b:
        raise ValueError(f"Need a < b, got [{a}, {b}]")

    points = sorted({a, b, *(p for p in breakpoints if a < p < b)})
    heap: List[Tuple[float, float, float, float]] = []
    for lo, hi in zip(points, points[1:]):
        value, err = gauss_kronrod(f, lo, hi)
        heapq.heappush(heap, (-err, lo, hi, value))

    subdivisions = 0
    while True:
        total = math.fsum(item[3] for item in heap)
        error = math.fsum(-item[0] for item in heap)
        if error <= max(rel_tol * abs(total), abs_tol):
            converged = True
            break
        if subdivisions >= max_subdivisions:
            converged = False
            break
        neg_err, lo, hi, _ = heap[0]
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            logger.debug("Interval [%r, %r] cannot be bisected further", lo, hi)
            converged = False
            break
        heapq.heappop(heap)
        for left, right in ((lo, mid), (mid, hi)):
            value, err = gauss_kronrod(f, left, right)
            heapq.heappush(heap, (-err, left, right, value))
        subdivisions += 1

    if not converged:
        logger.warning(
            "Quadrature on [%g, %g] stopped at error %.3e (value %.6e, %d subdivisions)",
            a, b, error, total, subdivisions,
        )
    return QuadratureResult(
        value=total,
        error_estimate=error,
        subdivisions=subdivisions,
        converged=converged,
    )


def endpoint_exponent(
    f: Integrand,
    a: float,
    b: float,
    side: str,
    windows: Optional[int] = None,
    start: Optional[float] = None,
) -> float:
    """
    Fitted local power of |f| at one endpoint.

    Samples f at distances h = start*(b-a)*2^-j from the endpoint and fits
    log|f| against log h by least squares; f ~ C h^alpha returns alpha.
    """
    windows = settings.endpoint_fit_windows if windows is None else windows
    start = settings.endpoint_fit_start if start is None else start
    hs = (b - a) * start * 0.5 ** np.arange(windows)
    xs = a + hs if side == "left" else b - hs
    with np.errstate(all="ignore"):
        ys = np.abs(np.asarray(f(xs), dtype=float))
    mask = np.isfinite(ys) & (ys > 0)
    if not mask.any():
        return math.inf
    if mask.sum() < 2:
        return 0.0
    slope = np.polyfit(np.log(hs[mask]), np.log(ys[mask]), 1)[0]
    return float(slope)


def integrate_with_diagnosis(
    f: Integrand,
    a: float,
    b: float,
    rel_tol: Optional[float] = None,
    breakpoints: Iterable[float] = (),
) -> QuadratureResult:
    """
    Endpoint-exponent pre-pass followed by adaptive integration.

    An exponent at or below settings.divergence_exponent (within fitting
    noise) marks the integral divergent: value and error are infinite and
    converged is False.
    """
    exponents = (
        endpoint_exponent(f, a, b, "left"),
        endpoint_exponent(f, a, b, "right"),
    )
    threshold = settings.divergence_exponent + 0.02
    if min(exponents) <= threshold:
        logger.info("Integral on [%g, %g] divergent: endpoint exponents %s", a, b, exponents)
        return QuadratureResult(
            value=math.inf,
            error_estimate=math.inf,
            subdivisions=0,
            endpoint_exponents=exponents,
            converged=False,
        )
    result = integrate(f, a, b, rel_tol=rel_tol, breakpoints=breakpoints)
    return result.model_copy(update={"endpoint_exponents": exponents})
