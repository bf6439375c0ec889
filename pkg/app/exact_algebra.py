"""
Hyperbolic Sobolev Lab - Exact Algebra
Big rationals, polynomials in the dimension symbol n, sparse multivariate
polynomials, the rational-function field Q(n), fraction-free elimination and
interpolation. No floating point is used anywhere in this module.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from app.errors import DegreeExceeded, SingularSystem

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


def as_rational(value) -> Fraction:
    """Coerce an exact scalar (int, Fraction or "p/q" string) to Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"Not an exact scalar: {value!r}")


# ============================================================================
# DIMENSION POLYNOMIALS
# ============================================================================

class DimPoly:
    """
    Dense polynomial in the dimension symbol n over the rationals.

    Coefficients are stored in ascending degree with trailing zeros trimmed,
    so the zero polynomial has an empty coefficient tuple and degree
    ``DimPoly.ZERO_DEGREE``.
    """

    __slots__ = ("_coeffs",)
    ZERO_DEGREE = -1

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs: Tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, value: Scalar) -> "DimPoly":
        return cls([value])

    @classmethod
    def n(cls) -> "DimPoly":
        """The dimension symbol itself"""
        return cls([0, 1])

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1 if self._coeffs else self.ZERO_DEGREE

    @property
    def leading(self) -> Fraction:
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __call__(self, x: Scalar) -> Fraction:
        return poly_eval(self, x)

    @staticmethod
    def _coerce(other) -> "DimPoly":
        if isinstance(other, DimPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return DimPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        return DimPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "DimPoly":
        return DimPoly([-c for c in self._coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return DimPoly()
        out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, x in enumerate(self._coeffs):
            if not x:
                continue
            for j, y in enumerate(other._coeffs):
                out[i + j] += x * y
        return DimPoly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "DimPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("DimPoly powers must be nonnegative integers")
        result = DimPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __divmod__(self, other) -> Tuple["DimPoly", "DimPoly"]:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        dq, lead = other.degree, other.leading
        if self.degree < dq:
            return DimPoly(), self
        rem = list(self._coeffs)
        quot = [Fraction(0)] * (self.degree - dq + 1)
        for i in range(self.degree - dq, -1, -1):
            coef = rem[i + dq] / lead
            quot[i] = coef
            if coef:
                for j, y in enumerate(other._coeffs):
                    rem[i + j] -= coef * y
        return DimPoly(quot), DimPoly(rem[:dq])

    def __floordiv__(self, other) -> "DimPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "DimPoly":
        return divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(("DimPoly", self._coeffs))

    def scale(self, factor: Scalar) -> "DimPoly":
        factor = as_rational(factor)
        return DimPoly([c * factor for c in self._coeffs])

    def monic(self) -> "DimPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading)

    def derivative(self) -> "DimPoly":
        return DimPoly([i * c for i, c in enumerate(self._coeffs)][1:])

    def serialize(self) -> str:
        """Canonical ascending "p/q" list, e.g. "[0, -1/2, -1/2]" """
        return "[" + ", ".join(str(c) for c in self._coeffs) + "]"

    @classmethod
    def parse(cls, text: str) -> "DimPoly":
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"Not a serialized DimPoly: {text!r}")
        body = body[1:-1].strip()
        if not body:
            return cls()
        return cls(Fraction(part.strip()) for part in body.split(","))

    def pretty(self, symbol: str = "n") -> str:
        """Human rendering in descending powers, e.g. "-3/4*n^2 + 3/2*n + 8" """
        if self.is_zero():
            return "0"
        parts = []
        for power in range(self.degree, -1, -1):
            c = self._coeffs[power]
            if not c:
                continue
            mag = abs(c)
            if power == 0:
                body = str(mag)
            else:
                mono = symbol if power == 1 else f"{symbol}^{power}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"DimPoly({self.serialize()})"


ONE = DimPoly.constant(1)


def poly_eval(p: DimPoly, x: Scalar) -> Fraction:
    """Evaluate p at x exactly (Horner)"""
    x = as_rational(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_gcd(a: DimPoly, b: DimPoly) -> DimPoly:
    """Monic greatest common divisor over Q"""
    while not b.is_zero():
        r = a % b
        a, b = b, r.monic()
    return a.monic()


# ============================================================================
# MULTIVARIATE POLYNOMIALS
# ============================================================================

SYMBOLS: Tuple[str, ...] = ("n", "beta", "c", "tau2", "w")
_INDEX: Dict[str, int] = {name: i for i, name in enumerate(SYMBOLS)}
_ZERO_EXP: Tuple[int, ...] = (0,) * len(SYMBOLS)

Exponents = Tuple[int, ...]


def symbol_index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise ValueError(f"Unknown symbol {name!r}; expected one of {SYMBOLS}") from None


class MultiPoly:
    """
    Sparse polynomial over the fixed symbol set ``SYMBOLS``.

    Terms map exponent tuples (one entry per symbol) to nonzero rationals.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Exponents, Scalar]] = None):
        clean: Dict[Exponents, Fraction] = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(SYMBOLS) or any(e < 0 for e in exps):
                raise ValueError(f"Bad exponent tuple {exps}")
            coef = as_rational(coef)
            if coef:
                clean[exps] = clean.get(exps, Fraction(0)) + coef
        self._terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _trusted(cls, terms: Dict[Exponents, Fraction]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def constant(cls, value: Scalar) -> "MultiPoly":
        return cls({_ZERO_EXP: value})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        exps = list(_ZERO_EXP)
        exps[symbol_index(name)] = power
        return cls({tuple(exps): 1})

    @classmethod
    def from_dimpoly(cls, p: DimPoly, symbol: str = "n") -> "MultiPoly":
        idx = symbol_index(symbol)
        terms = {}
        for power, coef in enumerate(p.coeffs):
            if coef:
                exps = list(_ZERO_EXP)
                exps[idx] = power
                terms[tuple(exps)] = coef
        return cls._trusted(terms)

    def items(self) -> Iterator[Tuple[Exponents, Fraction]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def free_symbols(self) -> Tuple[str, ...]:
        used = set()
        for exps in self._terms:
            used.update(i for i, e in enumerate(exps) if e)
        return tuple(SYMBOLS[i] for i in sorted(used))

    def degree(self, name: str) -> int:
        idx = symbol_index(name)
        return max((e[idx] for e in self._terms), default=DimPoly.ZERO_DEGREE)

    @staticmethod
    def _coerce(other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other)
        if isinstance(other, DimPoly):
            return MultiPoly.from_dimpoly(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for exps, coef in other._terms.items():
            total = out.get(exps, 0) + coef
            if total:
                out[exps] = total
            else:
                out.pop(exps, None)
        return MultiPoly._trusted(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._trusted({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[Exponents, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, 0) + ca * cb
        return MultiPoly._trusted({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MultiPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("MultiPoly powers must be nonnegative integers")
        result = MultiPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(("MultiPoly", frozenset(self._terms.items())))

    def derivative(self, name: str) -> "MultiPoly":
        idx = symbol_index(name)
        out = {}
        for exps, coef in self._terms.items():
            power = exps[idx]
            if power:
                lowered = exps[:idx] + (power - 1,) + exps[idx + 1:]
                out[lowered] = coef * power
        return MultiPoly._trusted(out)

    def substitute(self, name: str, value: Scalar) -> "MultiPoly":
        """Replace one symbol by an exact scalar"""
        idx = symbol_index(name)
        value = as_rational(value)
        out: Dict[Exponents, Fraction] = {}
        for exps, coef in self._terms.items():
            key = exps[:idx] + (0,) + exps[idx + 1:]
            out[key] = out.get(key, 0) + coef * value ** exps[idx]
        return MultiPoly._trusted({e: c for e, c in out.items() if c})

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Evaluate exactly; every symbol present must be assigned"""
        missing = set(self.free_symbols()) - set(values)
        if missing:
            raise ValueError(f"Missing values for symbols {sorted(missing)}")
        point = [as_rational(values.get(name, 0)) for name in SYMBOLS]
        total = Fraction(0)
        for exps, coef in self._terms.items():
            term = coef
            for x, e in zip(point, exps):
                if e:
                    term *= x ** e
            total += term
        return total

    def collect(self, names: Sequence[str]) -> Dict[Exponents, "MultiPoly"]:
        """Group by monomials in ``names``; values hold the remaining symbols"""
        idxs = [symbol_index(name) for name in names]
        groups: Dict[Exponents, Dict[Exponents, Fraction]] = {}
        for exps, coef in self._terms.items():
            key = tuple(exps[i] for i in idxs)
            rest = list(exps)
            for i in idxs:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = coef
        return {key: MultiPoly._trusted(terms) for key, terms in sorted(groups.items())}

    def to_dimpoly(self) -> DimPoly:
        """Convert a polynomial in n alone"""
        extra = set(self.free_symbols()) - {"n"}
        if extra:
            raise ValueError(f"Not a polynomial in n alone: involves {sorted(extra)}")
        coeffs = [Fraction(0)] * (self.degree("n") + 1 if self._terms else 0)
        for exps, coef in self._terms.items():
            coeffs[exps[0]] += coef
        return DimPoly(coeffs)

    def leading_term(self) -> Tuple[Exponents, Fraction]:
        """Largest monomial in lexicographic order, used in error reports"""
        exps = max(self._terms)
        return exps, self._terms[exps]

    def pretty(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, coef in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(SYMBOLS, exps) if e
            )
            mag = abs(coef)
            if not mono:
                body = str(mag)
            else:
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append(("-" if coef < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MultiPoly({self.pretty()})"


def monomial_name(exps: Exponents) -> str:
    """Render an exponent tuple as a monomial, e.g. "beta^2*c" """
    mono = "*".join(
        name if e == 1 else f"{name}^{e}" for name, e in zip(SYMBOLS, exps) if e
    )
    return mono or "1"


# ============================================================================
# RATIONAL FUNCTIONS IN n
# ============================================================================

def _reduce(num: DimPoly, den: DimPoly) -> Tuple[DimPoly, DimPoly]:
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return DimPoly(), ONE
    if den.degree == 0:
        return num.scale(1 / den.leading), ONE
    quot, rem = divmod(num, den)
    if rem.is_zero():
        return quot, ONE
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, den = num // g, den // g
    lead = den.leading
    return num.scale(1 / lead), den.scale(1 / lead)


class RatFun:
    """Element of Q(n), kept reduced with a monic denominator"""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=None):
        num = _as_dimpoly(num)
        den = ONE if den is None else _as_dimpoly(den)
        self.num, self.den = _reduce(num, den)

    @classmethod
    def _trusted(cls, num: DimPoly, den: DimPoly) -> "RatFun":
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @staticmethod
    def _coerce(other) -> "RatFun":
        if isinstance(other, RatFun):
            return other
        if isinstance(other, (int, Fraction, DimPoly)):
            return RatFun(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def to_dimpoly(self) -> DimPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self!r} has a nonconstant denominator")
        return self.num

    def evaluate(self, x: Scalar) -> Fraction:
        den = poly_eval(self.den, x)
        if not den:
            raise ZeroDivisionError(f"denominator vanishes at n = {x}")
        return poly_eval(self.num, x) / den

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_polynomial() and other.is_polynomial():
            return RatFun._trusted(self.num + other.num, ONE)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun._trusted(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_polynomial() and other.is_polynomial():
            return RatFun._trusted(self.num * other.num, ONE)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RatFun", self.num, self.den))

    def pretty(self) -> str:
        if self.is_polynomial():
            return self.num.pretty()
        return f"({self.num.pretty()})/({self.den.pretty()})"

    def __repr__(self) -> str:
        return f"RatFun({self.pretty()})"


def _as_dimpoly(value) -> DimPoly:
    if isinstance(value, DimPoly):
        return value
    return DimPoly.constant(as_rational(value))


def _as_ratfun(value) -> RatFun:
    return value if isinstance(value, RatFun) else RatFun(value)


# ============================================================================
# EXACT LINEAR ALGEBRA
# ============================================================================

# Generic rational abscissae used to pick a full-rank row subset cheaply.
_PROBE_POINTS = (Fraction(1009, 7), Fraction(-733, 11), Fraction(4513, 13))


def _select_rows_at(A: Sequence[Sequence[RatFun]], point: Fraction) -> Optional[List[int]]:
    """Greedy full-rank row choice after evaluating A at a sample n"""
    cols = len(A[0])
    basis: List[Tuple[int, List[Fraction]]] = []
    chosen: List[int] = []
    for i, row in enumerate(A):
        try:
            vec = [entry.evaluate(point) for entry in row]
        except ZeroDivisionError:
            return None
        for pivot_col, bvec in basis:
            factor = vec[pivot_col]
            if factor:
                vec = [v - factor * b for v, b in zip(vec, bvec)]
        pivot_col = next((c for c, v in enumerate(vec) if v), None)
        if pivot_col is None:
            continue
        inv = 1 / vec[pivot_col]
        basis.append((pivot_col, [v * inv for v in vec]))
        chosen.append(i)
        if len(chosen) == cols:
            return chosen
    return None


def _bareiss(M: List[List[RatFun]], cols: int) -> List[RatFun]:
    """Fraction-free elimination with row pivoting, then back substitution"""
    rows = len(M)
    prev = RatFun(1)
    for j in range(cols):
        pivot = next((i for i in range(j, rows) if not M[i][j].is_zero()), None)
        if pivot is None:
            raise SingularSystem(
                f"No pivot available in column {j}",
                {"column": j, "rows": rows, "cols": cols},
            )
        if pivot != j:
            M[j], M[pivot] = M[pivot], M[j]
        pj = M[j][j]
        for i in range(j + 1, rows):
            row = M[i]
            mij = row[j]
            for col in range(j + 1, cols + 1):
                if mij.is_zero():
                    row[col] = (pj * row[col]) / prev
                else:
                    row[col] = (pj * row[col] - mij * M[j][col]) / prev
            row[j] = RatFun(0)
        prev = pj

    x: List[RatFun] = [RatFun(0)] * cols
    for j in range(cols - 1, -1, -1):
        acc = M[j][cols]
        for col in range(j + 1, cols):
            acc = acc - M[j][col] * x[col]
        x[j] = acc / M[j][j]
    return x


def solve_linear_exact(A: Sequence[Sequence], rhs: Sequence) -> List[RatFun]:
    """
    Solve A x = rhs exactly over Q(n).

    For overdetermined systems the solution of a maximal-rank square
    subsystem is returned; the caller checks the remaining rows with
    ``unsatisfied_rows``.

    Args:
        A: Matrix with at least as many rows as columns (entries RatFun,
            DimPoly or rationals)
        rhs: Right-hand side, one entry per row

    Returns:
        Solution vector of RatFun

    Raises:
        SingularSystem: If no full-column-rank square subsystem exists
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if rows < cols:
        raise ValueError(f"Need at least as many rows as columns, got {rows}x{cols}")
    if len(rhs) != rows:
        raise ValueError("Right-hand side length does not match the row count")
    if cols == 0:
        return []

    A = [[_as_ratfun(x) for x in row] for row in A]
    rhs = [_as_ratfun(b) for b in rhs]

    selected: Optional[List[int]] = None
    if rows > cols:
        for point in _PROBE_POINTS:
            selected = _select_rows_at(A, point)
            if selected is not None:
                break
    if selected is None:
        selected = list(range(rows))

    logger.debug("Bareiss on %d of %d rows, %d unknowns", len(selected), rows, cols)
    M = [list(A[i]) + [rhs[i]] for i in selected]
    return _bareiss(M, cols)


def mat_vec(A: Sequence[Sequence], x: Sequence) -> List[RatFun]:
    """Exact matrix-vector product"""
    out = []
    for row in A:
        acc = RatFun(0)
        for entry, xi in zip(row, x):
            acc = acc + _as_ratfun(entry) * _as_ratfun(xi)
        out.append(acc)
    return out


def unsatisfied_rows(A: Sequence[Sequence], x: Sequence, rhs: Sequence) -> List[Tuple[int, RatFun]]:
    """Rows where A x - rhs is not identically zero, with their residuals"""
    bad = []
    for i, (lhs, b) in enumerate(zip(mat_vec(A, x), rhs)):
        residual = lhs - _as_ratfun(b)
        if not residual.is_zero():
            bad.append((i, residual))
    return bad


def interpolate(points: Sequence[Tuple[Scalar, Scalar]], degree_bound: int) -> DimPoly:
    """
    Polynomial of degree <= degree_bound through the given points.

    Newton divided differences on the first degree_bound + 1 points; every
    further point must lie on the result.

    Raises:
        DegreeExceeded: If the points need a higher degree
    """
    pts = [(as_rational(x), as_rational(y)) for x, y in points]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("Interpolation abscissae must be pairwise distinct")
    if degree_bound < 0 or len(pts) < degree_bound + 1:
        raise ValueError(f"Need at least {degree_bound + 1} points, got {len(pts)}")

    base = pts[: degree_bound + 1]
    coef = [y for _, y in base]
    m = len(base)
    for level in range(1, m):
        for i in range(m - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (base[i][0] - base[i - level][0])

    poly = DimPoly([coef[-1]])
    for i in range(m - 2, -1, -1):
        poly = poly * DimPoly([-base[i][0], 1]) + coef[i]

    for x, y in pts[m:]:
        if poly(x) != y:
            raise DegreeExceeded(
                f"Points need degree > {degree_bound}",
                {"degree_bound": degree_bound, "abscissa": str(x)},
            )
    return poly
