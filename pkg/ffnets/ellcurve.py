"""
Genus-1 backend: elliptic function fields in long Weierstrass form

    y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6

over F_q. Functions are (a(x) + b(x) y) / d(x). Valuations and local
expansions come from truncated Laurent series of the coordinate functions,
obtained by fixed-point (Hensel) iteration on the curve equation. Fixed
local parameters: t = x/y at the point at infinity O; t = x - x0 at an
affine point where the y-partial derivative is nonzero; t = y - y0
otherwise.
"""

import functools
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import galois
import numpy as np

from .divisor import Divisor
from .gf import FieldSpec
from .interfaces.function_field import FunctionField
from .linalg import kernel, stack_rows
from .ratfunc import constant_poly, is_zero_poly, leading_coefficient, poly_indices
from .series import LaurentSeries, evaluate_poly
from .types import ConstructionError, PlaceError, PoleError, PrecisionError

logger = logging.getLogger(__name__)

PRECISION_CAP = 4096


# ============================================================================
# Curves and places
# ============================================================================

@dataclass(frozen=True)
class Curve:
    """Weierstrass coefficients as element indices of `field`."""
    field: FieldSpec
    a1: int = 0
    a2: int = 0
    a3: int = 0
    a4: int = 0
    a6: int = 0

    def coefficient(self, name: str) -> galois.FieldArray:
        return self.field(getattr(self, name))

    def h(self) -> galois.Poly:
        """x^3 + a2 x^2 + a4 x + a6."""
        return galois.Poly(self.field.GF([self.a6, self.a4, self.a2, 1]), order="asc")

    def g(self) -> galois.Poly:
        """a1 x + a3, so that y^2 = h(x) - g(x) y."""
        return galois.Poly(self.field.GF([self.a3, self.a1]), order="asc")

    def discriminant(self) -> galois.FieldArray:
        a1, a2, a3, a4, a6 = (self.coefficient(n) for n in ("a1", "a2", "a3", "a4", "a6"))
        k = self.field.integer
        b2 = a1 * a1 + k(4) * a2
        b4 = k(2) * a4 + a1 * a3
        b6 = a3 * a3 + k(4) * a6
        b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - k(8) * b4**3 - k(27) * b6 * b6 + k(9) * b2 * b4 * b6

    def is_nonsingular(self) -> bool:
        return int(self.discriminant()) != 0

    def contains(self, x0: galois.FieldArray, y0: galois.FieldArray) -> bool:
        lhs = y0 * y0 + self.coefficient("a1") * x0 * y0 + self.coefficient("a3") * y0
        return int(lhs - self.h()(x0)) == 0

    def describe(self) -> str:
        return f"{self.a1},{self.a2},{self.a3},{self.a4},{self.a6}"

    def __str__(self) -> str:
        return f"curve a1={self.a1} a2={self.a2} a3={self.a3} a4={self.a4} a6={self.a6} over {self.field}"


def make_curve(field: FieldSpec, a1: int = 0, a2: int = 0, a3: int = 0, a4: int = 0, a6: int = 0) -> Curve:
    for name, value in (("a1", a1), ("a2", a2), ("a3", a3), ("a4", a4), ("a6", a6)):
        if not 0 <= value < field.q:
            raise ConstructionError(f"Curve coefficient {name}={value} out of range for {field}")
    curve = Curve(field, a1, a2, a3, a4, a6)
    if not curve.is_nonsingular():
        raise ConstructionError(f"Singular curve: {curve}")
    return curve


@dataclass(frozen=True)
class PlaceEC:
    """A rational place: the point at infinity O (x0 = y0 = None) or an affine point, as element indices."""
    x0: Optional[int] = None
    y0: Optional[int] = None

    @property
    def is_infinity(self) -> bool:
        return self.x0 is None

    @property
    def degree(self) -> int:
        return 1

    def __str__(self) -> str:
        if self.x0 is None:
            return "O"
        return f"({self.x0},{self.y0})"

    __repr__ = __str__


INFINITY = PlaceEC()


def rational_places(curve: Curve) -> List[PlaceEC]:
    """O first, then affine points sorted by (index of x0, index of y0)."""
    if not curve.is_nonsingular():
        raise ConstructionError(f"Singular curve: {curve}")
    places = [INFINITY]
    for x0 in range(curve.field.q):
        for y0 in range(curve.field.q):
            if curve.contains(curve.field(x0), curve.field(y0)):
                places.append(PlaceEC(x0, y0))
    return places


def conjugate(curve: Curve, P: PlaceEC) -> PlaceEC:
    """The other zero of x - x0: (x0, -y0 - a1 x0 - a3)."""
    if P.is_infinity:
        return P
    x0, y0 = curve.field(P.x0), curve.field(P.y0)
    y1 = -y0 - curve.coefficient("a1") * x0 - curve.coefficient("a3")
    return PlaceEC(P.x0, int(y1))


def uses_x_parameter(curve: Curve, P: PlaceEC) -> bool:
    """True iff t = x - x0 is the local parameter at the affine point P."""
    x0, y0 = curve.field(P.x0), curve.field(P.y0)
    fy = curve.field.integer(2) * y0 + curve.coefficient("a1") * x0 + curve.coefficient("a3")
    return int(fy) != 0


# ============================================================================
# Coordinate series
# ============================================================================

def _fixed_point(
    step: Callable[[LaurentSeries], LaurentSeries], GF: type, W: int
) -> LaurentSeries:
    cur = LaurentSeries(0, GF.Zeros(W))
    for _ in range(W + 2):
        nxt = LaurentSeries(0, step(cur).window(0, W))
        if np.array_equal(nxt.coeffs.view(np.ndarray), cur.coeffs.view(np.ndarray)):
            return nxt
        cur = nxt
    raise PrecisionError(f"Fixed-point iteration did not converge modulo t^{W}")


@functools.lru_cache(maxsize=None)
def coordinate_series(curve: Curve, P: PlaceEC, W: int) -> Tuple[LaurentSeries, LaurentSeries]:
    """
    Series of x and y in the local parameter at P.

    The working precision W bounds the auxiliary series; the returned series
    carry their own (possibly smaller) precision.
    """
    GF = curve.field.GF
    a1, a2, a3, a4, a6 = (curve.coefficient(n) for n in ("a1", "a2", "a3", "a4", "a6"))
    t = LaurentSeries.monomial(GF, 1, W)

    if P.is_infinity:
        # s = 1/y in t = x/y
        t2 = LaurentSeries.monomial(GF, 2, W)
        t3 = LaurentSeries.monomial(GF, 3, W)

        def step(s: LaurentSeries) -> LaurentSeries:
            ss = s * s
            return (
                t3
                + (t2 * s).scale(a2)
                + (t * ss).scale(a4)
                + (ss * s).scale(a6)
                - (t * s).scale(a1)
                - ss.scale(a3)
            )

        s = _fixed_point(step, GF, W)
        y = s.inverse()
        return t * y, y

    x0, y0 = curve.field(P.x0), curve.field(P.y0)
    if uses_x_parameter(curve, P):
        X = t.add_scalar(x0)
        c1 = X.scale(a1).add_scalar(curve.field.integer(2) * y0 + a3)
        c0 = X.scale(a1 * y0).add_scalar(y0 * y0 + a3 * y0) - evaluate_poly(curve.h(), X, W)
        c1_inv = c1.inverse()

        def step(Y: LaurentSeries) -> LaurentSeries:
            return -((c0 + Y * Y) * c1_inv)

        Y = _fixed_point(step, GF, W)
        return X, Y.add_scalar(y0)

    Yt = t.add_scalar(y0)
    h = curve.h()
    e0 = (Yt * Yt + Yt.scale(a1 * x0 + a3)).add_scalar(-h(x0))
    e1 = Yt.scale(a1).add_scalar(-h.derivative()(x0))
    e2 = -(curve.field.integer(3) * x0 + a2)
    e1_inv = e1.inverse()

    def step(X: LaurentSeries) -> LaurentSeries:
        XX = X * X
        return -((e0 + XX.scale(e2) - XX * X) * e1_inv)

    X = _fixed_point(step, GF, W)
    return X.add_scalar(x0), Yt


# ============================================================================
# Functions on the curve
# ============================================================================

@dataclass(frozen=True, eq=False)
class FuncEC:
    """(a(x) + b(x) y) / d(x) with gcd(a, b, d) = 1 and d monic."""
    curve: Curve
    a: galois.Poly
    b: galois.Poly
    d: galois.Poly

    @classmethod
    def make(cls, curve: Curve, a: galois.Poly, b: galois.Poly, d: Optional[galois.Poly] = None) -> "FuncEC":
        GF = curve.field.GF
        if d is None:
            d = galois.Poly.One(GF)
        if is_zero_poly(d):
            raise ZeroDivisionError("Curve function with zero denominator")
        if is_zero_poly(a) and is_zero_poly(b):
            return cls(curve, a, b, galois.Poly.One(GF))
        g = galois.gcd(galois.gcd(a, b), d)
        a, b, d = a // g, b // g, d // g
        lc = constant_poly(leading_coefficient(d) ** -1)
        return cls(curve, a * lc, b * lc, d * lc)

    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]:
        return poly_indices(self.a), poly_indices(self.b), poly_indices(self.d)

    def is_zero(self) -> bool:
        return is_zero_poly(self.a) and is_zero_poly(self.b)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FuncEC):
            return NotImplemented
        return self.curve == other.curve and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.curve, self.key()))

    def __add__(self, other: "FuncEC") -> "FuncEC":
        return FuncEC.make(
            self.curve,
            self.a * other.d + other.a * self.d,
            self.b * other.d + other.b * self.d,
            self.d * other.d,
        )

    def __neg__(self) -> "FuncEC":
        return FuncEC(self.curve, -self.a, -self.b, self.d)

    def __sub__(self, other: "FuncEC") -> "FuncEC":
        return self + (-other)

    def __mul__(self, other: "FuncEC") -> "FuncEC":
        # y^2 = h - g y
        bb = self.b * other.b
        return FuncEC.make(
            self.curve,
            self.a * other.a + bb * self.curve.h(),
            self.a * other.b + other.a * self.b - bb * self.curve.g(),
            self.d * other.d,
        )

    def norm(self) -> galois.Poly:
        """a^2 - a b g - b^2 h: the norm of the numerator a + b y."""
        h, g = self.curve.h(), self.curve.g()
        return self.a * self.a - self.a * self.b * g - self.b * self.b * h

    def inverse(self) -> "FuncEC":
        if self.is_zero():
            raise ZeroDivisionError("The zero function has no inverse")
        g = self.curve.g()
        return FuncEC.make(self.curve, self.d * (self.a - self.b * g), -(self.d * self.b), self.norm())

    def __truediv__(self, other: "FuncEC") -> "FuncEC":
        return self * other.inverse()

    def __pow__(self, n: int) -> "FuncEC":
        if n < 0:
            return self.inverse() ** (-n)
        result = FuncEC.make(self.curve, galois.Poly.One(self.curve.field.GF), galois.Poly.Zero(self.curve.field.GF))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: galois.FieldArray) -> "FuncEC":
        k = constant_poly(c)
        return FuncEC.make(self.curve, self.a * k, self.b * k, self.d)

    def __str__(self) -> str:
        text = f"({self.a}) + ({self.b})*y"
        if self.d.degree > 0:
            text = f"({text})/({self.d})"
        return text

    __repr__ = __str__


@functools.lru_cache(maxsize=4096)
def function_series(f: FuncEC, P: PlaceEC, W: int) -> LaurentSeries:
    """Series of f at P computed from the coordinate series at working precision W."""
    xs, ys = coordinate_series(f.curve, P, W)
    value = evaluate_poly(f.a, xs, W)
    if not is_zero_poly(f.b):
        value = value + evaluate_poly(f.b, xs, W) * ys
    if f.d.degree > 0:
        value = value / evaluate_poly(f.d, xs, W)
    return value


def _initial_precision(f: FuncEC, need: int) -> int:
    return max(need, 0) + 8 + 2 * (max(f.a.degree, f.b.degree + 2) + f.d.degree)


def _series_to(f: FuncEC, P: PlaceEC, need: Optional[int]) -> LaurentSeries:
    """
    Series of f at P known at least modulo t^need.

    With need=None the series is grown until its first nonzero coefficient
    appears. The working precision doubles on shortfall up to PRECISION_CAP.
    """
    W = _initial_precision(f, need or 0)
    retries = 0
    while W <= PRECISION_CAP:
        series = function_series(f, P, W)
        if need is None:
            if series.normalized().coeffs.size:
                return series
        elif series.precision >= need:
            return series
        retries += 1
        if retries > 1:
            logger.warning(f"Expansion of {f} at {P} needed working precision {2 * W}")
        else:
            logger.debug(f"Growing working precision for {f} at {P} to {2 * W}")
        W *= 2
    raise PrecisionError(f"Expansion of {f} at {P} exceeds the precision cap {PRECISION_CAP}")


def valuation_ec(f: FuncEC, P: PlaceEC) -> int:
    """Index of the first nonzero coefficient of the local expansion of f at P."""
    if f.is_zero():
        raise PrecisionError("The zero function has no finite valuation: every window of its expansion is zero")
    return _series_to(f, P, None).valuation()


def local_expansion_ec(f: FuncEC, P: PlaceEC, k_max: int) -> LaurentSeries:
    """
    Coefficients c_nu .. c_k_max of f = sum c_k t^k at P, as a series of order nu.

    Raises PoleError when the pole order exceeds k_max.
    """
    GF = f.curve.field.GF
    if f.is_zero():
        return LaurentSeries(0, GF.Zeros(k_max + 1))
    nu = valuation_ec(f, P)
    if nu < -k_max:
        raise PoleError(f"Pole of order {-nu} at {P} exceeds the window k_max={k_max}")
    if nu > k_max:
        return LaurentSeries(k_max + 1, GF.Zeros(0))
    series = _series_to(f, P, k_max + 1)
    return LaurentSeries(nu, series.window(nu, k_max + 1))


# ============================================================================
# Riemann-Roch spaces
# ============================================================================

def ambient_monomials(N: int) -> List[Tuple[int, int]]:
    """
    Basis of L(N*O) as (i, e) meaning x^i y^e, ordered by pole order at O.

    Pole order k is realised by x^(k/2) for even k and x^((k-3)/2) y for odd
    k >= 3; there is no function with a single simple pole.
    """
    monomials = []
    for k in range(N + 1):
        if k % 2 == 0:
            monomials.append((k // 2, 0))
        elif k >= 3:
            monomials.append(((k - 3) // 2, 1))
    return monomials


def rr_basis_ec(curve: Curve, D: Divisor) -> List[FuncEC]:
    """
    Basis of L(D).

    Affine poles of D are cleared with v = prod (x - x_P)^n_P, whose divisor
    is sum n_P (P + P') - 2 n_P O. Then L(D) = {u / v : u in L(D - div v)},
    and D - div v is <= 0 at every affine place, so u lies in L(N*O) with N
    its coefficient at O. The affine vanishing orders are linear conditions
    on the expansion coefficients of the monomial basis.
    """
    GF = curve.field.GF
    x = galois.Poly.Identity(GF)
    v = galois.Poly.One(GF)
    cleared = D
    for P, n in D.items():
        if P.is_infinity or n <= 0:
            continue
        v = v * (x - constant_poly(curve.field(P.x0))) ** n
        cleared = cleared - n * (Divisor.of(P) + Divisor.of(conjugate(curve, P))) + Divisor.of(INFINITY, 2 * n)

    N = cleared[INFINITY]
    if N < 0:
        logger.debug(f"L({D}) = 0: cleared divisor has {N} at O")
        return []

    monomials = ambient_monomials(N)
    conditions = []
    for Q, n in cleared.items():
        if Q.is_infinity or n >= 0:
            continue
        order = -n
        xs, ys = coordinate_series(curve, Q, order + 2)
        values = [xs**i * ys**e if e else xs**i for i, e in monomials]
        for k in range(order):
            conditions.append(GF([int(val.coefficient(k)) for val in values]))

    A = stack_rows(GF, conditions, len(monomials))
    basis = []
    for vec in kernel(A):
        a_coeffs = GF.Zeros(N // 2 + 1)
        b_coeffs = GF.Zeros(max(N - 1, 2) // 2)
        for c, (i, e) in zip(vec, monomials):
            if e:
                b_coeffs[i] = c
            else:
                a_coeffs[i] = c
        a = galois.Poly(a_coeffs, order="asc")
        b = galois.Poly(b_coeffs, order="asc")
        basis.append(FuncEC.make(curve, a, b, v))

    logger.debug(f"L({D}) has dimension {len(basis)} (ambient N={N}, {len(conditions)} conditions)")
    return basis


# ============================================================================
# Backend
# ============================================================================

class EllipticFunctionField(FunctionField):
    """Function field of a nonsingular Weierstrass curve (genus 1)."""

    def __init__(self, curve: Curve) -> None:
        if not curve.is_nonsingular():
            raise ConstructionError(f"Singular curve: {curve}")
        self.curve = curve
        self.field = curve.field
        self._places: Optional[List[PlaceEC]] = None

    @property
    def genus(self) -> int:
        return 1

    def describe(self) -> str:
        return f"elliptic:{self.curve.describe()}"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EllipticFunctionField) and other.curve == self.curve

    def __hash__(self) -> int:
        return hash(("elliptic", self.curve))

    # Places ------------------------------------------------------------

    def rational_places(self) -> List[PlaceEC]:
        if self._places is None:
            self._places = rational_places(self.curve)
            logger.debug(f"{self.curve} has {len(self._places)} rational places")
        return list(self._places)

    def infinity(self) -> PlaceEC:
        return INFINITY

    def point(self, x0: int, y0: int) -> PlaceEC:
        if not (0 <= x0 < self.field.q and 0 <= y0 < self.field.q):
            raise PlaceError(f"Point ({x0},{y0}) has coordinates outside {self.field}")
        if not self.curve.contains(self.field(x0), self.field(y0)):
            raise PlaceError(f"Point ({x0},{y0}) is not on {self.curve}")
        return PlaceEC(x0, y0)

    def check_place(self, P: PlaceEC) -> None:
        if not isinstance(P, PlaceEC):
            raise PlaceError(f"{P} is not a place of an elliptic function field")
        if not P.is_infinity:
            self.point(P.x0, P.y0)

    def conjugate(self, P: PlaceEC) -> PlaceEC:
        return conjugate(self.curve, P)

    # Elements ----------------------------------------------------------

    def _poly_func(self, a: galois.Poly, b: Optional[galois.Poly] = None) -> FuncEC:
        return FuncEC.make(self.curve, a, b if b is not None else galois.Poly.Zero(self.field.GF))

    def one(self) -> FuncEC:
        return self._poly_func(galois.Poly.One(self.field.GF))

    def zero(self) -> FuncEC:
        return self._poly_func(galois.Poly.Zero(self.field.GF))

    def constant(self, c: galois.FieldArray) -> FuncEC:
        return self._poly_func(constant_poly(c))

    def x(self) -> FuncEC:
        return self._poly_func(galois.Poly.Identity(self.field.GF))

    def y(self) -> FuncEC:
        GF = self.field.GF
        return self._poly_func(galois.Poly.Zero(GF), galois.Poly.One(GF))

    def local_parameter(self, P: PlaceEC) -> FuncEC:
        if P.is_infinity:
            return self.x() / self.y()
        if uses_x_parameter(self.curve, P):
            return self.x() - self.constant(self.field(P.x0))
        return self.y() - self.constant(self.field(P.y0))

    # Riemann-Roch and expansions ----------------------------------------

    def rr_basis(self, D: Divisor) -> List[FuncEC]:
        for P in D.support:
            self.check_place(P)
        return rr_basis_ec(self.curve, D)

    def valuation(self, f: FuncEC, P: PlaceEC) -> int:
        return valuation_ec(f, P)

    def local_expansion(self, f: FuncEC, P: PlaceEC, k_max: int) -> LaurentSeries:
        return local_expansion_ec(f, P, k_max)

    def expansion_digits(self, f: FuncEC, P: PlaceEC, n_terms: int) -> galois.FieldArray:
        GF = self.field.GF
        if n_terms <= 0:
            return GF.Zeros(0)
        if f.is_zero():
            return GF.Zeros(n_terms)
        nu = valuation_ec(f, P)
        if nu < 0:
            raise PoleError(f"{f} has a pole of order {-nu} at {P}")
        return _series_to(f, P, n_terms).window(0, n_terms)
