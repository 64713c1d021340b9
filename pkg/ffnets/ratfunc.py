"""
Genus-0 backend: the rational function field F_q(x).

Polynomials are galois.Poly objects over the field of a FieldSpec. Places are
the infinite place (local parameter 1/x) and finite places given by monic
irreducible polynomials p(x) (local parameter p(x)). Local expansion
coefficients at a place of degree mu are residues of degree < mu, recorded
over the basis 1, x, ..., x^(mu-1).
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Type, Union

import galois

from .divisor import Divisor
from .gf import FieldSpec
from .interfaces.function_field import FunctionField
from .linalg import kernel
from .types import ConstructionError, PlaceError, PoleError

logger = logging.getLogger(__name__)

Valuation = Union[int, float]


# ============================================================================
# Polynomial helpers
# ============================================================================

def poly_from_indices(field: FieldSpec, coeffs: Sequence[int]) -> galois.Poly:
    """Polynomial from element indices, low degree first."""
    if not coeffs:
        return galois.Poly.Zero(field.GF)
    return galois.Poly(field.GF([int(c) for c in coeffs]), order="asc")


def poly_indices(poly: galois.Poly) -> Tuple[int, ...]:
    """Element indices of the coefficients, low degree first (zero polynomial -> (0,))."""
    return tuple(int(c) for c in poly.coeffs[::-1])


def is_zero_poly(poly: galois.Poly) -> bool:
    return poly.degree == 0 and int(poly.coeffs[0]) == 0


def constant_poly(c: galois.FieldArray) -> galois.Poly:
    return galois.Poly(type(c)([int(c)]))


def leading_coefficient(poly: galois.Poly) -> galois.FieldArray:
    return poly.coeffs[0]


def multiplicity(poly: galois.Poly, p: galois.Poly) -> int:
    """Largest k with p^k dividing a nonzero poly."""
    k = 0
    while not is_zero_poly(poly) and is_zero_poly(poly % p):
        poly = poly // p
        k += 1
    return k


def inverse_mod(v: galois.Poly, p: galois.Poly) -> galois.Poly:
    """Inverse of v modulo p; v and p must be coprime."""
    d, s, _ = galois.egcd(v, p)
    if d.degree != 0:
        raise ZeroDivisionError("Polynomial is not invertible modulo the place polynomial")
    return (s * constant_poly(leading_coefficient(d) ** -1)) % p


def reversed_poly(poly: galois.Poly) -> galois.Poly:
    """x^deg * poly(1/x)."""
    return galois.Poly(poly.coeffs[::-1])


def monic_irreducibles(field: FieldSpec, degree: int) -> Iterator[galois.Poly]:
    """Monic irreducible polynomials of the given degree, in low-to-high lexicographic order."""
    for lower in itertools.product(range(field.q), repeat=degree):
        poly = poly_from_indices(field, tuple(lower) + (1,))
        if degree == 1 or (lower[0] != 0 and poly.is_irreducible()):
            yield poly


# ============================================================================
# Places
# ============================================================================

@dataclass(frozen=True)
class PlaceG0:
    """
    A place of F_q(x).

    `coeffs` holds the element indices (low to high) of the monic irreducible
    polynomial of a finite place, or None for the infinite place.
    """
    field: FieldSpec
    coeffs: Optional[Tuple[int, ...]] = None

    @property
    def is_infinite(self) -> bool:
        return self.coeffs is None

    @property
    def degree(self) -> int:
        if self.coeffs is None:
            return 1
        return len(self.coeffs) - 1

    def poly(self) -> galois.Poly:
        if self.coeffs is None:
            raise PlaceError("The infinite place has no place polynomial")
        return poly_from_indices(self.field, self.coeffs)

    def __str__(self) -> str:
        if self.coeffs is None:
            return "inf"
        return "poly:" + ",".join(str(c) for c in self.coeffs)

    __repr__ = __str__


def place_inf(field: FieldSpec) -> PlaceG0:
    return PlaceG0(field, None)


def place_of_poly(field: FieldSpec, poly: Union[galois.Poly, Sequence[int]]) -> PlaceG0:
    """Finite place of a monic irreducible polynomial."""
    if not isinstance(poly, galois.Poly):
        poly = poly_from_indices(field, poly)
    if type(poly.coeffs) is not field.GF:
        raise PlaceError(f"Place polynomial {poly} is not over {field}")
    if poly.degree < 1:
        raise PlaceError(f"Place polynomial must have degree >= 1, got {poly}")
    if int(leading_coefficient(poly)) != 1:
        raise PlaceError(f"Place polynomial must be monic, got {poly}")
    if poly.degree > 1 and not poly.is_irreducible():
        raise PlaceError(f"Place polynomial {poly} is reducible")
    return PlaceG0(field, poly_indices(poly))


# ============================================================================
# Rational functions
# ============================================================================

@dataclass(frozen=True, eq=False)
class RatFunc:
    """num/den in canonical form: gcd(num, den) = 1 and den monic."""
    num: galois.Poly
    den: galois.Poly

    @classmethod
    def make(cls, num: galois.Poly, den: galois.Poly) -> "RatFunc":
        if is_zero_poly(den):
            raise ZeroDivisionError("Rational function with zero denominator")
        if is_zero_poly(num):
            return cls(num, galois.Poly.One(type(den.coeffs)))
        g = galois.gcd(num, den)
        num, den = num // g, den // g
        lc = constant_poly(leading_coefficient(den) ** -1)
        return cls(num * lc, den * lc)

    @classmethod
    def from_poly(cls, poly: galois.Poly) -> "RatFunc":
        return cls.make(poly, galois.Poly.One(type(poly.coeffs)))

    @property
    def GF(self) -> Type[galois.FieldArray]:
        return type(self.num.coeffs)

    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return poly_indices(self.num), poly_indices(self.den)

    def is_zero(self) -> bool:
        return is_zero_poly(self.num)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.GF is other.GF and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.num, self.den * other.den)

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("The zero function has no inverse")
        return RatFunc.make(self.den, self.num)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return self * other.inverse()

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc.make(self.num**n, self.den**n)

    def scale(self, c: galois.FieldArray) -> "RatFunc":
        return RatFunc.make(self.num * constant_poly(c), self.den)

    def __str__(self) -> str:
        if self.den.degree == 0:
            return f"({self.num})"
        return f"({self.num})/({self.den})"

    __repr__ = __str__


# ============================================================================
# Valuations, Riemann-Roch spaces, local expansions
# ============================================================================

def valuation_g0(f: RatFunc, P: PlaceG0) -> Valuation:
    """
    Valuation of f at P; math.inf for the zero function.

    At the infinite place this is deg(den) - deg(num); at a finite place it is
    the multiplicity of the place polynomial in num minus that in den.
    """
    if f.is_zero():
        return math.inf
    if P.is_infinite:
        return f.den.degree - f.num.degree
    p = P.poly()
    return multiplicity(f.num, p) - multiplicity(f.den, p)


def rr_basis_g0(D: Divisor, field: Optional[FieldSpec] = None) -> List[RatFunc]:
    """
    Basis of L(D) on F_q(x).

    Candidates are u/v with v the product of p_P^n_P over finite places with
    n_P > 0. The conditions p_P^(-n_P) | u (n_P < 0) and
    deg(u) <= deg(v) + n_inf are linear in the coefficients of u and are
    solved by elimination.
    """
    places = list(D.support)
    if field is None:
        if not places:
            raise PlaceError("The field of the zero divisor must be given explicitly")
        field = places[0].field
    if not places:
        return [RatFunc.from_poly(galois.Poly.One(field.GF))]
    GF = field.GF
    one = galois.Poly.One(GF)

    v = one
    w = one
    n_inf = 0
    for P, n in D.items():
        if P.is_infinite:
            n_inf = n
        elif n > 0:
            v = v * P.poly() ** n
        else:
            w = w * P.poly() ** (-n)

    top = v.degree + n_inf
    if top < 0:
        logger.debug(f"L({D}) = 0: degree bound {top}")
        return []

    # column k holds x^k mod w
    x = galois.Poly.Identity(GF)
    rows = w.degree
    A = GF.Zeros((rows, top + 1))
    for k in range(top + 1):
        residue = (x**k) % w
        if rows:
            A[:, k] = residue.coefficients(rows, order="asc")

    basis = []
    for vec in kernel(A):
        u = galois.Poly(vec, order="asc")
        basis.append(RatFunc.make(u, v))

    logger.debug(f"L({D}) has dimension {len(basis)}")
    for f in basis:
        for P, n in D.items():
            if valuation_g0(f, P) < -n:
                raise ConstructionError(f"Basis element {f} violates L({D}) at {P}")
        if not D[place_inf(field)] and valuation_g0(f, place_inf(field)) < 0:
            raise ConstructionError(f"Basis element {f} has a pole at infinity outside L({D})")
    return basis


def _expand_at_poly(num: galois.Poly, den: galois.Poly, p: galois.Poly, k_max: int) -> List[galois.Poly]:
    if is_zero_poly(den % p):
        raise PoleError(f"Function has a pole at the place {p}")
    vinv = inverse_mod(den, p)
    out = []
    u = num
    for _ in range(k_max + 1):
        a = (u * vinv) % p
        out.append(a)
        u = (u - a * den) // p
    return out


def local_expansion_g0(f: RatFunc, P: PlaceG0, k_max: int) -> List[galois.Poly]:
    """
    Coefficients a_0..a_k_max of f = sum a_k z^k at P (each of degree < deg P).

    z = p(x) at a finite place and z = 1/x at the infinite place. Raises
    PoleError if f has a pole at P.
    """
    if k_max < 0:
        return []
    if not P.is_infinite:
        return _expand_at_poly(f.num, f.den, P.poly(), k_max)

    nu = valuation_g0(f, P)
    GF = f.GF
    zero = galois.Poly.Zero(GF)
    if nu == math.inf:
        return [zero] * (k_max + 1)
    if nu < 0:
        raise PoleError(f"Function {f} has a pole of order {-nu} at infinity")
    shift = int(nu)
    if shift > k_max:
        return [zero] * (k_max + 1)
    # f = t^nu * rev(num)(t) / rev(den)(t) with t = 1/x
    head = _expand_at_poly(
        reversed_poly(f.num), reversed_poly(f.den), galois.Poly.Identity(GF), k_max - shift
    )
    return [zero] * shift + head


# ============================================================================
# Backend
# ============================================================================

class RationalFunctionField(FunctionField):
    """The rational function field F_q(x) (genus 0)."""

    def __init__(self, field: FieldSpec) -> None:
        self.field = field

    @property
    def genus(self) -> int:
        return 0

    def describe(self) -> str:
        return "rational"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalFunctionField) and other.field == self.field

    def __hash__(self) -> int:
        return hash(("rational", self.field))

    # Places ------------------------------------------------------------

    def infinite_place(self) -> PlaceG0:
        return place_inf(self.field)

    def place(self, poly: Union[galois.Poly, Sequence[int]]) -> PlaceG0:
        return place_of_poly(self.field, poly)

    def rational_places(self) -> List[PlaceG0]:
        """inf first, then x + c in index order of c."""
        places = [self.infinite_place()]
        places.extend(self.place((c, 1)) for c in range(self.field.q))
        return places

    def finite_places_of_degree(self, degree: int) -> Iterator[PlaceG0]:
        """Finite places of the given degree, in the order of monic_irreducibles()."""
        for poly in monic_irreducibles(self.field, degree):
            yield PlaceG0(self.field, poly_indices(poly))

    def check_place(self, P: PlaceG0) -> None:
        if not isinstance(P, PlaceG0) or P.field != self.field:
            raise PlaceError(f"{P} is not a place of {self.field}(x)")

    # Elements ----------------------------------------------------------

    def one(self) -> RatFunc:
        return RatFunc.from_poly(galois.Poly.One(self.field.GF))

    def zero(self) -> RatFunc:
        return RatFunc.from_poly(galois.Poly.Zero(self.field.GF))

    def x(self) -> RatFunc:
        return RatFunc.from_poly(galois.Poly.Identity(self.field.GF))

    def constant(self, c: galois.FieldArray) -> RatFunc:
        return RatFunc.from_poly(constant_poly(c))

    def local_parameter(self, P: PlaceG0) -> RatFunc:
        if P.is_infinite:
            return self.x().inverse()
        return RatFunc.from_poly(P.poly())

    # Riemann-Roch and expansions ----------------------------------------

    def rr_basis(self, D: Divisor) -> List[RatFunc]:
        if D.is_zero():
            return [self.one()]
        for P in D.support:
            self.check_place(P)
        return rr_basis_g0(D)

    def valuation(self, f: RatFunc, P: PlaceG0) -> Valuation:
        return valuation_g0(f, P)

    def local_expansion(self, f: RatFunc, P: PlaceG0, k_max: int) -> List[galois.Poly]:
        return local_expansion_g0(f, P, k_max)

    def expansion_digits(self, f: RatFunc, P: PlaceG0, n_terms: int) -> galois.FieldArray:
        mu = P.degree
        GF = self.field.GF
        out = GF.Zeros(n_terms * mu)
        for k, a in enumerate(local_expansion_g0(f, P, n_terms - 1)):
            out[k * mu : (k + 1) * mu] = a.coefficients(mu, order="asc")
        return out
