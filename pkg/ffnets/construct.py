"""
Selection of the functions whose local expansions form the matrix rows.

Three constructions share one entry point:

- genus0: beta_j^(1) in L((j-1)(P_1 - P_2)), beta_j^(i) in L(j(P_i - P_1)),
  optionally as powers of fixed generators (Vandermonde mode).
- gpos: an auxiliary divisor D of degree 2g and
  beta_j^(1) in L(D + (j-1)P_1 - (j-1)P_2) minus L(D + (j-2)P_1 - (j-1)P_2),
  beta_j^(i) in L(D + jP_i - jP_1) minus the union of
  L(D + jP_i - (j+1)P_1) and L(D + (j-1)P_i - jP_1).
- xing: the gpos elements plus a basis w_1..w_g of L(D - P_1) adapted to the
  gap numbers n_1 < ... < n_g of a rational P_inf.

Every choice is deterministic: it is the first admissible vector in the
order rr_basis returns.
"""

import functools
import logging
import threading
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import galois

from .divisor import Divisor
from .ellcurve import Curve, EllipticFunctionField, make_curve
from .gf import FieldSpec, make_field
from .interfaces.function_field import FunctionField
from .ratfunc import RationalFunctionField
from .types import ConstructionError, Variant
from .validation import validate_params

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstructionParams:
    """
    Place system and options of one construction.

    places are P_1..P_s (rational, distinct); pinf is P_inf of degree mu; D is
    the auxiliary divisor (gpos / xing only).
    """
    variant: Variant
    ff: FunctionField
    places: Tuple[Any, ...]
    pinf: Any
    D: Optional[Divisor] = None
    vandermonde: bool = False

    @property
    def s(self) -> int:
        return len(self.places)

    @property
    def mu(self) -> int:
        return self.pinf.degree

    @property
    def genus(self) -> int:
        return self.ff.genus

    @property
    def field(self) -> FieldSpec:
        return self.ff.field


# ============================================================================
# Element selection
# ============================================================================

def _first_basis_element(ff: FunctionField, D: Divisor) -> Any:
    basis = ff.rr_basis(D)
    if not basis:
        raise ConstructionError(f"L({D}) is zero where a nonzero element must exist")
    return basis[0]


@functools.lru_cache(maxsize=None)
def _alpha(params: ConstructionParams, i: int) -> Any:
    P = params.places
    if i == 1:
        return _first_basis_element(params.ff, Divisor.of(P[0]) - Divisor.of(P[1]))
    return _first_basis_element(params.ff, Divisor.of(P[i - 1]) - Divisor.of(P[0]))


def choose_beta_g0(params: ConstructionParams, i: int, j: int) -> Any:
    """
    beta_j^(i) of the genus-0 construction.

    Args:
        params: genus0 parameters
        i: Coordinate 1..s
        j: Row 1, 2, ...

    Returns:
        First basis vector of the one-dimensional space, or a power of the
        generator alpha_i in Vandermonde mode
    """
    _check_index(params, i, j)
    if params.vandermonde:
        return _alpha(params, i) ** (j - 1 if i == 1 else j)
    P1 = Divisor.of(params.places[0])
    if i == 1:
        return _first_basis_element(params.ff, (j - 1) * (P1 - Divisor.of(params.places[1])))
    return _first_basis_element(params.ff, j * (Divisor.of(params.places[i - 1]) - P1))


def choose_beta_gpos(params: ConstructionParams, i: int, j: int) -> Any:
    """
    beta_j^(i) of the positive-genus construction (also used by xing).

    For i >= 2 the two excluded subspaces are the hyperplanes of
    A = L(D + jP_i - jP_1) where the pole order at P_1, resp. P_i, drops below
    the maximum. With u the first basis vector outside the first and v the
    first outside the second, the result is u if u avoids both, else v if v
    avoids both, else u + v.
    """
    _check_index(params, i, j)
    ff = params.ff
    D = params.D if params.D is not None else Divisor()
    P1 = params.places[0]

    if i == 1:
        A = D + (j - 1) * (Divisor.of(P1) - Divisor.of(params.places[1]))
        for u in ff.rr_basis(A):
            if ff.has_exact_pole(u, P1, A):
                return u
        raise ConstructionError(f"No element of L({A}) attains pole order {A[P1]} at {P1}")

    Pi = params.places[i - 1]
    A = D + j * (Divisor.of(Pi) - Divisor.of(P1))
    basis = ff.rr_basis(A)
    u = next((f for f in basis if ff.has_exact_pole(f, P1, A)), None)
    v = next((f for f in basis if ff.has_exact_pole(f, Pi, A)), None)
    if u is None or v is None:
        raise ConstructionError(f"Excluded subspaces exhaust L({A}) for i={i}, j={j}")
    if ff.has_exact_pole(u, Pi, A):
        return u
    if ff.has_exact_pole(v, P1, A):
        return v
    logger.debug(f"beta({i},{j}) taken as u + v")
    return u + v


def compute_gap_basis(params: ConstructionParams) -> List[Tuple[int, Any]]:
    """
    Gap numbers n_1 < ... < n_g of n -> l(D - P_1 - n P_inf) on 0..2g, with
    w_f in L(D - P_1 - n_f P_inf) of valuation exactly n_f at P_inf.

    Returns:
        List of (n_f, w_f)
    """
    ff = params.ff
    g = params.genus
    if params.mu != 1:
        raise ConstructionError("Gap numbers need a rational P_inf")
    D = params.D if params.D is not None else Divisor()
    base = D - Divisor.of(params.places[0])
    pinf = Divisor.of(params.pinf)

    spaces = [ff.rr_basis(base - n * pinf) for n in range(2 * g + 1)]
    dims = [len(basis) for basis in spaces]
    logger.debug(f"Gap search dimensions for n = 0..{2 * g}: {dims}")
    if dims[0] != g or dims[-1] != 0:
        raise ConstructionError(f"Dimensions {dims} inconsistent with l(D - P_1) = {g} and l(D - P_1 - 2g P_inf) = 0")

    gaps = []
    for n in range(2 * g):
        drop = dims[n] - dims[n + 1]
        if drop not in (0, 1):
            raise ConstructionError(f"Dimension sequence {dims} drops by {drop} at n={n}")
        if drop:
            w = next((f for f in spaces[n] if ff.valuation(f, params.pinf) == n), None)
            if w is None:
                raise ConstructionError(f"No element of valuation {n} at P_inf in L({base - n * pinf})")
            gaps.append((n, w))
    return gaps


def _check_index(params: ConstructionParams, i: int, j: int) -> None:
    if not 1 <= i <= params.s:
        raise ConstructionError(f"Coordinate {i} out of range 1..{params.s}")
    if j < 1:
        raise ConstructionError(f"Row index must be >= 1, got {j}")


# ============================================================================
# Beta system
# ============================================================================

class BetaSystem:
    """
    Lazily built, cached family beta_j^(i) (plus the gap basis for xing).

    Expansion digits at P_inf are cached per element in units of
    coefficient blocks (mu digits each) and only ever extended.

    Extension is serialized by an internal lock; entries never change once
    built.
    """

    def __init__(self, params: ConstructionParams) -> None:
        self.params = params
        self._betas: Dict[Tuple[int, int], Any] = {}
        self._gaps: Optional[List[Tuple[int, Any]]] = None
        self._digits: Dict[Tuple[int, int], Tuple[int, galois.FieldArray]] = {}
        self._lock = threading.RLock()

    @property
    def variant(self) -> Variant:
        return self.params.variant

    def beta(self, i: int, j: int) -> Any:
        with self._lock:
            key = (i, j)
            if key not in self._betas:
                if self.params.variant == Variant.GENUS0:
                    self._betas[key] = choose_beta_g0(self.params, i, j)
                else:
                    self._betas[key] = choose_beta_gpos(self.params, i, j)
            return self._betas[key]

    def betas(self, j_max: int) -> Dict[Tuple[int, int], Any]:
        """All beta_j^(i) with j <= j_max."""
        logger.info(f"Building beta system up to j={j_max} for s={self.params.s} ({self.params.variant.value})")
        return {(i, j): self.beta(i, j) for i in range(1, self.params.s + 1) for j in range(1, j_max + 1)}

    @property
    def gaps(self) -> List[Tuple[int, Any]]:
        """(n_f, w_f) pairs; empty unless the variant is xing."""
        if self.params.variant != Variant.XING:
            return []
        with self._lock:
            if self._gaps is None:
                self._gaps = compute_gap_basis(self.params)
                logger.info(f"Gap numbers: {[n for n, _ in self._gaps]}")
            return self._gaps

    @property
    def gap_numbers(self) -> List[int]:
        return [n for n, _ in self.gaps]

    def _cached_digits(self, key: Tuple[int, int], element: Callable[[], Any], n_terms: int) -> galois.FieldArray:
        with self._lock:
            cached = self._digits.get(key)
            if cached is None or cached[0] < n_terms:
                digits = self.params.ff.expansion_digits(element(), self.params.pinf, n_terms)
                self._digits[key] = (n_terms, digits)
                return digits
            return cached[1][: n_terms * self.params.mu]

    def expansion(self, i: int, j: int, n_terms: int) -> galois.FieldArray:
        """First n_terms coefficient blocks of beta_j^(i) at P_inf."""
        return self._cached_digits((i, j), lambda: self.beta(i, j), n_terms)

    def gap_expansion(self, n_f: int, n_terms: int) -> galois.FieldArray:
        """First n_terms expansion digits of w_f at P_inf."""
        by_index = dict(self.gaps)
        if n_f not in by_index:
            raise ConstructionError(f"{n_f} is not a gap number of P_inf (gaps {self.gap_numbers})")
        # coordinate 0 is free: betas use 1..s
        return self._cached_digits((0, n_f), lambda: by_index[n_f], n_terms)

    def cached_terms(self, i: int, j: int) -> int:
        """Number of coefficient blocks of beta_j^(i) expanded so far."""
        with self._lock:
            cached = self._digits.get((i, j))
            return cached[0] if cached is not None else 0


def build_system(params: ConstructionParams) -> BetaSystem:
    """Validate parameters and return an (empty, lazily filled) beta system."""
    ok, errors = validate_params(params)
    if not ok:
        raise ConstructionError("Invalid construction parameters: " + "; ".join(errors))
    return BetaSystem(params)


def vandermonde_generators(system: BetaSystem) -> List[Any]:
    """alpha_1 in L(P_1 - P_2) and alpha_i in L(P_i - P_1), i = 2..s."""
    if system.params.genus != 0:
        raise ConstructionError("Vandermonde generators exist only in genus 0")
    return [_alpha(system.params, i) for i in range(1, system.params.s + 1)]


# ============================================================================
# Default parameter kits
# ============================================================================

def default_pinf(ff: RationalFunctionField, places: Tuple[Any, ...], mu: int) -> Any:
    """First finite place of degree mu (in monic_irreducibles order) not among the given places."""
    for P in ff.finite_places_of_degree(mu):
        if P not in places:
            return P
    raise ConstructionError(f"No place of degree {mu} left for P_inf")


def genus0_kit(
    field: FieldSpec,
    s: int,
    mu: int = 1,
    vandermonde: bool = False,
    pinf: Optional[Any] = None,
) -> ConstructionParams:
    """
    P_1 = infinite place, P_i = x + c_i with c_i the element of index i - 2,
    P_inf the first unused monic irreducible of degree mu.
    """
    ff = RationalFunctionField(field)
    if s < 2:
        raise ConstructionError(f"s must be >= 2, got {s}")
    if s > field.q + 1:
        raise ConstructionError(f"F_{field.q}(x) has only {field.q + 1} rational places, s={s} requested")
    places = (ff.infinite_place(),) + tuple(ff.place((c, 1)) for c in range(s - 1))
    if pinf is None:
        pinf = default_pinf(ff, places, mu)
    return ConstructionParams(Variant.GENUS0, ff, places, pinf, None, vandermonde)


def elliptic_kit(curve: Curve, s: int, variant: Variant = Variant.GPOS) -> ConstructionParams:
    """
    P_1..P_s the first s affine rational points, P_inf = O, D = 2g P_1.
    """
    if variant == Variant.GENUS0:
        raise ConstructionError("The genus-0 construction needs the rational function field")
    ff = EllipticFunctionField(curve)
    affine = ff.rational_places()[1:]
    if s < 2:
        raise ConstructionError(f"s must be >= 2, got {s}")
    if s > len(affine):
        raise ConstructionError(f"{curve} has {len(affine)} affine rational points, s={s} requested")
    places = tuple(affine[:s])
    D = Divisor.of(places[0], 2 * ff.genus)
    return ConstructionParams(variant, ff, places, ff.infinity(), D, False)


def standard_curves() -> Dict[str, Curve]:
    """The two reference curves: y^2 + y = x^3 over F_2 and y^2 = x^3 - x over F_3."""
    return {
        "F2": make_curve(make_field(2), a3=1),
        "F3": make_curve(make_field(3), a4=2),
    }
