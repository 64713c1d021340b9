"""
Finite fields F_q with q = p^e.

Arithmetic is delegated to galois. Elements are 0-dimensional galois
FieldArrays whose integer value is the canonical digit index: the
coefficient vector (c_0, ..., c_{e-1}) over the power basis of the modulus
is read as c_0 + c_1 p + ... + c_{e-1} p^{e-1}. The index map is a
bijection onto [0, q) sending 0 to 0; it is not additive.
"""

import functools
import itertools
import logging
import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Type

import galois

from .types import FieldError

logger = logging.getLogger(__name__)

FieldElement = galois.FieldArray


@functools.lru_cache(maxsize=None)
def _galois_field(p: int, e: int, modulus: Optional[Tuple[int, ...]]) -> Type[galois.FieldArray]:
    if e == 1:
        return galois.GF(p)
    prime_field = galois.GF(p)
    irreducible = galois.Poly(list(modulus or ()), field=prime_field, order="asc")
    return galois.GF(p**e, irreducible_poly=irreducible)


@dataclass(frozen=True)
class FieldSpec:
    """
    A finite field F_q, q = p^e.

    `modulus` is the low-to-high coefficient list of the monic irreducible
    defining polynomial (None for prime fields). Build instances with
    make_field(), which validates.
    """
    p: int
    e: int = 1
    modulus: Optional[Tuple[int, ...]] = None

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def GF(self) -> Type[galois.FieldArray]:
        return _galois_field(self.p, self.e, self.modulus)

    def __call__(self, value: int) -> FieldElement:
        """Element with the given digit index."""
        return index_elem(self, value)

    def zero(self) -> FieldElement:
        return self.GF(0)

    def one(self) -> FieldElement:
        return self.GF(1)

    def integer(self, n: int) -> FieldElement:
        """Image of the integer n in the prime subfield."""
        return self.GF(n % self.p)

    def generator(self) -> FieldElement:
        """The power-basis generator (the class of x modulo the modulus)."""
        if self.e == 1:
            raise FieldError("Prime fields have no power-basis generator")
        return self.GF(self.p)

    def element(self, coeffs: Sequence[int]) -> FieldElement:
        """Element from its coefficient vector over the power basis, low to high."""
        if len(coeffs) != self.e:
            raise FieldError(f"Expected {self.e} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"Coefficients must lie in [0, {self.p}): {list(coeffs)}")
        return self.GF(sum(c * self.p**k for k, c in enumerate(coeffs)))

    def coeffs(self, a: FieldElement) -> Tuple[int, ...]:
        """Coefficient vector of an element over the power basis, low to high."""
        n = elem_index(a)
        digits = []
        for _ in range(self.e):
            n, c = divmod(n, self.p)
            digits.append(c)
        return tuple(digits)

    def elements(self) -> List[FieldElement]:
        """All elements in index order."""
        return [self.GF(n) for n in range(self.q)]

    def header(self) -> str:
        """Serialized form used in matrix files."""
        text = f"q={self.p}^{self.e}"
        if self.e > 1 and self.modulus is not None:
            text += " modulus=" + ",".join(str(c) for c in self.modulus)
        return text

    def __str__(self) -> str:
        return f"F_{self.q}"


# ============================================================================
# Construction
# ============================================================================

def _is_irreducible(p: int, coeffs: Sequence[int]) -> bool:
    poly = galois.Poly(list(coeffs), field=galois.GF(p), order="asc")
    return bool(poly.is_irreducible())


def smallest_irreducible(p: int, e: int) -> Tuple[int, ...]:
    """
    Lexicographically smallest monic irreducible polynomial of degree e over Z_p.

    Coefficient vectors are compared low-to-high, so x^3+x^2+1 (1,0,1,1)
    precedes x^3+x+1 (1,1,0,1).
    """
    for lower in itertools.product(range(p), repeat=e):
        candidate = tuple(lower) + (1,)
        if lower[0] != 0 and _is_irreducible(p, candidate):
            return candidate
    raise FieldError(f"No irreducible polynomial of degree {e} over Z_{p}")


def make_field(p: int, e: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """
    Build a validated field spec.

    Args:
        p: Characteristic (must be prime)
        e: Extension degree >= 1
        modulus: Optional low-to-high coefficients of a monic irreducible of degree e

    Returns:
        FieldSpec; for e > 1 without a modulus the smallest irreducible is selected
    """
    if not isinstance(p, int) or p < 2 or not galois.is_prime(p):
        raise FieldError(f"Characteristic must be prime, got {p}")
    if not isinstance(e, int) or e < 1:
        raise FieldError(f"Extension degree must be >= 1, got {e}")

    if e == 1:
        return FieldSpec(p=p, e=1, modulus=None)

    if modulus is None:
        chosen = smallest_irreducible(p, e)
        logger.debug(f"Selected modulus {chosen} for F_{p}^{e}")
        return FieldSpec(p=p, e=e, modulus=chosen)

    coeffs = tuple(int(c) for c in modulus)
    if len(coeffs) != e + 1:
        raise FieldError(f"Modulus must have degree {e}, got coefficients {list(coeffs)}")
    if any(not 0 <= c < p for c in coeffs):
        raise FieldError(f"Modulus coefficients must lie in [0, {p}): {list(coeffs)}")
    if coeffs[-1] != 1:
        raise FieldError(f"Modulus must be monic: {list(coeffs)}")
    if not _is_irreducible(p, coeffs):
        raise FieldError(f"Modulus {list(coeffs)} is reducible over Z_{p}")
    return FieldSpec(p=p, e=e, modulus=coeffs)


def field_of_order(q: int) -> FieldSpec:
    """Field with q elements using the canonical modulus."""
    if q < 2:
        raise FieldError(f"Field order must be >= 2, got {q}")
    if not galois.is_prime_power(q):
        raise FieldError(f"{q} is not a prime power")
    primes, exponents = galois.factors(q)
    return make_field(int(primes[0]), int(exponents[0]))


_HEADER_PATTERN = re.compile(r"^q=(\d+)\^(\d+)(?:\s+modulus=([\d,]+))?$")


def parse_field_header(text: str) -> FieldSpec:
    """Inverse of FieldSpec.header()."""
    match = _HEADER_PATTERN.match(text.strip())
    if not match:
        raise FieldError(f"Malformed field header: {text!r}")
    p, e = int(match.group(1)), int(match.group(2))
    modulus = None
    if match.group(3):
        modulus = [int(c) for c in match.group(3).split(",")]
    elif e > 1:
        raise FieldError(f"Field header for e={e} is missing its modulus")
    return make_field(p, e, modulus)


# ============================================================================
# Arithmetic
# ============================================================================

def _check_same_field(a: FieldElement, b: FieldElement) -> None:
    if type(a) is not type(b):
        raise FieldError("Operands belong to different fields")


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same_field(a, b)
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same_field(a, b)
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    if int(a) == 0:
        raise ZeroDivisionError("Zero has no inverse")
    return a**-1


def elem_index(a: FieldElement) -> int:
    """Digit index of an element in [0, q)."""
    return int(a)


def index_elem(spec: FieldSpec, n: int) -> FieldElement:
    """Element with digit index n."""
    if not 0 <= n < spec.q:
        raise FieldError(f"Index {n} out of range for F_{spec.q}")
    return spec.GF(n)
