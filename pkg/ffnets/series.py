"""
Truncated Laurent series over F_q.

A series is stored as an order (the exponent of its first stored
coefficient) and a coefficient vector; it is known modulo t^precision with
precision = order + len(coeffs). Every operation propagates precision, so a
result always states how far it can be trusted.
"""

from dataclasses import dataclass
from typing import Type

import galois
import numpy as np

from .types import PrecisionError


def _convolve(a: galois.FieldArray, b: galois.FieldArray, n: int) -> galois.FieldArray:
    GF = type(a)
    if n <= 0 or a.size == 0 or b.size == 0:
        return GF.Zeros(max(n, 0))
    out = np.convolve(a[:n], b[:n])[:n]
    if out.size < n:
        return _pad(out, n)
    return out


def _pad(a: galois.FieldArray, n: int) -> galois.FieldArray:
    GF = type(a)
    out = GF.Zeros(n)
    k = min(n, a.size)
    out[:k] = a[:k]
    return out


@dataclass(frozen=True, eq=False)
class LaurentSeries:
    """Sum of coeffs[k] t^(order+k), known modulo t^precision."""
    order: int
    coeffs: galois.FieldArray

    @property
    def GF(self) -> Type[galois.FieldArray]:
        return type(self.coeffs)

    @property
    def precision(self) -> int:
        return self.order + self.coeffs.size

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def constant(cls, c: galois.FieldArray, precision: int) -> "LaurentSeries":
        GF = type(c)
        if precision <= 0:
            return cls(precision, GF.Zeros(0))
        coeffs = GF.Zeros(precision)
        coeffs[0] = c
        return cls(0, coeffs)

    @classmethod
    def monomial(cls, GF: Type[galois.FieldArray], k: int, precision: int) -> "LaurentSeries":
        """t^k known modulo t^precision."""
        if precision <= k:
            return cls(precision, GF.Zeros(0))
        coeffs = GF.Zeros(precision - k)
        coeffs[0] = 1
        return cls(k, coeffs)

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    def normalized(self) -> "LaurentSeries":
        """Same series with leading zero coefficients dropped."""
        nonzero = np.nonzero(self.coeffs.view(np.ndarray))[0]
        if nonzero.size == 0:
            return LaurentSeries(self.precision, self.GF.Zeros(0))
        first = int(nonzero[0])
        return LaurentSeries(self.order + first, self.coeffs[first:])

    def valuation(self) -> int:
        """Exponent of the first nonzero coefficient."""
        n = self.normalized()
        if n.coeffs.size == 0:
            raise PrecisionError(f"Series is zero modulo t^{self.precision}; valuation unknown")
        return n.order

    def coefficient(self, k: int) -> galois.FieldArray:
        if k >= self.precision:
            raise PrecisionError(f"Coefficient of t^{k} requested, series known modulo t^{self.precision}")
        if k < self.order:
            return self.GF(0)
        return self.coeffs[k - self.order]

    def window(self, lo: int, hi: int) -> galois.FieldArray:
        """Coefficients of t^lo .. t^(hi-1)."""
        if hi > self.precision:
            raise PrecisionError(f"Coefficients up to t^{hi - 1} requested, series known modulo t^{self.precision}")
        out = self.GF.Zeros(max(hi - lo, 0))
        for k in range(max(lo, self.order), hi):
            out[k - lo] = self.coeffs[k - self.order]
        return out

    def truncate(self, precision: int) -> "LaurentSeries":
        if precision >= self.precision:
            return self
        keep = max(precision - self.order, 0)
        return LaurentSeries(min(self.order, precision), self.coeffs[:keep])

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        lo = min(self.order, other.order)
        hi = min(self.precision, other.precision)
        if hi <= lo:
            return LaurentSeries(hi, self.GF.Zeros(0))
        out = self.GF.Zeros(hi - lo)
        for part in (self, other):
            n = max(0, hi - part.order)
            seg = part.coeffs[:n]
            if seg.size:
                start = part.order - lo
                out[start : start + seg.size] = out[start : start + seg.size] + seg
        return LaurentSeries(lo, out)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.order, -self.coeffs)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        n = min(self.coeffs.size, other.coeffs.size)
        return LaurentSeries(self.order + other.order, _convolve(self.coeffs, other.coeffs, n))

    def scale(self, c: galois.FieldArray) -> "LaurentSeries":
        return LaurentSeries(self.order, self.coeffs * c)

    def add_scalar(self, c: galois.FieldArray) -> "LaurentSeries":
        if self.precision <= 0:
            return self
        return self + LaurentSeries.constant(c, self.precision)

    def inverse(self) -> "LaurentSeries":
        """Multiplicative inverse via Newton iteration h <- h + h(1 - u h)."""
        u = self.normalized()
        if u.coeffs.size == 0:
            raise PrecisionError(f"Cannot invert a series that is zero modulo t^{self.precision}")
        unit = u.coeffs
        n = unit.size
        h = unit[:1] ** -1
        while h.size < n:
            k = min(2 * h.size, n)
            residual = -_convolve(unit, h, k)
            residual[0] = residual[0] + self.GF(1)
            h = _pad(h, k) + _convolve(h, residual, k)
        return LaurentSeries(-u.order, h)

    def __truediv__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self * other.inverse()

    def __pow__(self, n: int) -> "LaurentSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries.constant(self.GF(1), self.coeffs.size)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def evaluate_poly(poly: galois.Poly, s: LaurentSeries, precision: int) -> LaurentSeries:
    """
    Substitute a series into a polynomial by Horner's rule.

    `precision` bounds the (otherwise unlimited) precision of the constant
    term when the polynomial is constant.
    """
    coeffs = poly.coeffs
    acc = LaurentSeries.constant(coeffs[0], precision)
    for c in coeffs[1:]:
        acc = (acc * s).add_scalar(c)
    return acc
