"""
Digital sequence points from a MatrixSet.

The n-th point has coordinates x_i = sum_j y_j q^(-j), where (y_1..y_m) is
C^(i) applied to the base-q digit vector of n (least significant digit
first, digits mapped to field elements through the digit bijection).
Points are exact rationals y / q^m; binary64 output is a lossy view.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import galois
import numpy as np

from .genmat import MatrixSet
from .gf import FieldSpec
from .linalg import as_ints
from .types import DepthError, OutputMode

logger = logging.getLogger(__name__)


@dataclass
class PointRequest:
    """A run of `count` points starting at index n0, each with m digits."""
    n0: int
    count: int
    m: int
    mode: OutputMode = OutputMode.EXACT

    def validate(self, ms: MatrixSet) -> None:
        if self.n0 < 0:
            raise ValueError(f"Start index must be >= 0, got {self.n0}")
        if self.count < 1:
            raise ValueError(f"Point count must be >= 1, got {self.count}")
        if self.m < 1 or self.m > ms.rows:
            raise DepthError(f"Precision m={self.m} outside 1..{ms.rows} (generated rows)")


def num_digits(n: int, q: int) -> int:
    """Number of base-q digits of n (0 for n = 0)."""
    count = 0
    while n:
        n //= q
        count += 1
    return count


def digits_of_index(n: int, field: FieldSpec, length: int) -> galois.FieldArray:
    """Base-q digits of n, least significant first, as field elements."""
    q = field.q
    if not 0 <= n < q**length:
        raise ValueError(f"Index {n} out of range for {length} base-{q} digits")
    out = []
    for _ in range(length):
        n, d = divmod(n, q)
        out.append(d)
    return field.GF(out) if out else field.GF.Zeros(0)


def _digit_matrix(indices: Sequence[int], q: int, length: int) -> np.ndarray:
    """length x N matrix of base-q digits, one column per index."""
    values = np.asarray(indices, dtype=np.int64)
    out = np.zeros((length, values.size), dtype=np.int64)
    for r in range(length):
        values, out[r] = np.divmod(values, q)
    return out


def point_digits(n: int, ms: MatrixSet, m: int) -> List[galois.FieldArray]:
    """
    Output digits (y_1..y_m) of every coordinate of point n.

    The digit vector of n has max(m, number of digits of n) entries, so
    C^(i) must be generated to that many columns.
    """
    length = max(m, num_digits(n, ms.q))
    d = digits_of_index(n, ms.field, length)
    return [C.prefix(m, length) @ d for C in ms.matrices]


def _numerator(y: galois.FieldArray, q: int) -> int:
    value = 0
    for digit in as_ints(y):
        value = value * q + int(digit)
    return value


def point_numerators(n: int, ms: MatrixSet, m: int) -> Tuple[int, ...]:
    """Integers y_i with x_i = y_i / q^m."""
    return tuple(_numerator(y, ms.q) for y in point_digits(n, ms, m))


def point(n: int, ms: MatrixSet, m: int) -> Tuple[Fraction, ...]:
    """The n-th point truncated to m digits, as exact fractions."""
    Q = ms.q**m
    return tuple(Fraction(y, Q) for y in point_numerators(n, ms, m))


def points(ms: MatrixSet, request: PointRequest) -> List[Tuple[int, Tuple[int, ...]]]:
    """(n, numerators) for n = n0 .. n0 + count - 1."""
    request.validate(ms)
    logger.info(f"Generating {request.count} points from n0={request.n0} with m={request.m}")
    return [(n, point_numerators(n, ms, request.m)) for n in range(request.n0, request.n0 + request.count)]


def block_points(ms: MatrixSet, k: int, m: int) -> List[Tuple[int, ...]]:
    """
    Numerators of the q^m points with indices k q^m .. (k+1) q^m - 1, each
    truncated to m digits.
    """
    q = ms.q
    size = q**m
    indices = range(k * size, (k + 1) * size)
    length = max(m, num_digits((k + 1) * size - 1, q))
    digits = ms.field.GF(_digit_matrix(list(indices), q, length))
    weights = np.array([q ** (m - 1 - j) for j in range(m)], dtype=np.int64)

    columns = []
    for C in ms.matrices:
        Y = as_ints((C.prefix(m, length) @ digits).ravel()).reshape(m, size)
        columns.append(Y.T @ weights)
    return [tuple(int(col[p]) for col in columns) for p in range(size)]


def format_point(n: int, numerators: Sequence[int], q: int, m: int, mode: OutputMode) -> str:
    """`n x_1 ... x_s` with exact `y/Q` tokens or binary64 decimals."""
    Q = q**m
    if mode == OutputMode.EXACT:
        tokens = [f"{y}/{Q}" for y in numerators]
    else:
        tokens = [repr(y / Q) for y in numerators]
    return " ".join([str(n)] + tokens)
