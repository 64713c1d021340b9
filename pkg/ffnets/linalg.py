"""
Linear algebra over F_q on galois FieldArray matrices.

Thin wrappers around galois row reduction that also cover the degenerate
shapes (no rows, no columns) the callers produce routinely.
"""

from typing import List, Sequence, Type

import galois
import numpy as np


def stack_rows(GF: Type[galois.FieldArray], rows: Sequence[galois.FieldArray], ncols: int) -> galois.FieldArray:
    """Stack 1-D field vectors into a matrix; an empty list gives a 0 x ncols matrix."""
    if not rows:
        return GF.Zeros((0, ncols))
    return GF(np.vstack([as_ints(r).reshape(1, -1) for r in rows]))


def as_ints(v: Sequence) -> np.ndarray:
    """Plain integer (digit index) view of a field vector."""
    if isinstance(v, galois.FieldArray):
        return np.asarray(v.view(np.ndarray), dtype=np.int64)
    return np.asarray([int(x) for x in v], dtype=np.int64)


def rref(A: galois.FieldArray) -> galois.FieldArray:
    """Reduced row echelon form (zero rows at the bottom)."""
    if A.shape[0] == 0 or A.shape[1] == 0:
        return A.copy()
    return A.row_reduce()


def pivot_columns(R: galois.FieldArray) -> List[int]:
    """Pivot column of each nonzero row of a matrix in reduced row echelon form."""
    plain = R.view(np.ndarray)
    pivots = []
    for row in plain:
        nonzero = np.nonzero(row)[0]
        if nonzero.size == 0:
            break
        pivots.append(int(nonzero[0]))
    return pivots


def rank(A: galois.FieldArray) -> int:
    """Rank of a matrix over its field."""
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    return len(pivot_columns(rref(A)))


def kernel(A: galois.FieldArray) -> galois.FieldArray:
    """
    Basis of {v : A v = 0} as the rows of a matrix.

    Basis vectors are ordered by their free column, and each has a 1 in its
    own free column, so the basis is canonical for the subspace.
    """
    GF = type(A)
    n = A.shape[1]
    if A.shape[0] == 0:
        return GF.Identity(n)
    R = rref(A)
    pivots = pivot_columns(R)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = GF.Zeros((len(free), n))
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = -R[r, f]
    return basis


def is_independent(A: galois.FieldArray) -> bool:
    """True iff the rows of A are linearly independent."""
    return rank(A) == A.shape[0]
