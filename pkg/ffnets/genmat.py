"""
Generating matrices C^(1), ..., C^(s).

Row j of C^(i) is read off the local expansion of beta_j^(i) at P_inf:

- block layout (genus0, gpos): coefficient a_k of degree < mu fills columns
  k*mu .. k*mu + mu - 1, low power of x first;
- xing layout: the expansion is taken in the system (z_k) with z_k = t^k off
  the gap numbers and z_(n_f) = w_f, and the coefficients at n_1..n_g are
  deleted.

Matrix files are the only interchange format between construction and
verification; see serialize().
"""

import hashlib
import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any, List, Sequence, Tuple, Union

import galois
import numpy as np

from .gf import FieldSpec, parse_field_header
from .interfaces.function_field import FunctionField
from .linalg import as_ints, stack_rows
from .types import ConstructionError, DepthError, FieldError, MatrixFormatError, Variant

if TYPE_CHECKING:
    from .construct import BetaSystem

logger = logging.getLogger(__name__)

FORMAT_VERSION = "FFNETS v1"


# ============================================================================
# Matrix types
# ============================================================================

@dataclass(frozen=True, eq=False)
class GenMatrix:
    """C^(coord) truncated to its generated depth; entries[j-1, k] is row j column k."""
    coord: int
    entries: galois.FieldArray

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def row(self, j: int) -> galois.FieldArray:
        if not 1 <= j <= self.rows:
            raise DepthError(f"Row {j} of C^({self.coord}) not generated (rows={self.rows})")
        return self.entries[j - 1]

    def prefix(self, rows: int, cols: int) -> galois.FieldArray:
        """Rows 1..rows and columns 0..cols-1."""
        if rows > self.rows or cols > self.cols:
            raise DepthError(
                f"C^({self.coord}) generated to {self.rows}x{self.cols}, {rows}x{cols} requested"
            )
        return self.entries[:rows, :cols]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GenMatrix):
            return NotImplemented
        return (
            self.coord == other.coord
            and type(self.entries) is type(other.entries)
            and self.entries.shape == other.entries.shape
            and np.array_equal(as_ints(self.entries.ravel()), as_ints(other.entries.ravel()))
        )


@dataclass(eq=False)
class MatrixSet:
    """
    Generating matrices of one construction, all over the same field and of
    the same depth.

    digest identifies the construction parameters (empty for hand-built
    sets); checksum covers the serialized file.
    """
    field: FieldSpec
    variant: Variant
    mu: int
    genus: int
    matrices: List[GenMatrix]
    digest: str = ""
    checksum: str = ""

    @property
    def s(self) -> int:
        return len(self.matrices)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def rows(self) -> int:
        return min((C.rows for C in self.matrices), default=0)

    @property
    def cols(self) -> int:
        return min((C.cols for C in self.matrices), default=0)

    def matrix(self, i: int) -> GenMatrix:
        """C^(i), 1-based."""
        return self.matrices[i - 1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixSet):
            return NotImplemented
        return (
            self.field == other.field
            and self.variant == other.variant
            and self.mu == other.mu
            and self.genus == other.genus
            and self.matrices == other.matrices
        )



# ============================================================================
# Row assembly
# ============================================================================

def _params_digest(system: "BetaSystem") -> str:
    # params imports construct, whose import chain reaches this module
    from .params import params_digest

    return params_digest(system.params)


def build_rows_block(system: "BetaSystem", j_max: int, m_max: int) -> MatrixSet:
    """
    Rows 1..j_max, columns 0..m_max-1 with column k*mu + r holding the
    coefficient of x^r in a_k^(i)_j.

    Raw expansion depth is ceil(m_max / mu) + 1 coefficients. Expansions come
    from the system's cache, so repeated or shallower requests reuse them.
    """
    params = system.params
    if params.variant == Variant.XING:
        raise ConstructionError("xing systems use build_rows_xing")
    ff = params.ff
    mu = params.mu
    n_terms = math.ceil(m_max / mu) + 1
    GF = ff.field.GF

    logger.info(f"Building {params.s} matrices {j_max}x{m_max} ({params.variant.value}, mu={mu})")
    matrices = []
    for i in range(1, params.s + 1):
        rows = [system.expansion(i, j, n_terms)[:m_max] for j in range(1, j_max + 1)]
        matrices.append(GenMatrix(i, stack_rows(GF, rows, m_max)))
    return MatrixSet(ff.field, params.variant, mu, params.genus, matrices, _params_digest(system))


def z_system(ff: FunctionField, pinf: Any, gaps: Sequence[Tuple[int, Any]], k_max: int) -> List[Any]:
    """
    z_0, ..., z_k_max with z_(n_f) = w_f and z_k = t^k otherwise (t the local
    parameter at P_inf).

    Raises ConstructionError unless nu(z_k) = k for every k.
    """
    by_index = dict(gaps)
    t = ff.local_parameter(pinf)
    zs = []
    for k in range(k_max + 1):
        z = by_index[k] if k in by_index else t**k
        nu = ff.valuation(z, pinf)
        if nu != k:
            raise ConstructionError(f"z_{k} has valuation {nu} at P_inf, expected {k}")
        zs.append(z)
    return zs


def z_matrix(system: "BetaSystem", n: int) -> galois.FieldArray:
    """Expansions of z_0..z_(n-1) in t as the rows of an upper-triangular matrix."""
    GF = system.params.field.GF
    Z = GF.Identity(n)
    for k in system.gap_numbers:
        if k < n:
            row = system.gap_expansion(k, n)
            if np.any(row[:k].view(np.ndarray)) or int(row[k]) == 0:
                raise ConstructionError(f"w at gap {k} does not have valuation {k} at P_inf")
            Z[k] = row
    return Z


def z_coefficients(Z: galois.FieldArray, target: galois.FieldArray) -> galois.FieldArray:
    """
    Coefficients a_0..a_(n-1) with target = sum a_k Z[k], by forward
    substitution against the triangular z_matrix rows.
    """
    GF = type(target)
    n = target.size
    residual = target.copy()
    out = GF.Zeros(n)
    for k in range(n):
        c = residual[k] / Z[k, k]
        out[k] = c
        if int(c):
            residual = residual - c * Z[k]
    return out


def build_rows_xing(system: "BetaSystem", j_max: int, m_max: int) -> MatrixSet:
    """
    Rows of the xing construction: z-system coefficients with the gap
    positions deleted.

    Raw depth max(m_max + g, 2g) leaves at least m_max retained columns.
    """
    params = system.params
    if params.variant != Variant.XING:
        raise ConstructionError("build_rows_xing needs a xing system")
    ff = params.ff
    g = len(system.gaps)
    depth = max(m_max + g, 2 * g)
    GF = ff.field.GF
    Z = z_matrix(system, depth)
    gap_set = set(system.gap_numbers)
    keep = [k for k in range(depth) if k not in gap_set][:m_max]

    logger.info(f"Building {params.s} xing matrices {j_max}x{m_max} (raw depth {depth}, gaps {system.gap_numbers})")
    matrices = []
    for i in range(1, params.s + 1):
        rows = []
        for j in range(1, j_max + 1):
            coeffs = z_coefficients(Z, system.expansion(i, j, depth))
            rows.append(coeffs[keep])
        matrices.append(GenMatrix(i, stack_rows(GF, rows, m_max)))
    return MatrixSet(ff.field, params.variant, params.mu, params.genus, matrices, _params_digest(system))


def build_matrices(system: "BetaSystem", j_max: int, m_max: int) -> MatrixSet:
    """Dispatch on the variant."""
    if system.params.variant == Variant.XING:
        return build_rows_xing(system, j_max, m_max)
    return build_rows_block(system, j_max, m_max)


# ============================================================================
# Serialization
# ============================================================================

_INFO_PATTERN = re.compile(
    r"^s=(\d+) variant=(\w+) mu=(\d+) g=(\d+)(?: digest=([0-9a-f]{16}))?(?: checksum=([0-9a-f]+))?$"
)
_MATRIX_PATTERN = re.compile(r"^C (\d+) rows=(\d+) cols=(\d+)$")


def sha16(text: str) -> str:
    """First 16 hex digits of SHA-256 over UTF-8 text."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _render(ms: MatrixSet, checksum: str) -> str:
    info = f"s={ms.s} variant={ms.variant.value} mu={ms.mu} g={ms.genus}"
    if ms.digest:
        info += f" digest={ms.digest}"
    if checksum:
        info += f" checksum={checksum}"
    lines = [FORMAT_VERSION, ms.field.header(), info]
    for C in ms.matrices:
        lines.append(f"C {C.coord} rows={C.rows} cols={C.cols}")
        for row in C.entries:
            lines.append(" ".join(str(v) for v in as_ints(row)))
    return "\n".join(lines) + "\n"


def serialize(ms: MatrixSet) -> str:
    """
    Canonical text form.

    `digest=` is the params digest carried by the MatrixSet (omitted for
    matrices built by hand). `checksum=` is the first 16 hex digits of
    SHA-256 over the same text without the checksum token; it is stored on
    the MatrixSet.
    """
    ms.checksum = sha16(_render(ms, ""))
    return _render(ms, ms.checksum)


def deserialize(text: str) -> MatrixSet:
    """Parse and verify a matrix file."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_VERSION:
        raise MatrixFormatError(f"Unsupported or missing version line: {lines[0] if lines else ''!r}")
    if len(lines) < 3:
        raise MatrixFormatError("Truncated header")
    try:
        field_spec = parse_field_header(lines[1])
    except FieldError as e:
        raise MatrixFormatError(f"Bad field header: {e}") from e

    info = _INFO_PATTERN.match(lines[2].strip())
    if not info:
        raise MatrixFormatError(f"Malformed info line: {lines[2]!r}")
    s, variant_text, mu, g, digest, checksum = info.groups()
    try:
        variant = Variant(variant_text)
    except ValueError as e:
        raise MatrixFormatError(f"Unknown variant {variant_text!r}") from e

    GF = field_spec.GF
    matrices = []
    pos = 3
    for i in range(1, int(s) + 1):
        if pos >= len(lines):
            raise MatrixFormatError(f"Missing matrix C^({i})")
        head = _MATRIX_PATTERN.match(lines[pos].strip())
        if not head or int(head.group(1)) != i:
            raise MatrixFormatError(f"Expected header of C^({i}), got {lines[pos]!r}")
        rows, cols = int(head.group(2)), int(head.group(3))
        pos += 1
        body = lines[pos : pos + rows]
        if len(body) != rows:
            raise MatrixFormatError(f"C^({i}) declares {rows} rows, file has {len(body)}")
        values = []
        for line in body:
            tokens = line.split()
            if len(tokens) != cols:
                raise MatrixFormatError(f"C^({i}) row has {len(tokens)} entries, expected {cols}")
            try:
                ints = [int(tok) for tok in tokens]
            except ValueError as e:
                raise MatrixFormatError(f"Non-integer entry in C^({i}): {line!r}") from e
            if any(not 0 <= v < field_spec.q for v in ints):
                raise MatrixFormatError(f"Entry out of range for {field_spec} in C^({i})")
            values.append(ints)
        pos += rows
        entries = GF(np.array(values, dtype=np.int64).reshape(rows, cols))
        matrices.append(GenMatrix(i, entries))

    if any(line.strip() for line in lines[pos:]):
        raise MatrixFormatError("Trailing content after the last matrix")
    depths = {(C.rows, C.cols) for C in matrices}
    if len(depths) > 1:
        raise MatrixFormatError(f"Matrices have different depths: {sorted(depths)}")

    ms = MatrixSet(field_spec, variant, int(mu), int(g), matrices, digest or "")
    if checksum is None:
        raise MatrixFormatError("Missing checksum in the info line")
    expected = sha16(_render(ms, ""))
    if checksum != expected:
        raise MatrixFormatError(f"Checksum mismatch: file says {checksum}, content gives {expected}")
    ms.checksum = expected
    return ms


def save_matrix_set(ms: MatrixSet, path: Union[str, Path]) -> str:
    """Write the canonical file; returns the params digest."""
    Path(path).write_text(serialize(ms), encoding="utf-8")
    return ms.digest


def load_matrix_set(path: Union[str, Path]) -> MatrixSet:
    return deserialize(Path(path).read_text(encoding="utf-8"))
