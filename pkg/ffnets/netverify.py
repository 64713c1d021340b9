"""
Exhaustive quality verification of generating matrices.

T*(m) is computed from rank conditions on the m-column prefixes exactly as
the quality function is defined: it is m - rho(m), with rho(m) the largest d
such that for every composition d_1 + ... + d_s = d the first d_i rows of
each C^(i), truncated to m columns, are linearly independent.

Everything here reads MatrixSet objects (as loaded from matrix files); only
independence_rank works on function-field elements.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .genmat import MatrixSet
from .interfaces.function_field import FunctionField
from .linalg import is_independent, rank, stack_rows
from .seqgen import block_points
from .types import BoundReport, BoundRow, DepthError, Variant

logger = logging.getLogger(__name__)

MAX_M = 10


@dataclass(frozen=True)
class RankQuery:
    """Rows 1..d_i of every C^(i), truncated to m columns."""
    m: int
    composition: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.composition)


@dataclass
class QualityProfile:
    """Observed T*(m) and claimed bound(m) for m = 1..m_max."""
    t_star: Dict[int, int] = field(default_factory=dict)
    bound: Dict[int, int] = field(default_factory=dict)

    def margins(self) -> Dict[int, int]:
        return {m: self.bound[m] - t for m, t in self.t_star.items() if m in self.bound}


# ============================================================================
# Compositions and shapes
# ============================================================================

def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """All (d_1..d_parts) of nonnegative integers summing to total, in lexicographic order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def admissible_shapes(s: int, m: int, t: int) -> List[Tuple[int, ...]]:
    """Elementary interval shapes (e_1..e_s) with e_1 + ... + e_s = m - t."""
    if t > m or t < 0:
        return []
    return list(compositions(m - t, s))


# ============================================================================
# Rank oracle
# ============================================================================

def rows_independent(ms: MatrixSet, query: RankQuery) -> bool:
    """
    True iff the vectors c_j^(i,m), 1 <= j <= d_i, are linearly independent.

    Raises DepthError if some C^(i) has fewer than d_i rows or m columns.
    """
    if len(query.composition) != ms.s:
        raise ValueError(f"Composition {query.composition} does not have s={ms.s} parts")
    total = query.total
    if total == 0:
        return True
    if total > query.m:
        return False
    rows = []
    for C, d in zip(ms.matrices, query.composition):
        if d:
            rows.extend(C.prefix(d, query.m))
    return is_independent(stack_rows(ms.field.GF, rows, query.m))


def minimal_T(ms: MatrixSet, m: int) -> int:
    """
    Smallest T valid at m, from an upward sweep over d = 1..m that stops at
    the first dependent composition.
    """
    if m > MAX_M:
        raise ValueError(f"Exhaustive sweep limited to m <= {MAX_M}, got {m}")
    if m > ms.rows or m > ms.cols:
        raise DepthError(f"T*({m}) needs {m}x{m} prefixes, matrices are {ms.rows}x{ms.cols}")
    for d in range(1, m + 1):
        for comp in compositions(d, ms.s):
            if not rows_independent(ms, RankQuery(m, comp)):
                logger.debug(f"m={m}: composition {comp} dependent")
                return m - (d - 1)
    return 0


def lemma2_quality(t: int, mu: int, m: int) -> int:
    """min(m, t + r(m)) with r(m) the least residue of m mod mu."""
    return min(m, t + m % mu)


def claimed_bound(variant: Variant, m: int, mu: int = 1, g: int = 0) -> int:
    """T(m) claimed for the construction: r(m); min(m, 2g + r(m)); min(m, g + r(m))."""
    if variant == Variant.GENUS0:
        return lemma2_quality(0, mu, m)
    if variant == Variant.GPOS:
        return lemma2_quality(2 * g, mu, m)
    return lemma2_quality(g, mu, m)


def quality_profile(ms: MatrixSet, m_max: int, variant: Optional[Variant] = None) -> QualityProfile:
    variant = variant or ms.variant
    profile = QualityProfile()
    for m in range(1, m_max + 1):
        profile.t_star[m] = minimal_T(ms, m)
        profile.bound[m] = claimed_bound(variant, m, ms.mu, ms.genus)
    return profile


def check_bound(ms: MatrixSet, m_max: int, variant: Optional[Variant] = None) -> BoundReport:
    """
    Assert T*(m) <= claimed bound for m = 1..m_max.

    Returns:
        BoundReport with one row per m and a message per violation
    """
    variant = variant or ms.variant
    logger.info(f"Checking {variant.value} bound for m <= {m_max} (q={ms.q}, s={ms.s}, mu={ms.mu}, g={ms.genus})")
    profile = quality_profile(ms, m_max, variant)
    rows = [BoundRow(m, profile.t_star[m], profile.bound[m]) for m in range(1, m_max + 1)]
    violations = [f"m={row.m}: T*={row.t_star} exceeds bound {row.bound}" for row in rows if row.margin < 0]
    if violations:
        logger.warning(f"Bound check failed at {len(violations)} value(s) of m")
    return BoundReport(passed=not violations, rows=rows, violations=violations)


def lemma2_violations(profile: QualityProfile, mu: int) -> List[str]:
    """m with T*(m) > T*(floor(m/mu) mu) + r(m), wherever both values are known."""
    out = []
    for m, t in sorted(profile.t_star.items()):
        base = (m // mu) * mu
        if base < 1 or base not in profile.t_star:
            continue
        if t > profile.t_star[base] + m % mu:
            out.append(f"m={m}: T*={t} exceeds T*({base}) + {m % mu} = {profile.t_star[base] + m % mu}")
    return out


def monotonicity_violations(ms: MatrixSet, m: int) -> List[str]:
    """
    Dependent compositions that become independent when one d_i grows;
    the elimination code is wrong if any exist.
    """
    out = []
    for d in range(1, m):
        for comp in compositions(d, ms.s):
            if rows_independent(ms, RankQuery(m, comp)):
                continue
            for i in range(ms.s):
                bigger = comp[:i] + (comp[i] + 1,) + comp[i + 1 :]
                if rows_independent(ms, RankQuery(m, bigger)):
                    out.append(f"m={m}: {comp} dependent but {bigger} independent")
    return out


# ============================================================================
# Equidistribution
# ============================================================================

def net_equidistribution(
    points: Sequence[Sequence[int]], q: int, m: int, shape: Sequence[int], t: int
) -> bool:
    """
    True iff every elementary interval of the given shape holds exactly q^t
    of the points.

    Args:
        points: q^m points as numerator tuples (x_i = y_i / q^m)
        q: Base
        m: Digits per coordinate
        shape: (e_1..e_s) with sum m - t
        t: Quality parameter
    """
    if len(points) != q**m:
        raise ValueError(f"Expected {q ** m} points, got {len(points)}")
    if sum(shape) != m - t:
        raise ValueError(f"Shape {tuple(shape)} does not sum to m - t = {m - t}")
    boxes = Counter(tuple(y // q ** (m - e) for y, e in zip(p, shape)) for p in points)
    return len(boxes) == q ** (m - t) and all(count == q**t for count in boxes.values())


def net_check(ms: MatrixSet, m: int, t: int, offset: int = 0) -> Dict[Tuple[int, ...], bool]:
    """Equidistribution result per admissible shape for block `offset` of q^m points."""
    pts = block_points(ms, offset, m)
    return {shape: net_equidistribution(pts, ms.q, m, shape, t) for shape in admissible_shapes(ms.s, m, t)}


# ============================================================================
# Linear independence of function-field elements
# ============================================================================

def independence_rank(elements: Sequence[Any], ff: FunctionField, pinf: Any, precision: int) -> int:
    """
    Rank of the matrix of expansion coefficients at P_inf.

    If some element has a pole at P_inf, every element is first multiplied
    by t^shift (t the local parameter, shift the largest pole order).

    Args:
        elements: Nonzero function-field elements
        ff: Backend
        pinf: Expansion place
        precision: Expansion terms per element

    Returns:
        Rank; equals len(elements) iff they are independent at this precision
    """
    if not elements:
        return 0
    shift = max(0, max(-ff.valuation(f, pinf) for f in elements))
    if shift:
        t = ff.local_parameter(pinf)
        elements = [f * t**shift for f in elements]
        logger.debug(f"Cleared poles at P_inf with t^{shift}")
    rows = [ff.expansion_digits(f, pinf, precision) for f in elements]
    r = rank(stack_rows(ff.field.GF, rows, precision * pinf.degree))
    if r < len(elements):
        logger.warning(
            f"Rank {r} < {len(elements)} at precision {precision}; raise the precision to rule out truncation"
        )
    return r
