"""
Bundled Acceptance Suite

Runs a fixed list of checks, one after another, recording a CheckResult for
each and continuing past failures:
1. Field axioms for every q <= 9
2. Riemann-Roch dimensions (genus 0 and the reference curves)
3. Expansion linearity and valuation multiplicativity on random pairs
4. Pascal closed form and golden file for the F_2 genus-0 kit
5. Quality bounds of the genus-0, positive-genus and xing kits
6. Valuation identities and linear independence of every kit
7. Net property of the F_2 kit at block offsets 0, 1, 2
8. Rank oracle on triangular matrices and byte-identical rebuilds

Randomized checks use fixed seeds, so every run sees the same inputs.
"""

import logging
import math
import random
import time
from dataclasses import dataclass
from itertools import islice
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .construct import ConstructionParams, build_system, elliptic_kit, genus0_kit, standard_curves
from .divisor import Divisor
from .ellcurve import EllipticFunctionField, FuncEC
from .genmat import GenMatrix, MatrixSet, build_matrices, deserialize, serialize
from .gf import elem_index, field_of_order, index_elem
from .linalg import as_ints
from .netverify import check_bound, independence_rank, lemma2_violations, minimal_T, net_check, quality_profile
from .ratfunc import RatFunc, RationalFunctionField, poly_from_indices
from .types import CheckResult, CheckStatus, SelftestResult, Variant
from .validation import validate_system

logger = logging.getLogger(__name__)

SELFTEST_M = 8
SEED = 20240611

FIELD_ORDERS = (2, 3, 4, 5, 7, 8, 9)
GENUS0_KITS = ((2, 2, 1), (2, 3, 2), (3, 3, 1), (3, 4, 2), (5, 5, 1))
QUICK_GENUS0_KITS = GENUS0_KITS[:4]
QUICK_BUDGET_S = 30
ELLIPTIC_KITS = (("F2", 2), ("F3", 3))
DEFAULT_GOLDEN = Path(__file__).parent / "data" / "pascal_q2_8x8.txt"

CheckOutcome = Tuple[bool, str]


@dataclass(frozen=True)
class SelftestCheck:
    """One named check; `quick` checks also run in quick mode."""
    check_id: str
    run: Callable[[Dict[str, Any]], CheckOutcome]
    quick: bool = False


# ============================================================================
# Kits
# ============================================================================

def _kit_params(key: str) -> ConstructionParams:
    kind, *rest = key.split(":")
    if kind == "genus0":
        q, s, mu = (int(v) for v in rest)
        return genus0_kit(field_of_order(q), s, mu)
    name, s_text = rest
    return elliptic_kit(standard_curves()[name], int(s_text), Variant(kind))


def genus0_keys(quick: bool = False) -> List[str]:
    kits = QUICK_GENUS0_KITS if quick else GENUS0_KITS
    return [f"genus0:{q}:{s}:{mu}" for q, s, mu in kits]


def elliptic_keys(variant: Variant) -> List[str]:
    return [f"{variant.value}:{name}:{s}" for name, s in ELLIPTIC_KITS]


def kit_matrices(context: Dict[str, Any], key: str) -> MatrixSet:
    """Build (once per run) and round-trip through the file format, as verification always reads files."""
    cache = context.setdefault("matrices", {})
    if key not in cache:
        system = build_system(_kit_params(key))
        context.setdefault("systems", {})[key] = system
        text = serialize(build_matrices(system, SELFTEST_M, SELFTEST_M))
        context.setdefault("files", {})[key] = text
        cache[key] = deserialize(text)
    return cache[key]


def kit_system(context: Dict[str, Any], key: str) -> Any:
    kit_matrices(context, key)
    return context["systems"][key]


# ============================================================================
# Closed forms
# ============================================================================

def pascal_matrix(rows: int, cols: int, p: int) -> np.ndarray:
    """Entry (j, k) = binomial(j, k) mod p, j and k from 0."""
    return np.array([[math.comb(j, k) % p for k in range(cols)] for j in range(rows)], dtype=np.int64)


def load_golden(path: Union[str, Path]) -> np.ndarray:
    return np.loadtxt(path, dtype=np.int64, ndmin=2)


# ============================================================================
# Checks
# ============================================================================

def check_field_axioms(context: Dict[str, Any]) -> CheckOutcome:
    for q in FIELD_ORDERS:
        field = field_of_order(q)
        x = field.GF(np.arange(q))
        A, B, C = x[:, None, None], x[None, :, None], x[None, None, :]
        nonzero = x[1:]
        laws = {
            "additive associativity": (A + B) + C == A + (B + C),
            "multiplicative associativity": (A * B) * C == A * (B * C),
            "distributivity": A * (B + C) == A * B + A * C,
            "commutativity": (A + B == B + A) & (A * B == B * A),
            "identities": (x + field.zero() == x) & (x * field.one() == x),
            "additive inverses": x + (-x) == field.zero(),
            "multiplicative inverses": nonzero * nonzero**-1 == field.one(),
            "frobenius": x**q == x,
        }
        for law, holds in laws.items():
            if not np.all(holds):
                return False, f"{law} fails in {field}"
        if [elem_index(index_elem(field, n)) for n in range(q)] != list(range(q)):
            return False, f"Digit bijection of {field} is not the identity on indices"
        if any(field.element(field.coeffs(a)) != a for a in field.elements()):
            return False, f"Coefficient vectors of {field} do not round-trip"
    return True, f"{len(FIELD_ORDERS)} fields"


def check_rr_dimensions(context: Dict[str, Any]) -> CheckOutcome:
    rng = random.Random(SEED)
    checked = 0
    for q in (2, 3):
        ff = RationalFunctionField(field_of_order(q))
        places = ff.rational_places() + list(islice(ff.finite_places_of_degree(2), 2))
        for _ in range(25):
            D = Divisor({P: rng.randint(-2, 3) for P in rng.sample(places, 3)})
            got = len(ff.rr_basis(D))
            if got != max(0, D.degree + 1):
                return False, f"l({D}) = {got} over {ff.field}, expected {max(0, D.degree + 1)}"
            checked += 1

    for curve in standard_curves().values():
        ec = EllipticFunctionField(curve)
        places = ec.rational_places()
        for _ in range(10):
            D = Divisor()
            while D.degree < 1:
                D = Divisor({P: rng.randint(-1, 3) for P in places})
            got = len(ec.rr_basis(D))
            if got != D.degree:
                return False, f"l({D}) = {got} on {curve}, expected {D.degree}"
            checked += 1
    return True, f"{checked} divisors"


def _random_poly(rng: random.Random, field: Any, degree: int) -> Any:
    return poly_from_indices(field, [rng.randrange(field.q) for _ in range(degree + 1)])


def _random_ratfunc(rng: random.Random, ff: RationalFunctionField) -> RatFunc:
    while True:
        num = _random_poly(rng, ff.field, rng.randint(0, 3))
        den = _random_poly(rng, ff.field, rng.randint(0, 2))
        if den.degree > 0 or int(den.coeffs[0]):
            f = RatFunc.make(num, den)
            if not f.is_zero():
                return f


def _random_ecfunc(rng: random.Random, ec: EllipticFunctionField) -> FuncEC:
    while True:
        a = _random_poly(rng, ec.field, rng.randint(0, 2))
        b = _random_poly(rng, ec.field, rng.randint(0, 1))
        f = FuncEC.make(ec.curve, a, b)
        if not f.is_zero():
            return f


def _pair_check(ff: Any, f: Any, g: Any, P: Any, c: Any, depth: int) -> Optional[str]:
    if ff.valuation(f * g, P) != ff.valuation(f, P) + ff.valuation(g, P):
        return f"nu({f} * {g}) at {P} is not additive"
    if ff.valuation(f, P) >= 0 and ff.valuation(g, P) >= 0:
        lhs = ff.expansion_digits(f + g.scale(c), P, depth)
        rhs = ff.expansion_digits(f, P, depth) + c * ff.expansion_digits(g, P, depth)
        if not np.array_equal(as_ints(lhs), as_ints(rhs)):
            return f"Expansion of {f} + c*{g} at {P} is not linear"
    return None


def check_element_arithmetic(context: Dict[str, Any], genus0_pairs: int = 1000, curve_pairs: int = 40) -> CheckOutcome:
    rng = random.Random(SEED + 1)
    ff = RationalFunctionField(field_of_order(3))
    places = ff.rational_places() + list(islice(ff.finite_places_of_degree(2), 1))
    for _ in range(genus0_pairs):
        f, g = _random_ratfunc(rng, ff), _random_ratfunc(rng, ff)
        problem = _pair_check(ff, f, g, rng.choice(places), ff.field(rng.randrange(3)), 6)
        if problem:
            return False, problem

    for curve in standard_curves().values():
        ec = EllipticFunctionField(curve)
        places = ec.rational_places()
        for _ in range(curve_pairs // 2):
            f, g = _random_ecfunc(rng, ec), _random_ecfunc(rng, ec)
            problem = _pair_check(ec, f, g, rng.choice(places), ec.field(rng.randrange(ec.field.q)), 6)
            if problem:
                return False, problem
    return True, f"{genus0_pairs} genus-0 pairs, {curve_pairs} curve pairs"


def check_pascal_golden(context: Dict[str, Any]) -> CheckOutcome:
    ms = kit_matrices(context, "genus0:2:2:1")
    observed = as_ints(ms.matrix(1).prefix(8, 8).ravel()).reshape(8, 8)
    if not np.array_equal(observed, pascal_matrix(8, 8, 2)):
        return False, "C^(1) of the F_2 kit differs from the Pascal matrix mod 2"
    golden = load_golden(context.get("golden_path") or DEFAULT_GOLDEN)
    if golden.shape != (8, 8) or not np.array_equal(observed, golden):
        return False, "C^(1) of the F_2 kit differs from the golden file"
    return True, "8x8 prefix matches"


def _bound_outcome(context: Dict[str, Any], keys: List[str]) -> CheckOutcome:
    details = []
    for key in keys:
        ms = kit_matrices(context, key)
        report = check_bound(ms, SELFTEST_M)
        if not report.passed:
            return False, f"{key}: " + "; ".join(report.violations)
        details.append(f"{key} T*={[row.t_star for row in report.rows]}")
    return True, ", ".join(details)


def check_genus0_bounds(context: Dict[str, Any]) -> CheckOutcome:
    keys = genus0_keys(context.get("quick", False))
    ok, detail = _bound_outcome(context, keys)
    if not ok:
        return ok, detail
    for key in keys:
        ms = kit_matrices(context, key)
        violations = lemma2_violations(quality_profile(ms, SELFTEST_M), ms.mu)
        if violations:
            return False, f"{key}: " + "; ".join(violations)
    return True, detail


def check_mu2_remark(context: Dict[str, Any]) -> CheckOutcome:
    """s = q + 1 with a degree-2 P_inf: T* <= 0 for even m and <= 1 for odd m."""
    for q in (2, 3):
        key = f"genus0:{q}:{q + 1}:2"
        ms = kit_matrices(context, key)
        for m in range(1, SELFTEST_M + 1):
            t = minimal_T(ms, m)
            if t > m % 2:
                return False, f"{key}: T*({m}) = {t}"
    return True, "q in (2, 3)"


def check_gpos_bounds(context: Dict[str, Any]) -> CheckOutcome:
    return _bound_outcome(context, elliptic_keys(Variant.GPOS))


def check_xing_bounds(context: Dict[str, Any]) -> CheckOutcome:
    return _bound_outcome(context, elliptic_keys(Variant.XING))


def check_valuation_identities(context: Dict[str, Any]) -> CheckOutcome:
    keys = genus0_keys() + elliptic_keys(Variant.GPOS) + elliptic_keys(Variant.XING)
    checked = 0
    for key in keys:
        report = validate_system(kit_system(context, key), j_max=5)
        if not report.passed:
            return False, f"{key}: " + "; ".join(report.violations)
        checked += report.checked
    return True, f"{checked} identities over {len(keys)} kits"


def check_gap_independence(context: Dict[str, Any]) -> CheckOutcome:
    for key in elliptic_keys(Variant.XING):
        system = kit_system(context, key)
        params = system.params
        elements = [w for _, w in system.gaps]
        elements += [system.beta(i, j) for i in range(1, params.s + 1) for j in range(1, 4)]
        precision = len(elements) + 2 * params.genus + 2
        r = independence_rank(elements, params.ff, params.pinf, precision)
        if r != len(elements):
            return False, f"{key}: rank {r} for {len(elements)} elements"
    return True, "full rank on both curves"


def check_net_property(context: Dict[str, Any]) -> CheckOutcome:
    ms = kit_matrices(context, "genus0:2:2:1")
    for offset in (0, 1, 2):
        results = net_check(ms, 4, 0, offset)
        failed = [shape for shape, ok in results.items() if not ok]
        if failed:
            return False, f"Block {offset}: shapes {failed} not equidistributed"
    return True, "m=4, t=0, offsets 0..2"


def check_rank_oracle(context: Dict[str, Any]) -> CheckOutcome:
    rng = random.Random(SEED + 2)
    field = field_of_order(2)
    entries = np.zeros((SELFTEST_M, SELFTEST_M), dtype=np.int64)
    for j in range(SELFTEST_M):
        entries[j, j] = 1
        for k in range(j + 1, SELFTEST_M):
            entries[j, k] = rng.randrange(2)
    ms = MatrixSet(field, Variant.GENUS0, 1, 0, [GenMatrix(1, field.GF(entries))])
    for m in range(1, SELFTEST_M + 1):
        t = minimal_T(ms, m)
        if t != 0:
            return False, f"Triangular matrix has T*({m}) = {t}"
    return True, f"m <= {SELFTEST_M}"


def check_determinism(context: Dict[str, Any]) -> CheckOutcome:
    keys = genus0_keys() + elliptic_keys(Variant.GPOS) + elliptic_keys(Variant.XING)
    for key in keys:
        kit_matrices(context, key)
        rebuilt = serialize(build_matrices(build_system(_kit_params(key)), SELFTEST_M, SELFTEST_M))
        if rebuilt != context["files"][key]:
            return False, f"{key}: rebuild differs"
    return True, f"{len(keys)} kits rebuilt byte-identically"


CHECKS: List[SelftestCheck] = [
    SelftestCheck("field_axioms", check_field_axioms),
    SelftestCheck("rr_dimensions", check_rr_dimensions),
    SelftestCheck("element_arithmetic", check_element_arithmetic),
    SelftestCheck("pascal_golden", check_pascal_golden, quick=True),
    SelftestCheck("genus0_bounds", check_genus0_bounds, quick=True),
    SelftestCheck("mu2_remark", check_mu2_remark, quick=True),
    SelftestCheck("gpos_bounds", check_gpos_bounds),
    SelftestCheck("xing_bounds", check_xing_bounds),
    SelftestCheck("valuation_identities", check_valuation_identities),
    SelftestCheck("gap_independence", check_gap_independence),
    SelftestCheck("net_property", check_net_property, quick=True),
    SelftestCheck("rank_oracle", check_rank_oracle, quick=True),
    SelftestCheck("determinism", check_determinism),
]


# ============================================================================
# Runner
# ============================================================================

def run_check(check: SelftestCheck, context: Dict[str, Any]) -> CheckResult:
    """Run one check; exceptions count as failures."""
    start = time.time()
    try:
        success, detail = check.run(context)
        error = None if success else detail
    except Exception as e:
        logger.exception(f"Check {check.check_id} raised")
        success, detail, error = False, None, f"{type(e).__name__}: {e}"
    return CheckResult(
        check_id=check.check_id,
        success=success,
        duration_ms=int((time.time() - start) * 1000),
        detail=detail,
        error=error,
    )


def run_selftest(
    quick: bool = False,
    golden_path: Optional[Union[str, Path]] = None,
    checks: Optional[List[SelftestCheck]] = None,
) -> SelftestResult:
    """
    Run the acceptance suite.

    Args:
        quick: Run only the checks marked quick, with the genus-0 kits limited to q <= 3
        golden_path: Replacement for the bundled Pascal golden file
        checks: Replacement check list

    Returns:
        SelftestResult with one CheckResult per check run
    """
    start_time = time.time()
    selected = [c for c in (checks if checks is not None else CHECKS) if c.quick or not quick]
    context: Dict[str, Any] = {"golden_path": golden_path, "quick": quick}
    results: List[CheckResult] = []
    errors: List[str] = []

    for check in selected:
        logger.info(f"Running check {check.check_id}")
        result = run_check(check, context)
        results.append(result)
        if result.success:
            logger.info(f"Check {check.check_id} passed in {result.duration_ms} ms: {result.detail}")
        else:
            errors.append(f"{check.check_id}: {result.error}")
            logger.warning(f"Check {check.check_id} failed: {result.error}")

    elapsed = time.time() - start_time
    if quick and elapsed > QUICK_BUDGET_S:
        logger.warning(f"Quick selftest took {elapsed:.1f} s, budget is {QUICK_BUDGET_S} s")

    checks_failed = len(errors)
    if checks_failed == 0:
        status = CheckStatus.COMPLETED
    elif checks_failed < len(selected):
        status = CheckStatus.PARTIAL_FAILURE
    else:
        status = CheckStatus.FAILED

    return SelftestResult(
        success=checks_failed == 0,
        status=status,
        checks_run=len(selected),
        checks_failed=checks_failed,
        check_results=results,
        duration_ms=int(elapsed * 1000),
        error_summary="; ".join(errors) if errors else None,
    )
