"""
Construction Validation

Checks construction parameters before any element is built, and checks a
built system afterwards:
1. Place system (distinct rational places, P_inf of degree mu, backend match)
2. Auxiliary divisor (degree 2g, effective, support condition)
3. Valuation identities of every constructed element
4. Linear independence of the constructed family (plus the gap basis)
"""

import logging
from typing import TYPE_CHECKING, Any, List, Tuple

from .divisor import Divisor
from .netverify import independence_rank
from .types import PlaceError, ValidationReport, Variant

if TYPE_CHECKING:
    from .construct import BetaSystem, ConstructionParams

logger = logging.getLogger(__name__)

MAX_S = 8


# ============================================================================
# Parameter Validation
# ============================================================================

def _check_places(params: "ConstructionParams") -> List[str]:
    errors = []
    for k, P in enumerate(params.places, start=1):
        try:
            params.ff.check_place(P)
        except PlaceError as e:
            errors.append(f"P_{k}: {e}")
        else:
            if P.degree != 1:
                errors.append(f"P_{k} = {P} must be rational, has degree {P.degree}")
    try:
        params.ff.check_place(params.pinf)
    except PlaceError as e:
        errors.append(f"P_inf: {e}")

    if len(set(params.places)) != len(params.places):
        errors.append(f"Places P_1..P_s are not distinct: {list(params.places)}")
    if params.pinf in params.places:
        errors.append(f"P_inf = {params.pinf} coincides with one of P_1..P_s")
    return errors


def _check_divisor(params: "ConstructionParams") -> List[str]:
    errors = []
    D = params.D
    g = params.genus
    if D is None:
        return [f"Variant {params.variant.value} needs an auxiliary divisor D"]
    for P in D.support:
        try:
            params.ff.check_place(P)
        except PlaceError as e:
            errors.append(f"D: {e}")
    if D.degree != 2 * g:
        errors.append(f"deg(D) must be 2g = {2 * g}, got {D.degree}")
    if not D.is_effective():
        errors.append(f"D must be a positive divisor, got {D}")
    forbidden = {params.pinf, *params.places[1:]}
    clash = [P for P in D.support if P in forbidden]
    if clash:
        errors.append(f"supp(D) meets {{P_inf, P_2, ..., P_s}} at {clash}")
    return errors


def validate_params(params: "ConstructionParams") -> Tuple[bool, List[str]]:
    """
    Validate a construction parameter set.

    Args:
        params: Construction parameters

    Returns:
        (is_valid, errors)
    """
    errors: List[str] = []

    if params.s < 2:
        errors.append(f"s must be >= 2, got {params.s}")
    if params.s > MAX_S:
        errors.append(f"s must be <= {MAX_S}, got {params.s}")
    if params.mu < 1:
        errors.append(f"P_inf must have degree >= 1, got {params.mu}")

    errors.extend(_check_places(params))

    if params.variant == Variant.GENUS0:
        if params.genus != 0:
            errors.append(f"Variant genus0 needs a genus-0 backend, got genus {params.genus}")
        if params.D is not None and not params.D.is_zero():
            errors.append("Variant genus0 takes no auxiliary divisor")
    else:
        errors.extend(_check_divisor(params))
        if params.vandermonde:
            errors.append("Vandermonde mode exists only for the genus-0 construction")

    if params.variant == Variant.XING and params.mu != 1:
        errors.append(f"Variant xing needs a rational P_inf, got degree {params.mu}")

    if errors:
        logger.debug(f"Parameter validation found {len(errors)} problem(s)")
    return len(errors) == 0, errors


# ============================================================================
# System Validation
# ============================================================================

def _expect(violations: List[str], label: str, actual: Any, expected: Any, at_least: bool = False) -> None:
    ok = actual >= expected if at_least else actual == expected
    if not ok:
        relation = ">=" if at_least else "="
        violations.append(f"{label}: got {actual}, expected {relation} {expected}")


def validate_system(system: "BetaSystem", j_max: int = 5) -> ValidationReport:
    """
    Check the valuation identities and the linear independence of a system.

    Genus 0: nu_P1(b_j^1) = -j+1, nu_P2(b_j^1) = j-1, nu_Pi(b_j^i) = -j and
    nu_P1(b_j^i) = j. Positive genus: nu_P1(b_j^1) = -(j-1) - D(P_1),
    nu_Ph(b_j^l) >= 0 for h >= 2, h != l, nu_Pi(b_j^i) = -j and
    nu_P1(b_j^i) = j - D(P_1). Every element must be regular at P_inf. For
    xing the gap basis is checked as well.

    Args:
        system: Beta system to check
        j_max: Rows checked per coordinate

    Returns:
        ValidationReport listing each violated identity
    """
    params = system.params
    ff = params.ff
    P = params.places
    s = params.s
    D = params.D if params.D is not None else Divisor()
    d1 = D[P[0]]
    violations: List[str] = []
    checked = 0

    elements = []
    for i in range(1, s + 1):
        for j in range(1, j_max + 1):
            beta = system.beta(i, j)
            label = f"beta({i},{j})"
            if beta.is_zero():
                violations.append(f"{label} is zero")
                continue
            elements.append(beta)
            nu = {h: ff.valuation(beta, P[h - 1]) for h in range(1, s + 1)}

            if params.variant == Variant.GENUS0:
                if i == 1:
                    _expect(violations, f"nu_P1({label})", nu[1], -j + 1)
                    _expect(violations, f"nu_P2({label})", nu[2], j - 1)
                else:
                    _expect(violations, f"nu_P{i}({label})", nu[i], -j)
                    _expect(violations, f"nu_P1({label})", nu[1], j)
                checked += 2
            else:
                if i == 1:
                    _expect(violations, f"nu_P1({label})", nu[1], -(j - 1) - d1)
                else:
                    _expect(violations, f"nu_P{i}({label})", nu[i], -j)
                    _expect(violations, f"nu_P1({label})", nu[1], j - d1)
                    checked += 1
                checked += 1
                for h in range(2, s + 1):
                    if h != i:
                        _expect(violations, f"nu_P{h}({label})", nu[h], 0, at_least=True)
                        checked += 1

            _expect(violations, f"nu_Pinf({label})", ff.valuation(beta, params.pinf), 0, at_least=True)
            checked += 1

    if params.variant == Variant.XING:
        gaps = system.gaps
        numbers = [n for n, _ in gaps]
        if len(gaps) != params.genus:
            violations.append(f"Expected {params.genus} gap numbers, got {numbers}")
        if numbers != sorted(set(numbers)) or any(not 0 <= n < 2 * params.genus for n in numbers):
            violations.append(f"Gap numbers {numbers} not strictly increasing in [0, 2g)")
        checked += 2
        for f, (n, w) in enumerate(gaps, start=1):
            _expect(violations, f"nu_Pinf(w_{f})", ff.valuation(w, params.pinf), n)
            _expect(violations, f"nu_P1(w_{f})", ff.valuation(w, P[0]), 1 - d1, at_least=True)
            for h in range(2, s + 1):
                _expect(violations, f"nu_P{h}(w_{f})", ff.valuation(w, P[h - 1]), 0, at_least=True)
            checked += s + 1
            elements.append(w)

    precision = len(elements) + 2 * params.genus + 2
    r = independence_rank(elements, ff, params.pinf, precision)
    checked += 1
    if r != len(elements):
        violations.append(f"Family of {len(elements)} elements has rank {r} at precision {precision}")

    passed = len(violations) == 0
    if passed:
        logger.info(f"System validation passed: {checked} checks")
    else:
        logger.warning(f"System validation found {len(violations)} violation(s)")
    return ValidationReport(passed=passed, checked=checked, violations=violations)
