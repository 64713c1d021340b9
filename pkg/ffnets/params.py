"""
Text forms of construction inputs.

Everything the command line accepts goes through here:

- fields: `p^e` or `p` (plus an optional `modulus=c0,c1,...`)
- curves: `elliptic:a1,a2,a3,a4,a6` (element indices) or a reference name (`F2`, `F3`)
- elements: sympy expressions in x (and y on curves); integers are read in the
  prime field, `a` is the power-basis generator of F_q
- places: `inf`, `poly:c0,...,cn` or a monic irreducible expression in x
  (genus 0); `O` or `(x0,y0)` (genus 1)
- divisors: `+`-separated `n*<place>` terms, `0` for the zero divisor
- parameter sets: whitespace-separated `key=value` tokens, missing keys taken
  from the default kit
"""

import logging
import re
from typing import Any, Dict, List, Mapping, Optional, Tuple

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)

from .construct import ConstructionParams, default_pinf, genus0_kit, standard_curves
from .divisor import Divisor
from .ellcurve import Curve, EllipticFunctionField, make_curve
from .genmat import sha16
from .gf import FieldSpec, field_of_order, make_field
from .interfaces.function_field import FunctionField
from .ratfunc import RationalFunctionField
from .types import FFNetsError, ParseError, Variant

logger = logging.getLogger(__name__)

PARAM_KEYS = ("variant", "q", "modulus", "backend", "s", "mu", "places", "pinf", "D", "vandermonde")

_TRANSFORMATIONS = standard_transformations + (implicit_multiplication, convert_xor)
_SYMBOLS = {name: sympy.Symbol(name) for name in ("x", "y", "a")}

_FIELD_PATTERN = re.compile(r"^(\d+)(?:\^(\d+))?$")
_POINT_PATTERN = re.compile(r"^\(\s*(\d+)\s*,\s*(\d+)\s*\)$")
_TERM_PATTERN = re.compile(r"^(-?\d+)\s*\*\s*(.+)$")


def _int_list(text: str, what: str) -> List[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise ParseError(f"Malformed {what}: {text!r}") from None


# ============================================================================
# Fields and curves
# ============================================================================

def parse_field_text(text: str, modulus: Optional[str] = None) -> FieldSpec:
    """
    Parse `p^e` or a prime power `q`.

    Args:
        text: Field order
        modulus: Optional `c0,c1,...` low-to-high coefficients of the modulus

    Returns:
        Validated FieldSpec
    """
    match = _FIELD_PATTERN.match(text.strip())
    if not match:
        raise ParseError(f"Field must be given as p^e or q, got {text!r}")
    coeffs = _int_list(modulus, "modulus") if modulus else None
    try:
        if match.group(2) is not None:
            return make_field(int(match.group(1)), int(match.group(2)), coeffs)
        field = field_of_order(int(match.group(1)))
        if coeffs is not None:
            field = make_field(field.p, field.e, coeffs)
        return field
    except FFNetsError as e:
        raise ParseError(str(e)) from e


def format_field(field: FieldSpec) -> str:
    return f"{field.p}^{field.e}"


def parse_curve(text: str, field: Optional[FieldSpec] = None) -> Curve:
    """
    Parse `[elliptic:]a1,a2,a3,a4,a6` over the given field, or a reference
    curve name. A reference curve fixes its own field; a conflicting field is
    an error.
    """
    body = text.strip()
    if body.startswith("elliptic:"):
        body = body[len("elliptic:") :]
    named = standard_curves()
    if body in named:
        curve = named[body]
        if field is not None and field != curve.field:
            raise ParseError(f"Curve {body} lives over {curve.field}, not {field}")
        return curve
    if field is None:
        raise ParseError(f"Curve {text!r} needs a field")
    coeffs = _int_list(body, "curve coefficients")
    if len(coeffs) != 5:
        raise ParseError(f"Curve needs five coefficients a1,a2,a3,a4,a6, got {body!r}")
    try:
        return make_curve(field, *coeffs)
    except FFNetsError as e:
        raise ParseError(str(e)) from e


def format_backend(ff: FunctionField) -> str:
    if isinstance(ff, EllipticFunctionField):
        return "elliptic:" + ff.curve.describe()
    return "rational"


# ============================================================================
# Elements
# ============================================================================

def _to_element(expr: sympy.Expr, ff: FunctionField) -> Any:
    field = ff.field
    if expr.is_Integer:
        return ff.constant(field.integer(int(expr)))
    if expr.is_Rational:
        den = field.integer(int(expr.q))
        if int(den) == 0:
            raise ParseError(f"Denominator {expr.q} vanishes in characteristic {field.p}")
        return ff.constant(field.integer(int(expr.p)) / den)
    if expr.is_Symbol:
        name = str(expr)
        if name == "x":
            return ff.x()
        if name == "y":
            if not isinstance(ff, EllipticFunctionField):
                raise ParseError("The symbol y exists only on a curve")
            return ff.y()
        if name == "a":
            if field.e == 1:
                raise ParseError(f"The generator a is undefined over the prime field {field}")
            return ff.constant(field.generator())
        raise ParseError(f"Unknown symbol {name!r}")
    if expr.is_Add:
        total = ff.zero()
        for arg in expr.args:
            total = total + _to_element(arg, ff)
        return total
    if expr.is_Mul:
        product = ff.one()
        for arg in expr.args:
            product = product * _to_element(arg, ff)
        return product
    if expr.is_Pow:
        exponent = expr.exp.doit()
        if not exponent.is_Integer:
            raise ParseError(f"Exponent {expr.exp} is not an integer")
        return _to_element(expr.base, ff) ** int(exponent)
    raise ParseError(f"Unsupported expression {expr}")


def parse_element(text: str, ff: FunctionField) -> Any:
    """
    Parse a function-field element.

    Arithmetic happens in the function field itself (the expression is not
    simplified over Q first), so `x/2` is rejected over F_2.

    Raises:
        ParseError: malformed text, unknown symbols or division by zero
    """
    try:
        expr = parse_expr(text, local_dict=dict(_SYMBOLS), transformations=_TRANSFORMATIONS, evaluate=False)
    except Exception as e:
        raise ParseError(f"Cannot parse element {text!r}: {e}") from e
    try:
        return _to_element(expr, ff)
    except ZeroDivisionError as e:
        raise ParseError(f"Element {text!r} divides by zero") from e


# ============================================================================
# Places and divisors
# ============================================================================

def parse_place(text: str, ff: FunctionField) -> Any:
    """Parse a place of the given backend."""
    body = text.strip()
    if isinstance(ff, EllipticFunctionField):
        if body == "O":
            return ff.infinity()
        match = _POINT_PATTERN.match(body)
        if not match:
            raise ParseError(f"Curve places are O or (x0,y0), got {text!r}")
        try:
            return ff.point(int(match.group(1)), int(match.group(2)))
        except FFNetsError as e:
            raise ParseError(str(e)) from e

    if not isinstance(ff, RationalFunctionField):
        raise ParseError(f"No place syntax for backend {ff.describe()}")
    if body == "inf":
        return ff.infinite_place()
    try:
        if body.startswith("poly:"):
            return ff.place(tuple(_int_list(body[len("poly:") :], "place polynomial")))
        f = parse_element(body, ff)
        if f.den.degree != 0:
            raise ParseError(f"Place {text!r} is not a polynomial")
        return ff.place(f.num)
    except ParseError:
        raise
    except FFNetsError as e:
        raise ParseError(str(e)) from e


def format_place(P: Any) -> str:
    return str(P)


def _split_terms(text: str) -> List[str]:
    """Split on `+` outside parentheses."""
    terms, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            terms.append("".join(current))
            current = []
        else:
            current.append(ch)
    terms.append("".join(current))
    return [t.strip() for t in terms]


def parse_divisor(text: str, ff: FunctionField) -> Divisor:
    """
    Parse `n1*P1 + n2*P2 + ...`. Genus-0 places must use the `inf` or
    `poly:` forms here, since `+` separates terms.
    """
    body = text.strip()
    if body == "0":
        return Divisor()
    D = Divisor()
    for term in _split_terms(body):
        if not term:
            raise ParseError(f"Empty term in divisor {text!r}")
        match = _TERM_PATTERN.match(term)
        if match:
            n, place_text = int(match.group(1)), match.group(2)
        elif term.startswith("-"):
            n, place_text = -1, term[1:]
        else:
            n, place_text = 1, term
        D = D + Divisor.of(parse_place(place_text, ff), n)
    return D


def format_divisor(D: Divisor) -> str:
    if D.is_zero():
        return "0"
    return "+".join(f"{n}*{P}" for P, n in sorted(D.items(), key=lambda item: str(item[0])))


# ============================================================================
# Parameter sets
# ============================================================================

def tokenize_params(text: str) -> Dict[str, str]:
    """Split `key=value` tokens; unknown or repeated keys are errors."""
    values: Dict[str, str] = {}
    for token in text.split():
        key, sep, value = token.partition("=")
        if not sep or not value:
            raise ParseError(f"Expected key=value, got {token!r}")
        if key not in PARAM_KEYS:
            raise ParseError(f"Unknown parameter {key!r}; expected one of {', '.join(PARAM_KEYS)}")
        if key in values:
            raise ParseError(f"Parameter {key!r} given twice")
        values[key] = value
    return values


def _parse_int(values: Mapping[str, str], key: str) -> Optional[int]:
    if key not in values:
        return None
    try:
        return int(values[key])
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {values[key]!r}") from None


def _parse_flag(text: str) -> bool:
    if text.lower() in ("1", "true", "yes"):
        return True
    if text.lower() in ("0", "false", "no"):
        return False
    raise ParseError(f"Expected a boolean, got {text!r}")


def _backend(values: Mapping[str, str], variant: Variant) -> FunctionField:
    backend = values.get("backend", "rational" if variant == Variant.GENUS0 else None)
    if backend is None:
        raise ParseError(f"Variant {variant.value} needs backend=elliptic:<a1,a2,a3,a4,a6>")
    field = parse_field_text(values["q"], values.get("modulus")) if "q" in values else None
    if backend == "rational":
        return RationalFunctionField(field or make_field(2))
    if not backend.startswith("elliptic:"):
        raise ParseError(f"Unknown backend {backend!r}")
    return EllipticFunctionField(parse_curve(backend, field))


def _default_places(ff: FunctionField, s: int, mu: int, pinf: Optional[Any]) -> Tuple[Any, ...]:
    try:
        if isinstance(ff, RationalFunctionField):
            return genus0_kit(ff.field, s, mu, pinf=pinf).places
        affine = ff.rational_places()[1:]
        if s > len(affine):
            raise ParseError(f"{ff.describe()} has {len(affine)} affine rational points, s={s} requested")
        return tuple(affine[:s])
    except ParseError:
        raise
    except FFNetsError as e:
        raise ParseError(str(e)) from e


def params_from_mapping(values: Mapping[str, str]) -> ConstructionParams:
    """
    Build construction parameters from key=value pairs.

    Defaults: variant genus0, q 2, backend rational (genus0) or required
    (gpos/xing), s 2 (or the number of places), mu 1, the kit places,
    P_inf the first unused monic irreducible of degree mu (genus 0) or O
    (curves), D = 2g P_1.

    Returns:
        ConstructionParams (not yet validated; build_system validates)
    """
    try:
        variant = Variant(values.get("variant", Variant.GENUS0.value))
    except ValueError:
        raise ParseError(f"Unknown variant {values['variant']!r}") from None

    ff = _backend(values, variant)
    s = _parse_int(values, "s")
    mu = _parse_int(values, "mu")
    vandermonde = _parse_flag(values.get("vandermonde", "0"))

    places = None
    if "places" in values:
        places = tuple(parse_place(t, ff) for t in values["places"].split(";"))
        if s is not None and s != len(places):
            raise ParseError(f"s={s} but {len(places)} places given")
    s = s if s is not None else (len(places) if places else 2)

    pinf = parse_place(values["pinf"], ff) if "pinf" in values else None
    if pinf is not None and mu is not None and pinf.degree != mu:
        raise ParseError(f"mu={mu} but P_inf = {pinf} has degree {pinf.degree}")
    if isinstance(ff, EllipticFunctionField) and (mu or 1) != 1:
        raise ParseError("Curve backends support only a rational P_inf (mu=1)")
    mu = mu if mu is not None else (pinf.degree if pinf is not None else 1)

    if places is None:
        places = _default_places(ff, s, mu, pinf)
    if pinf is None:
        if isinstance(ff, RationalFunctionField):
            try:
                pinf = default_pinf(ff, places, mu)
            except FFNetsError as e:
                raise ParseError(str(e)) from e
        else:
            pinf = ff.infinity()

    D = parse_divisor(values["D"], ff) if "D" in values else None
    if D is None and variant != Variant.GENUS0:
        D = Divisor.of(places[0], 2 * ff.genus)

    logger.debug(f"Parsed params: variant={variant.value}, {ff.describe()}, s={s}, mu={mu}")
    return ConstructionParams(variant, ff, places, pinf, D, vandermonde)


def parse_params(text: str) -> ConstructionParams:
    """Parse the whitespace-separated key=value form."""
    return params_from_mapping(tokenize_params(text))


def format_params(params: ConstructionParams) -> str:
    """Canonical text form; parse_params(format_params(p)) rebuilds p."""
    field = params.field
    parts = [f"variant={params.variant.value}", f"q={format_field(field)}"]
    if field.e > 1 and field.modulus is not None:
        parts.append("modulus=" + ",".join(str(c) for c in field.modulus))
    parts.append(f"backend={format_backend(params.ff)}")
    parts.append(f"s={params.s}")
    parts.append(f"mu={params.mu}")
    parts.append("places=" + ";".join(format_place(P) for P in params.places))
    parts.append(f"pinf={format_place(params.pinf)}")
    if params.D is not None:
        parts.append(f"D={format_divisor(params.D)}")
    parts.append(f"vandermonde={int(params.vandermonde)}")
    return " ".join(parts)


def params_digest(params: ConstructionParams) -> str:
    """SHA-256 prefix of format_params; the `digest=` token of matrix files."""
    return sha16(format_params(params))
