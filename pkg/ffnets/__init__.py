"""
ffnets - Digital (T,s)-sequences from global function fields

Builds generating matrices over F_q from the rational function field and
from elliptic function fields, produces sequence points, and verifies the
quality parameter exhaustively.
"""

__version__ = "0.1.0"

# Core types
from .types import (
    Variant,
    OutputMode,
    CheckStatus,
    FFNetsError,
    FieldError,
    PlaceError,
    PoleError,
    PrecisionError,
    ConstructionError,
    DepthError,
    MatrixFormatError,
    ParseError,
    ValidationReport,
    BoundRow,
    BoundReport,
    CheckResult,
    SelftestResult,
)

# Algebra
from .gf import FieldSpec, make_field, field_of_order
from .divisor import Divisor
from .series import LaurentSeries
from .ratfunc import PlaceG0, RatFunc, RationalFunctionField
from .ellcurve import Curve, PlaceEC, FuncEC, EllipticFunctionField, make_curve

# Interfaces for extension
from .interfaces import FunctionField

# Construction
from .construct import (
    ConstructionParams,
    BetaSystem,
    build_system,
    vandermonde_generators,
    genus0_kit,
    elliptic_kit,
    standard_curves,
)
from .validation import validate_params, validate_system

# Matrices and points
from .genmat import (
    GenMatrix,
    MatrixSet,
    build_matrices,
    z_matrix,
    z_coefficients,
    serialize,
    deserialize,
    save_matrix_set,
    load_matrix_set,
)
from .seqgen import PointRequest, point, points, block_points, format_point

# Verification
from .netverify import (
    RankQuery,
    QualityProfile,
    rows_independent,
    minimal_T,
    claimed_bound,
    quality_profile,
    check_bound,
    net_equidistribution,
    net_check,
    independence_rank,
)

# Text forms
from .params import parse_params, format_params, params_digest, parse_element, parse_place, parse_divisor

# Selftest
from .selftest import run_selftest

__all__ = [
    "__version__",
    # Types
    "Variant",
    "OutputMode",
    "CheckStatus",
    "FFNetsError",
    "FieldError",
    "PlaceError",
    "PoleError",
    "PrecisionError",
    "ConstructionError",
    "DepthError",
    "MatrixFormatError",
    "ParseError",
    "ValidationReport",
    "BoundRow",
    "BoundReport",
    "CheckResult",
    "SelftestResult",
    # Algebra
    "FieldSpec",
    "make_field",
    "field_of_order",
    "Divisor",
    "LaurentSeries",
    "PlaceG0",
    "RatFunc",
    "RationalFunctionField",
    "Curve",
    "PlaceEC",
    "FuncEC",
    "EllipticFunctionField",
    "make_curve",
    # Interfaces
    "FunctionField",
    # Construction
    "ConstructionParams",
    "BetaSystem",
    "build_system",
    "vandermonde_generators",
    "genus0_kit",
    "elliptic_kit",
    "standard_curves",
    "validate_params",
    "validate_system",
    # Matrices and points
    "GenMatrix",
    "MatrixSet",
    "build_matrices",
    "z_matrix",
    "z_coefficients",
    "serialize",
    "deserialize",
    "save_matrix_set",
    "load_matrix_set",
    "PointRequest",
    "point",
    "points",
    "block_points",
    "format_point",
    # Verification
    "RankQuery",
    "QualityProfile",
    "rows_independent",
    "minimal_T",
    "claimed_bound",
    "quality_profile",
    "check_bound",
    "net_equidistribution",
    "net_check",
    "independence_rank",
    # Text forms
    "parse_params",
    "format_params",
    "params_digest",
    "parse_element",
    "parse_place",
    "parse_divisor",
    # Selftest
    "run_selftest",
]
