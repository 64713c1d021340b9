"""
Data types shared across construction, generation and verification.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional


class Variant(str, Enum):
    """Which of the three constructions produced a matrix set."""
    GENUS0 = "genus0"
    GPOS = "gpos"
    XING = "xing"


class OutputMode(str, Enum):
    """How sequence points are rendered."""
    EXACT = "exact"
    BINARY64 = "binary64"


class CheckStatus(str, Enum):
    """Status of a selftest run."""
    COMPLETED = "completed"
    PARTIAL_FAILURE = "partial_failure"
    FAILED = "failed"


# ============================================================================
# Exceptions
# ============================================================================

class FFNetsError(Exception):
    """Base class for all errors raised by ffnets."""


class FieldError(FFNetsError, ValueError):
    """Invalid field parameters or elements from the wrong field."""


class PlaceError(FFNetsError, ValueError):
    """A place does not exist on the function field it is used with."""


class PoleError(FFNetsError, ValueError):
    """An expansion was requested at a place where the function has a forbidden pole."""


class PrecisionError(FFNetsError):
    """A series could not be computed to the requested depth."""


class ConstructionError(FFNetsError):
    """Invalid construction parameters or a violated construction invariant."""


class DepthError(FFNetsError, ValueError):
    """A matrix set is not generated deep enough for the request."""


class MatrixFormatError(FFNetsError, ValueError):
    """Malformed, tampered or unsupported matrix file."""


class ParseError(FFNetsError, ValueError):
    """Malformed text form of a parameter set, place, divisor, curve or element."""


# ============================================================================
# Result records
# ============================================================================

@dataclass
class ValidationReport:
    """Result of checking a beta system against the valuation lemmas."""
    passed: bool
    checked: int
    violations: List[str] = field(default_factory=list)


@dataclass
class BoundRow:
    """One line of a quality check: observed T*(m) against the claimed bound."""
    m: int
    t_star: int
    bound: int

    @property
    def margin(self) -> int:
        return self.bound - self.t_star


@dataclass
class BoundReport:
    """Result of check_bound over m = 1..m_max."""
    passed: bool
    rows: List[BoundRow]
    violations: List[str] = field(default_factory=list)


@dataclass
class CheckResult:
    """Result of a single selftest check."""
    check_id: str
    success: bool
    duration_ms: int
    detail: Optional[str] = None
    error: Optional[str] = None


@dataclass
class SelftestResult:
    """Result of a full selftest run."""
    success: bool
    status: CheckStatus
    checks_run: int
    checks_failed: int
    check_results: List[CheckResult]
    duration_ms: int
    error_summary: Optional[str] = None
