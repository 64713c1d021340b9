"""
Function field backend interface.

The three constructions are written once against this contract; the
genus-0 (rational function field) and genus-1 (elliptic curve) backends
implement it.
"""

from abc import ABC, abstractmethod
from typing import Any, List

import galois

from ..divisor import Divisor
from ..gf import FieldSpec


class FunctionField(ABC):
    """
    Abstract interface for a global function field with full constant field F_q.

    Implementations should provide:
    - Rational place enumeration and place degrees
    - Riemann-Roch bases L(D)
    - Valuations and local expansions at places
    """

    field: FieldSpec

    @property
    @abstractmethod
    def genus(self) -> int:
        """Genus of the function field."""
        pass

    @abstractmethod
    def describe(self) -> str:
        """Backend token used in params text (e.g. 'rational')."""
        pass

    @abstractmethod
    def rational_places(self) -> List[Any]:
        """
        Enumerate the places of degree 1 in canonical order.

        Returns:
            List of places
        """
        pass

    @abstractmethod
    def one(self) -> Any:
        """The constant function 1."""
        pass

    @abstractmethod
    def rr_basis(self, D: Divisor) -> List[Any]:
        """
        Compute a basis of the Riemann-Roch space L(D).

        Args:
            D: Divisor of this function field

        Returns:
            Basis in canonical order (empty when L(D) = {0})
        """
        pass

    @abstractmethod
    def valuation(self, f: Any, P: Any) -> int:
        """
        Valuation of a nonzero element at a place.

        Args:
            f: Nonzero element
            P: Place

        Returns:
            Order of vanishing (negative for poles)
        """
        pass

    @abstractmethod
    def expansion_digits(self, f: Any, P: Any, n_terms: int) -> galois.FieldArray:
        """
        Local expansion coefficients as F_q digits.

        The coefficients a_0, ..., a_{n_terms-1} of f = sum a_k z^k at P are each
        written as a vector of length deg(P) over the basis 1, x, ..., x^(deg P - 1)
        of the residue field, and concatenated.

        Args:
            f: Element with nonnegative valuation at P
            P: Place
            n_terms: Number of coefficients

        Returns:
            1-D FieldArray of length n_terms * deg(P)

        Raises:
            PoleError: If f has a pole at P
        """
        pass

    @abstractmethod
    def local_parameter(self, P: Any) -> Any:
        """The fixed local parameter at P as an element of the field."""
        pass

    def has_exact_pole(self, f: Any, P: Any, D: Divisor) -> bool:
        """True iff f, taken from L(D), attains the full pole order D(P) at P."""
        return self.valuation(f, P) == -D[P]
