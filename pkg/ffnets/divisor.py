"""
Divisors: finite formal integer combinations of places.

Shared by both backends; a place only needs to be hashable and to expose a
`degree` attribute.
"""

from typing import Dict, Generic, Iterator, Mapping, Optional, Protocol, Tuple, TypeVar


class _HasDegree(Protocol):
    @property
    def degree(self) -> int: ...


P = TypeVar("P", bound=_HasDegree)


class Divisor(Generic[P]):
    """
    A divisor D = n_1 P_1 + ... + n_k P_k with distinct places and nonzero n_i.

    Zero coefficients are dropped on construction, so equal divisors compare
    equal regardless of how they were built.
    """

    __slots__ = ("_d",)

    def __init__(self, terms: Optional[Mapping[P, int]] = None) -> None:
        self._d: Dict[P, int] = {place: int(n) for place, n in (terms or {}).items() if n}

    @classmethod
    def of(cls, place: P, n: int = 1) -> "Divisor[P]":
        return cls({place: n})

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    @property
    def support(self) -> Tuple[P, ...]:
        return tuple(self._d)

    @property
    def degree(self) -> int:
        return sum(n * place.degree for place, n in self._d.items())

    def __getitem__(self, place: P) -> int:
        return self._d.get(place, 0)

    def items(self) -> Iterator[Tuple[P, int]]:
        return iter(self._d.items())

    def is_zero(self) -> bool:
        return not self._d

    def is_effective(self) -> bool:
        return all(n > 0 for n in self._d.values())

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other: "Divisor[P]") -> "Divisor[P]":
        terms = dict(self._d)
        for place, n in other._d.items():
            terms[place] = terms.get(place, 0) + n
        return Divisor(terms)

    def __neg__(self) -> "Divisor[P]":
        return Divisor({place: -n for place, n in self._d.items()})

    def __sub__(self, other: "Divisor[P]") -> "Divisor[P]":
        return self + (-other)

    def __mul__(self, k: int) -> "Divisor[P]":
        return Divisor({place: k * n for place, n in self._d.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Divisor):
            return NotImplemented
        return self._d == other._d

    def __hash__(self) -> int:
        return hash(frozenset(self._d.items()))

    def __repr__(self) -> str:
        if not self._d:
            return "0"
        return " + ".join(f"{n}*{place}" for place, n in self._d.items())


def divisor_degree(D: Divisor) -> int:
    """Sum of coefficient times place degree."""
    return D.degree
