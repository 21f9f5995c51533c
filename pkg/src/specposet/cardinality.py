"""Cardinal numbers restricted to finite n, aleph-null and the continuum."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce, total_ordering


class Kind(enum.IntEnum):
    FINITE = 0
    ALEPH0 = 1
    CONTINUUM = 2


@total_ordering
@dataclass(frozen=True)
class Cardinality:
    kind: Kind
    n: int = 0

    def __post_init__(self):
        if self.kind is Kind.FINITE:
            if not isinstance(self.n, int) or self.n < 0:
                raise ValueError(f"finite cardinality must be a nonnegative int, got {self.n!r}")
        elif self.n != 0:
            raise ValueError("only finite cardinalities carry a count")

    @classmethod
    def finite(cls, n: int) -> Cardinality:
        return cls(Kind.FINITE, n)

    @property
    def is_finite(self) -> bool:
        return self.kind is Kind.FINITE

    @property
    def is_infinite(self) -> bool:
        return self.kind is not Kind.FINITE

    def _key(self):
        return (int(self.kind), self.n)

    def __lt__(self, other):
        if not isinstance(other, Cardinality):
            return NotImplemented
        return self._key() < other._key()

    def __add__(self, other):
        return cardinal_sum(self, other)

    def capped(self, cap: Cardinality) -> Cardinality:
        return min(self, cap)

    def __str__(self):
        if self.kind is Kind.FINITE:
            return str(self.n)
        return "ℵ0" if self.kind is Kind.ALEPH0 else "𝔠"

    def __repr__(self):
        if self.kind is Kind.FINITE:
            return f"Finite({self.n})"
        return "Aleph0" if self.kind is Kind.ALEPH0 else "Continuum"

    def to_json(self):
        if self.kind is Kind.FINITE:
            return self.n
        return "aleph0" if self.kind is Kind.ALEPH0 else "continuum"

    @classmethod
    def from_json(cls, value) -> Cardinality:
        if isinstance(value, bool):
            raise ValueError(f"not a cardinality: {value!r}")
        if isinstance(value, int):
            return cls.finite(value)
        if value == "aleph0":
            return ALEPH0
        if value == "continuum":
            return CONTINUUM
        raise ValueError(f"not a cardinality: {value!r}")


ONE = Cardinality.finite(1)
ALEPH0 = Cardinality(Kind.ALEPH0)
CONTINUUM = Cardinality(Kind.CONTINUUM)


def cardinal_sum(a: Cardinality, b: Cardinality) -> Cardinality:
    if a.is_finite and b.is_finite:
        return Cardinality.finite(a.n + b.n)
    return max(a, b)


def cardinal_max(a: Cardinality, b: Cardinality) -> Cardinality:
    return max(a, b)


def total(cards) -> Cardinality:
    return reduce(cardinal_sum, cards, Cardinality.finite(0))
