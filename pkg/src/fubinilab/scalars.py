"""Prime fields F_p and exact rationals."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BoundExceeded, NonPrimeCharacteristic

#: Exact rationals; ``fractions.Fraction`` keeps canonical form after every operation.
Rational = Fraction

DEFAULT_FIELD_BOUND = 7


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class Field:
    """The prime field F_p with total operation tables."""

    p: int
    add: tuple = field(repr=False, compare=False)
    mul: tuple = field(repr=False, compare=False)
    neg: tuple = field(repr=False, compare=False)
    inv: tuple = field(repr=False, compare=False)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def elements(self) -> range:
        return range(self.p)

    def __len__(self) -> int:
        return self.p

    def __str__(self) -> str:
        return f"F{self.p}"


def field_new(p: int, bound: int = DEFAULT_FIELD_BOUND) -> Field:
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if p > bound:
        raise BoundExceeded(f"characteristic {p} above bound {bound}")
    els = range(p)
    add = tuple(tuple((a + b) % p for b in els) for a in els)
    mul = tuple(tuple((a * b) % p for b in els) for a in els)
    neg = tuple((-a) % p for a in els)
    # inv[0] is never consulted; 0 keeps the table total over elements
    inv = (0,) + tuple(pow(a, -1, p) for a in range(1, p))
    return Field(p, add, mul, neg, inv)


F2 = field_new(2)
