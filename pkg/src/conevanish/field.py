"""Exact coefficient fields: the rationals and prime fields F_p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class Field:
    """Either the rationals (``p == 0``) or the prime field with ``p`` elements.

    Elements of F_p are plain ints in ``[0, p)``; elements of Q are
    :class:`fractions.Fraction`.
    """

    p: int = 0

    def __post_init__(self):
        if self.p:
            if not is_prime(self.p):
                raise FieldError(f"{self.p} is not prime")
            if self.p >= 2**31:
                raise FieldError(f"prime modulus {self.p} must be below 2^31")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @property
    def is_prime_field(self) -> bool:
        return self.p != 0

    @property
    def characteristic(self) -> int:
        return self.p

    def __str__(self) -> str:
        return f"F{self.p}" if self.p else "Q"

    def __call__(self, value):
        """Coerce an int or Fraction into this field."""
        if self.p:
            if isinstance(value, Fraction):
                den = value.denominator % self.p
                if den == 0:
                    raise ZeroDivisionError(f"denominator {value.denominator} vanishes mod {self.p}")
                return value.numerator * pow(den, -1, self.p) % self.p
            return int(value) % self.p
        return Fraction(value)

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return 1 / a

    def format(self, a) -> str:
        if self.p:
            return str(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def to_json(self, a):
        return a if self.p else self.format(a)


QQ = Field(0)
