"""Exact coefficient rings: Z, Q, F_p and Z/m.

Elements are plain Python ints (Z, F_p, Z/m, always reduced) or Fractions (Q).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional

from .errors import BadParameters, NonFieldCoefficients


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(m: int) -> Optional[tuple]:
    """Return (p, n) with m = p^n, or None."""
    if m < 2:
        return None
    p = 2
    while p * p <= m and m % p:
        p += 1
    if m % p:
        p = m
    n, r = 0, m
    while r % p == 0:
        r //= p
        n += 1
    return (p, n) if r == 1 else None


@dataclass(frozen=True)
class CoefficientRing:
    kind: str  # "Z", "Q", "Fp", "Zmod"
    modulus: int = 0

    def __post_init__(self):
        if self.kind == "Fp":
            if not is_prime(self.modulus):
                raise BadParameters(f"{self.modulus} is not prime")
        elif self.kind == "Zmod":
            if self.modulus < 2:
                raise BadParameters("Z/m needs m >= 2")
        elif self.kind in ("Z", "Q"):
            if self.modulus:
                raise BadParameters("Z and Q take no modulus")
        else:
            raise BadParameters(f"unknown coefficient ring {self.kind!r}")

    # construction helpers
    @staticmethod
    def integers() -> "CoefficientRing":
        return CoefficientRing("Z")

    @staticmethod
    def rationals() -> "CoefficientRing":
        return CoefficientRing("Q")

    @staticmethod
    def prime_field(p: int) -> "CoefficientRing":
        return CoefficientRing("Fp", p)

    @staticmethod
    def integers_mod(m: int) -> "CoefficientRing":
        return CoefficientRing("Zmod", m)

    # structure
    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "Fp") or (self.kind == "Zmod" and is_prime(self.modulus))

    @property
    def is_finite(self) -> bool:
        return self.kind in ("Fp", "Zmod")

    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind in ("Fp", "Zmod") else 0

    @property
    def order(self) -> Optional[int]:
        return self.modulus if self.is_finite else None

    def __str__(self) -> str:
        if self.kind == "Fp":
            return f"Fp({self.modulus})"
        if self.kind == "Zmod":
            return f"Zmod({self.modulus})"
        return self.kind

    def as_field(self) -> "CoefficientRing":
        """The same ring tagged as a field when it is one (Z/p -> F_p)."""
        if self.kind == "Zmod" and is_prime(self.modulus):
            return CoefficientRing("Fp", self.modulus)
        return self

    # arithmetic
    def __call__(self, c) -> object:
        if self.kind == "Q":
            return Fraction(c)
        if isinstance(c, Fraction):
            if self.kind == "Z":
                if c.denominator != 1:
                    raise ValueError(f"{c} is not an integer")
                return int(c)
            return (c.numerator * pow(c.denominator, -1, self.modulus)) % self.modulus
        c = int(c)
        if self.kind == "Z":
            return c
        return c % self.modulus

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def add(self, a, b):
        r = a + b
        return r % self.modulus if self.modulus else r

    def sub(self, a, b):
        r = a - b
        return r % self.modulus if self.modulus else r

    def mul(self, a, b):
        r = a * b
        return r % self.modulus if self.modulus else r

    def neg(self, a):
        return (-a) % self.modulus if self.modulus else -a

    def is_unit(self, a) -> bool:
        if self.kind == "Q":
            return a != 0
        if self.kind == "Z":
            return a in (1, -1)
        return gcd(a, self.modulus) == 1

    def inv(self, a):
        if self.kind == "Q":
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return 1 / Fraction(a)
        if self.kind == "Z":
            if a in (1, -1):
                return a
            raise ZeroDivisionError(f"{a} is not a unit in Z")
        if gcd(a, self.modulus) != 1:
            raise ZeroDivisionError(f"{a} is not a unit mod {self.modulus}")
        return pow(a, -1, self.modulus)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def require_field(self, what: str = "operation") -> None:
        if not self.is_field:
            raise NonFieldCoefficients(f"{what} needs field coefficients, got {self}")

    def elements(self) -> Iterator[int]:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return iter(range(self.modulus))

    def to_str(self, a) -> str:
        return str(a)

    def parse_element(self, s: str):
        return self(Fraction(s))


ZZ = CoefficientRing("Z")
QQ = CoefficientRing("Q")


def GF(p: int) -> CoefficientRing:
    return CoefficientRing("Fp", p)


def Zmod(m: int) -> CoefficientRing:
    return CoefficientRing("Zmod", m)
