"""Exact coefficient fields: arbitrary-precision rationals and prime fields F_p.

Every homological computation in the engine reduces to linear algebra over one
of these fields.  Values are plain hashable Python objects (Fraction or int) so
they can key dictionaries; the field object supplies the arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


class Rationals:
    """The field of exact rational numbers."""

    name = "Q"

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, num, den):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return Fraction(num, den)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b

    def is_zero(self, a):
        return a == 0

    @staticmethod
    def cost(a):
        """Pivot-selection cost: bit size of the fraction (smaller is better)."""
        return a.numerator.bit_length() + a.denominator.bit_length()

    def to_str(self, a):
        return str(a)

    def __repr__(self):
        return "Rationals()"


class PrimeField:
    """F_p for a prime p; values are ints reduced mod p."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"Fp:{p}"
        self.zero = 0
        self.one = 1

    def from_int(self, n):
        return n % self.p

    def from_fraction(self, num, den):
        return self.mul(self.from_int(num), self.inv(self.from_int(den)))

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.p == 0

    @staticmethod
    def cost(a):
        return 1

    def to_str(self, a):
        return str(a)

    def __repr__(self):
        return f"PrimeField({self.p})"


RATIONALS = Rationals()

DEFAULT_PRIME = 2147483629
FALLBACK_PRIME = 2147483647


def field_from_spec(spec: str):
    """Parse a backend spec: "Q" or "Fp:<prime>"."""
    if spec == "Q":
        return RATIONALS
    if spec.startswith("Fp:"):
        return PrimeField(int(spec[3:]))
    if spec == "Fp":
        return PrimeField(DEFAULT_PRIME)
    raise ValueError(f"unknown field spec {spec!r}")
