"""Exact commutative coefficient rings: arbitrary-precision rationals and Z/m.

All core arithmetic in the package runs over one of these rings; there is no
floating point anywhere in the computational path.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Any

Scalar = Any  # Fraction for the rationals, int for Z/m


class RingError(ValueError):
    """Domain error in ring arithmetic (non-unit inversion, bad modulus...)."""


class Ring:
    """Common interface of the exact coefficient rings."""

    kind: str

    def zero(self) -> Scalar:
        raise NotImplementedError

    def one(self) -> Scalar:
        raise NotImplementedError

    def from_int(self, k: int) -> Scalar:
        raise NotImplementedError

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        raise NotImplementedError

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        raise NotImplementedError

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        raise NotImplementedError

    def neg(self, a: Scalar) -> Scalar:
        raise NotImplementedError

    def is_zero(self, a: Scalar) -> bool:
        raise NotImplementedError

    def is_unit(self, a: Scalar) -> bool:
        raise NotImplementedError

    def inv(self, a: Scalar) -> Scalar:
        raise NotImplementedError

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def parse(self, text: str) -> Scalar:
        raise NotImplementedError

    def fmt(self, a: Scalar) -> str:
        return str(a)

    # random element generators; `rng` is a random.Random
    def rand(self, rng, span: int = 6) -> Scalar:
        raise NotImplementedError

    def rand_unit(self, rng, span: int = 6) -> Scalar:
        x = self.rand(rng, span)
        while not self.is_unit(x):
            x = self.rand(rng, span)
        return x

    def __repr__(self) -> str:
        return self.kind


class Rationals(Ring):
    """The field Q with Fraction scalars (normalized, coprime, exact)."""

    kind = "rationals"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, k):
        return Fraction(k)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise RingError("0 is not invertible in the rationals")
        return 1 / Fraction(a)

    def parse(self, text):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise RingError(f"not a rational: {text!r}") from exc

    def fmt(self, a):
        return str(a)

    def rand(self, rng, span: int = 6):
        return Fraction(rng.randint(-span, span), rng.randint(1, 4))

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash(self.kind)


class IntegersMod(Ring):
    """The ring Z/m, m >= 2; scalars are ints reduced to 0..m-1."""

    kind = "integers-mod-m"

    def __init__(self, m: int):
        if m < 2:
            raise RingError(f"modulus must be >= 2, got {m}")
        self.m = m

    def zero(self):
        return 0

    def one(self):
        return 1 % self.m

    def from_int(self, k):
        return k % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def is_zero(self, a):
        return a % self.m == 0

    def is_unit(self, a):
        return gcd(a, self.m) == 1

    def inv(self, a):
        if not self.is_unit(a):
            raise RingError(f"{a} is not a unit mod {self.m}")
        return pow(a, -1, self.m)

    def parse(self, text):
        try:
            return int(text) % self.m
        except ValueError as exc:
            raise RingError(f"not an integer: {text!r}") from exc

    def rand(self, rng, span: int = 6):
        return rng.randrange(self.m)

    def __eq__(self, other):
        return isinstance(other, IntegersMod) and other.m == self.m

    def __hash__(self):
        return hash((self.kind, self.m))

    def __repr__(self):
        return f"Z/{self.m}"


QQ = Rationals()


def ring_from_spec(text: str) -> Ring:
    """Parse a ring spec: "rational" or "mod:<m>"."""
    if text in ("rational", "rationals", "QQ"):
        return QQ
    if text.startswith("mod:"):
        return IntegersMod(int(text[4:]))
    raise RingError(f"unknown ring spec: {text!r}")
