"""Exact coefficient rings: the integers, the rationals and ``Z/m``.

Elements are stored as plain Python values (``int`` for Z and Z/m,
``fractions.Fraction`` for Q). A :class:`RingSpec` knows how to normalize and
combine such raw values; :class:`RingElem` pairs a raw value with its ring
for the public, type-checked API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .errors import BadModulus, RingMismatch, ZeroDenominator

Raw = Union[int, Fraction]

MAX_MODULUS = 2**63 - 1

INTEGERS = "Z"
RATIONALS = "Q"
MODULAR = "Zmod"


@dataclass(frozen=True)
class RingSpec:
    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in (INTEGERS, RATIONALS, MODULAR):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == MODULAR:
            m = self.modulus
            if not isinstance(m, int) or isinstance(m, bool) or m < 2 or m > MAX_MODULUS:
                raise BadModulus(f"modulus must be an integer in [2, 2^63), got {m!r}")
        elif self.modulus is not None:
            raise ValueError(f"{self.kind} takes no modulus")

    @classmethod
    def integers(cls) -> RingSpec:
        return cls(INTEGERS)

    @classmethod
    def rationals(cls) -> RingSpec:
        return cls(RATIONALS)

    @classmethod
    def modular(cls, m: int) -> RingSpec:
        return cls(MODULAR, m)

    @classmethod
    def parse(cls, text: str) -> RingSpec:
        """Parse ``"Z"``, ``"Q"`` or ``"Zmod:m"``."""
        text = text.strip()
        if text == INTEGERS:
            return cls.integers()
        if text == RATIONALS:
            return cls.rationals()
        if text.startswith(MODULAR + ":"):
            try:
                m = int(text[len(MODULAR) + 1:])
            except ValueError:
                raise ValueError(f"bad modulus in ring {text!r}") from None
            return cls.modular(m)
        raise ValueError(f"unknown ring {text!r} (expected Z, Q or Zmod:m)")

    def __str__(self) -> str:
        if self.kind == MODULAR:
            return f"{MODULAR}:{self.modulus}"
        return self.kind

    @property
    def is_finite(self) -> bool:
        return self.kind == MODULAR

    @property
    def zero(self) -> Raw:
        return Fraction(0) if self.kind == RATIONALS else 0

    @property
    def one(self) -> Raw:
        return Fraction(1) if self.kind == RATIONALS else 1

    def normalize(self, value) -> Raw:
        """Canonical raw representative of ``value`` in this ring."""
        if isinstance(value, bool):
            value = int(value)
        if self.kind == RATIONALS:
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise TypeError(f"cannot interpret {value!r} as a rational")
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise ValueError(f"{value} is not an element of {self}")
            value = value.numerator
        if not isinstance(value, int):
            raise TypeError(f"cannot interpret {value!r} as an element of {self}")
        if self.kind == MODULAR:
            return value % self.modulus
        return value

    def add(self, a: Raw, b: Raw) -> Raw:
        if self.kind == MODULAR:
            return (a + b) % self.modulus
        return a + b

    def sub(self, a: Raw, b: Raw) -> Raw:
        if self.kind == MODULAR:
            return (a - b) % self.modulus
        return a - b

    def mul(self, a: Raw, b: Raw) -> Raw:
        if self.kind == MODULAR:
            return (a * b) % self.modulus
        return a * b

    def neg(self, a: Raw) -> Raw:
        if self.kind == MODULAR:
            return (-a) % self.modulus
        return -a

    def elem(self, value) -> RingElem:
        return RingElem(self, self.normalize(value))

    def elements(self) -> Iterator[RingElem]:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        for v in range(self.modulus):
            yield RingElem(self, v)

    def parse_elem(self, text: str) -> Raw:
        """Parse an integer, ``p/q`` (Q only) or a residue."""
        s = text.strip()
        try:
            if "/" in s:
                if self.kind != RATIONALS:
                    raise ValueError
                num, den = s.split("/")
                return rat_canon(int(num), int(den)).value
            return self.normalize(int(s))
        except ZeroDenominator:
            raise
        except ValueError:
            raise ValueError(f"{text!r} is not an element of {self}") from None

    def format_elem(self, value: Raw) -> str:
        return str(value)


@dataclass(frozen=True)
class RingElem:
    ring: RingSpec
    value: Raw

    def __post_init__(self):
        if self.ring.normalize(self.value) != self.value or (
            self.ring.kind == RATIONALS and not isinstance(self.value, Fraction)
        ):
            raise ValueError(f"{self.value!r} is not canonical in {self.ring}")

    def _check(self, other) -> RingElem:
        if not isinstance(other, RingElem):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return RingElem(self.ring, self.ring.add(self.value, o.value))

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return RingElem(self.ring, self.ring.sub(self.value, o.value))

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return RingElem(self.ring, self.ring.mul(self.value, o.value))

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return self.ring.format_elem(self.value)


def ring_arith(a: RingElem, b: RingElem, op: str) -> RingElem:
    """Apply ``op`` in {"add", "mul", "sub", "neg"}; ``neg`` ignores ``b``."""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "sub":
        return a - b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def rat_canon(num: int, den: int) -> RingElem:
    if den == 0:
        raise ZeroDenominator(f"{num}/0")
    # Fraction already reduces and makes the denominator positive.
    return RingElem(RingSpec.rationals(), Fraction(num, den))


def int_to_mod(z: int, m: int) -> RingElem:
    if not isinstance(m, int) or m < 2:
        raise BadModulus(f"modulus must be >= 2, got {m!r}")
    return RingElem(RingSpec.modular(m), z % m)


def embed_integer(a: RingElem) -> RingElem:
    """The injection Z -> Q."""
    if a.ring.kind != INTEGERS:
        raise RingMismatch(f"expected an integer, got an element of {a.ring}")
    return RingElem(RingSpec.rationals(), Fraction(a.value))


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % q for q in range(3, math.isqrt(p) + 1, 2))


def ideal_generator(t: int, m: int) -> int:
    """Canonical generator of the ideal (t) of Z/m: gcd(t, m), a divisor of m."""
    return math.gcd(t, m)
