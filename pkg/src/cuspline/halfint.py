"""Exact arithmetic in the half-integer lattice (1/2)Z.

Every exponent in this package is a half-integer.  ``HalfInt`` stores the
doubled value as a plain int, so addition, subtraction, negation and
comparisons are exact and the type is closed under them.  Nothing in the
package ever converts these to floats.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

HalfLike = Union["HalfInt", int]


@dataclass(frozen=True, order=True)
class HalfInt:
    """An element of (1/2)Z, stored as twice its value."""

    num2: int

    # -- constructors -----------------------------------------------------
    @staticmethod
    def of(value: HalfLike) -> "HalfInt":
        """Coerce an int (or HalfInt) to HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot coerce {value!r} to HalfInt")
        return HalfInt(2 * value)

    @staticmethod
    def half(numerator: int) -> "HalfInt":
        """Build numerator/2."""
        return HalfInt(numerator)

    @staticmethod
    def parse(text: str) -> "HalfInt":
        """Parse '3', '-2' or 'p/2' style literals."""
        text = text.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            if den.strip() != "2":
                raise ValueError(f"half-integer literal must have denominator 2: {text!r}")
            return HalfInt(int(num))
        return HalfInt(2 * int(text))

    # -- arithmetic (closed in (1/2)Z) ------------------------------------
    def __add__(self, other: HalfLike) -> "HalfInt":
        return HalfInt(self.num2 + HalfInt.of(other).num2)

    __radd__ = __add__

    def __sub__(self, other: HalfLike) -> "HalfInt":
        return HalfInt(self.num2 - HalfInt.of(other).num2)

    def __rsub__(self, other: HalfLike) -> "HalfInt":
        return HalfInt(HalfInt.of(other).num2 - self.num2)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.num2)

    def __mul__(self, other: int) -> "HalfInt":
        if not isinstance(other, int) or isinstance(other, bool):
            raise TypeError("HalfInt may only be scaled by an int")
        return HalfInt(self.num2 * other)

    __rmul__ = __mul__

    # -- predicates -------------------------------------------------------
    @property
    def is_integer(self) -> bool:
        return self.num2 % 2 == 0

    @property
    def sign(self) -> int:
        return (self.num2 > 0) - (self.num2 < 0)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num2, 2)

    # -- presentation -----------------------------------------------------
    def __str__(self) -> str:
        if self.num2 % 2 == 0:
            return str(self.num2 // 2)
        return f"{self.num2}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self.num2})"

    def to_jsonable(self) -> dict:
        return {"num2": self.num2}


ZERO = HalfInt(0)
HALF = HalfInt(1)
ONE = HalfInt(2)


def hi(value) -> HalfInt:
    """Convenience coercion used throughout tests and the DSL.

    Accepts HalfInt, int, or a string literal like '3/2'.
    """
    if isinstance(value, HalfInt):
        return value
    if isinstance(value, str):
        return HalfInt.parse(value)
    return HalfInt.of(value)
