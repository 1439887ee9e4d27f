"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Only needed for recurrence systems whose diagonal coefficients carry a fixed
square-root factor (the Beckers-type deformation has a_n = lambda/sqrt(2)).
Arithmetic results collapse back to :class:`fractions.Fraction` whenever the
irrational part vanishes, so code written for Fractions keeps working.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction, "Surd"]


def squarefree_split(value: Fraction) -> tuple[Fraction, int]:
    """Write sqrt(value) as c * sqrt(d) with c rational and d a squarefree int.

    >>> squarefree_split(Fraction(1, 2))
    (Fraction(1, 2), 2)
    >>> squarefree_split(Fraction(12))
    (Fraction(2, 1), 3)
    """
    value = Fraction(value)
    if value < 0:
        raise ValueError("radicand must be non-negative")
    if value == 0:
        return Fraction(0), 1
    # sqrt(p/q) = sqrt(p*q)/q
    n = value.numerator * value.denominator
    outside = 1
    k = 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
            outside *= k
        k += 1
    return Fraction(outside, value.denominator), n


class Surd:
    """The number ``rational + coeff * sqrt(radicand)``, radicand squarefree > 1."""

    __slots__ = ("rational", "coeff", "radicand")

    def __init__(self, rational, coeff, radicand: int):
        if radicand <= 1 or math.isqrt(radicand) ** 2 == radicand:
            raise ValueError(f"radicand must be a non-square integer > 1, got {radicand}")
        self.rational = Fraction(rational)
        self.coeff = Fraction(coeff)
        self.radicand = int(radicand)

    @classmethod
    def make(cls, rational, coeff, radicand: int) -> Scalar:
        """Build a field element, collapsing to Fraction when possible."""
        coeff = Fraction(coeff)
        if coeff == 0 or radicand == 1:
            return Fraction(rational) + coeff
        return cls(rational, coeff, radicand)

    @classmethod
    def sqrt_of(cls, value) -> Scalar:
        """Exact square root of a non-negative rational."""
        c, d = squarefree_split(Fraction(value))
        return cls.make(0, c, d)

    def _coerce(self, other):
        if isinstance(other, Surd):
            if other.radicand != self.radicand:
                raise ValueError("cannot mix surds with different radicands")
            return other.rational, other.coeff
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Surd.make(self.rational + o[0], self.coeff + o[1], self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.rational, -self.coeff, self.radicand)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Surd.make(self.rational - o[0], self.coeff - o[1], self.radicand)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Surd.make(o[0] - self.rational, o[1] - self.coeff, self.radicand)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p, q = self.rational, self.coeff
        r, s = o
        return Surd.make(p * r + q * s * self.radicand, p * s + q * r, self.radicand)

    __rmul__ = __mul__

    def _inverse(self):
        norm = self.rational ** 2 - self.coeff ** 2 * self.radicand
        # norm is nonzero because the radicand is not a square
        return Surd.make(self.rational / norm, -self.coeff / norm, self.radicand)

    def __truediv__(self, other):
        if isinstance(other, Surd):
            return self * other._inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Surd.make(self.rational / other, self.coeff / other, self.radicand)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._inverse() * other
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result: Scalar = Fraction(1)
        for _ in range(exponent):
            result = result * self
        return result

    def sign(self) -> int:
        p, q = self.rational, self.coeff
        sp = (p > 0) - (p < 0)
        sq = (q > 0) - (q < 0)
        if sp == 0 or sp == sq:
            return sq if sp == 0 else sp
        # opposite signs: compare magnitudes squared
        lhs, rhs = p * p, q * q * self.radicand
        if lhs == rhs:
            return 0
        return sp if lhs > rhs else sq

    def _cmp(self, other) -> int:
        diff = self - other
        if isinstance(diff, Surd):
            return diff.sign()
        return (diff > 0) - (diff < 0)

    def __eq__(self, other):
        if self._coerce(other) is None:
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self.rational, self.coeff, self.radicand))

    def __bool__(self):
        return True  # a Surd instance always has a nonzero irrational part

    def __float__(self):
        return float(self.rational) + float(self.coeff) * math.sqrt(self.radicand)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        return f"Surd({self.rational!s}, {self.coeff!s}, {self.radicand})"

    def __str__(self):
        irr = f"{self.coeff}*sqrt({self.radicand})"
        if self.rational == 0:
            return irr
        sep = "+" if self.coeff > 0 else ""
        return f"{self.rational}{sep}{irr}"
