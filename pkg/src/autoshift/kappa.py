"""Rational points of the r-adic integers of the form m + k/(1 - r^p)."""
from __future__ import annotations

import math
from fractions import Fraction

from .substitution import SubstitutionError


class KappaValue:
    """An r-adic integer m + k/(1 - r^p) with p minimal and 0 <= k < r^p - 1.

    Purely periodic r-adic expansions are exactly the rationals in [-1, 0]; the
    fractional part is stored as such a rational (zero is k = 0, p = 1).
    """

    __slots__ = ("r", "m", "k", "p")

    def __init__(self, r: int, m: int = 0, k: int = 0, p: int = 1):
        if r < 2:
            raise SubstitutionError("base must be at least 2")
        if p < 1 or not 0 <= k < r ** p - 1 and not (k == 0):
            raise SubstitutionError("need 0 <= k < r^p - 1")
        v = Fraction(k, 1 - r ** p) + m
        other = KappaValue.from_fraction(r, v) if (k, p) != (0, 1) else None
        self.r = r
        if other is None:
            self.m, self.k, self.p = m, 0, 1
        else:
            self.m, self.k, self.p = other.m, other.k, other.p

    @classmethod
    def from_fraction(cls, r: int, value) -> "KappaValue":
        value = Fraction(value)
        if math.gcd(value.denominator, r) != 1:
            raise SubstitutionError(f"{value} is not an r-adic integer for r={r}")
        m = math.ceil(value)
        t = value - m  # in (-1, 0]
        obj = cls.__new__(cls)
        obj.r = r
        obj.m = m
        if t == 0:
            obj.k, obj.p = 0, 1
            return obj
        q = t.denominator
        p = 1
        while (r ** p - 1) % q:
            p += 1
        obj.p = p
        obj.k = int(-t * (r ** p - 1))
        return obj

    @property
    def value(self) -> Fraction:
        return self.m + Fraction(self.k, 1 - self.r ** self.p)

    @property
    def fractional(self) -> Fraction:
        """The part in (-1, 0]."""
        return Fraction(self.k, 1 - self.r ** self.p)

    def is_integer(self) -> bool:
        return self.k == 0

    def residue(self) -> Fraction:
        """Class modulo the integers, as a number in [0, 1)."""
        return self.value - math.floor(self.value)

    def __add__(self, other):
        if isinstance(other, int):
            other = KappaValue(self.r, other)
        if other.r != self.r:
            raise SubstitutionError("different bases")
        return KappaValue.from_fraction(self.r, self.value + other.value)

    __radd__ = __add__

    def __neg__(self):
        return KappaValue.from_fraction(self.r, -self.value)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int):
        return KappaValue.from_fraction(self.r, self.value * n)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, KappaValue):
            return self.r == other.r and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.r, self.value))

    def digits(self, n: int) -> tuple:
        """The first n r-adic digits, least significant first."""
        v = self.value
        mod = self.r ** n
        x = (v.numerator * pow(v.denominator, -1, mod)) % mod
        out = []
        for _ in range(n):
            x, d = divmod(x, self.r)
            out.append(d)
        return tuple(out)

    def __repr__(self):
        if self.k == 0:
            return f"KappaValue({self.m}, r={self.r})"
        head = f"{self.m} + " if self.m else ""
        return f"KappaValue({head}{self.k}/(1-{self.r}^{self.p}), r={self.r})"

    def __str__(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def as_dict(self) -> dict:
        return {"r": self.r, "m": self.m, "k": self.k, "p": self.p, "value": str(self),
                "class_mod_1": str(self.residue())}


def periodic_kappas(r: int, p: int) -> list:
    """All fractional parts k/(1 - r^p), 0 < k < r^p - 1, whose minimal period is p."""
    out = []
    for k in range(1, r ** p - 1):
        kv = KappaValue.from_fraction(r, Fraction(k, 1 - r ** p))
        if kv.p == p:
            out.append(kv)
    return out
