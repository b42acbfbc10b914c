"""Exact Gaussian rationals a + b*i with Fraction parts."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class GaussQ:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussQ):
            re, im = re.re + 0, re.im + im
            self.re, self.im = Fraction(re), Fraction(im)
            return
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> GaussQ:
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x, 0)

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> GaussQ:
        return GaussQ(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> GaussQ:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GaussQ division by zero")
        return GaussQ(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = GaussQ(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"

    def to_json(self):
        if self.im == 0:
            return str(self.re)
        return [str(self.re), str(self.im)]


def _coerce(x):
    if isinstance(x, GaussQ):
        return x
    if isinstance(x, (int, Rational)):
        return GaussQ(x)
    return NotImplemented


def parse_gauss(value) -> GaussQ:
    """Accept ``"3/10"``, ``3``, ``[re, im]`` or ``{"re":..,"im":..}``."""
    if isinstance(value, GaussQ):
        return value
    if isinstance(value, (list, tuple)):
        re, im = value
        return GaussQ(Fraction(str(re)), Fraction(str(im)))
    if isinstance(value, dict):
        return GaussQ(Fraction(str(value.get("re", 0))), Fraction(str(value.get("im", 0))))
    return GaussQ(Fraction(str(value)))
