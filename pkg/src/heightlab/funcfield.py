"""Exact arithmetic in Q(t): closed points of P^1 of degree <= 2, divisors,
residue-field values, tame symbols and the Weil reciprocity product.

Everything here is exact; there are no tolerances.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import expr
from .errors import NotAUnit, PolySyntaxError
from .poly import Polynomial, factor, poly_gcd


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Polynomial) else Polynomial([num])
        den = Polynomial([1]) if den is None else (den if isinstance(den, Polynomial) else Polynomial([den]))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Polynomial(), Polynomial([1])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lead = den.lead
        self.num = num * (1 / lead)
        self.den = den * (1 / lead)

    @classmethod
    def parse(cls, text: str) -> RationalFunction:
        return parse_rational_function(text)

    @classmethod
    def t(cls) -> RationalFunction:
        return cls(Polynomial.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return RationalFunction(Polynomial([other]))

    def __add__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        o = self._lift(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def to_str(self, var: str = "t") -> str:
        n = self.num.to_str(var)
        if self.den.degree == 0:
            return n
        return f"({n})/({self.den.to_str(var)})"

    __str__ = to_str

    def __repr__(self):
        return f"RationalFunction({self.to_str()})"


def parse_rational_function(text: str, var: str = "t") -> RationalFunction:
    tree = expr.parse(text)

    def leaf(node):
        if isinstance(node, expr.Num):
            return RationalFunction(Polynomial([node.value]))
        if isinstance(node, expr.Var):
            if node.name != var:
                raise PolySyntaxError(f"unknown variable {node.name!r}; expected {var!r}")
            return RationalFunction(Polynomial.x())
        raise PolySyntaxError(f"constant {node.label!r} is not allowed in Q({var})")

    try:
        return expr.evaluate(tree, leaf)
    except ZeroDivisionError:
        raise PolySyntaxError(f"division by zero in {text!r}") from None


@dataclass(frozen=True)
class Place:
    """A closed point of P^1 over Q: a monic irreducible polynomial of degree
    1 or 2, or the point at infinity (``minpoly is None``)."""

    minpoly: Polynomial | None = None

    def __post_init__(self):
        if self.minpoly is not None:
            mp = self.minpoly.monic()
            if mp.degree not in (1, 2):
                raise ValueError(f"place polynomial must have degree 1 or 2, got {mp.to_str()}")
            if mp.degree == 2 and _has_rational_root(mp):
                raise ValueError(f"{mp.to_str()} is reducible over Q")
            object.__setattr__(self, "minpoly", mp)

    @classmethod
    def infinity(cls) -> Place:
        return cls(None)

    @classmethod
    def rational(cls, r) -> Place:
        return cls(Polynomial([-Fraction(r), 1]))

    @classmethod
    def parse(cls, text: str) -> Place:
        s = text.strip().lower()
        if s in ("inf", "infinity", "oo", "∞"):
            return cls.infinity()
        f = parse_rational_function(s)
        if f.den.degree != 0:
            raise ValueError(f"place must be given by a polynomial, got {text!r}")
        return cls(f.num)

    @property
    def is_infinity(self) -> bool:
        return self.minpoly is None

    @property
    def degree(self) -> int:
        return 1 if self.minpoly is None else self.minpoly.degree

    @property
    def root(self) -> Fraction:
        """The rational coordinate of a degree-1 finite place."""
        if self.minpoly is None or self.minpoly.degree != 1:
            raise ValueError("only degree-1 finite places have a rational root")
        return -self.minpoly[0]

    def sort_key(self):
        coeffs = () if self.minpoly is None else tuple(self.minpoly.coeffs)
        return (self.degree, self.minpoly is None, coeffs)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.minpoly is None:
            return "inf"
        return self.minpoly.to_str()

    def __repr__(self):
        return f"Place({self})"


def _has_rational_root(q: Polynomial) -> bool:
    # monic quadratic: reducible iff the discriminant is a rational square
    b, c = q[1], q[0]
    disc = b * b - 4 * c
    if disc < 0:
        return False
    return _is_square(disc.numerator) and _is_square(disc.denominator)


def _is_square(n: int) -> bool:
    from math import isqrt
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass(frozen=True)
class ResidueElement:
    """a + b*theta in the residue field of ``place``; theta is a root of the
    place polynomial (b = 0 for degree-1 places and infinity)."""

    place: Place
    a: Fraction
    b: Fraction = Fraction(0)

    def _mod(self):
        mp = self.place.minpoly
        return mp[1], mp[0]  # theta^2 = -c1*theta - c0

    def _check(self, other):
        if isinstance(other, ResidueElement):
            if other.place != self.place:
                raise ValueError("residue elements live at different places")
            return other
        return ResidueElement(self.place, Fraction(other))

    def __add__(self, other):
        o = self._check(other)
        return ResidueElement(self.place, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return ResidueElement(self.place, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        o = self._check(other)
        if self.place.degree == 1:
            return ResidueElement(self.place, self.a * o.a)
        c1, c0 = self._mod()
        bb = self.b * o.b
        return ResidueElement(self.place,
                              self.a * o.a - bb * c0,
                              self.a * o.b + self.b * o.a - bb * c1)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        if self.place.degree == 1:
            return self.a
        c1, c0 = self._mod()
        return self.a * self.a - self.a * self.b * c1 + self.b * self.b * c0

    def inverse(self) -> ResidueElement:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero residue element")
        if self.place.degree == 1:
            return ResidueElement(self.place, 1 / self.a)
        c1, _ = self._mod()
        return ResidueElement(self.place, (self.a - self.b * c1) / n, -self.b / n)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ResidueElement(self.place, Fraction(1)), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*theta"


class Divisor:
    """Finite formal sum of places; zero coefficients are dropped."""

    def __init__(self, support=None):
        self.support = {p: n for p, n in (support or {}).items() if n}

    def items(self):
        return sorted(self.support.items(), key=lambda kv: kv[0].sort_key())

    @property
    def degree(self) -> int:
        return sum(n * p.degree for p, n in self.support.items())

    def __getitem__(self, p):
        return self.support.get(p, 0)

    def __add__(self, other):
        out = dict(self.support)
        for p, n in other.support.items():
            out[p] = out.get(p, 0) + n
        return Divisor(out)

    def __neg__(self):
        return Divisor({p: -n for p, n in self.support.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.support == other.support

    def __bool__(self):
        return bool(self.support)

    def __str__(self):
        if not self.support:
            return "0"
        return " ".join(f"{n:+d}*({p})" for p, n in self.items())

    def __repr__(self):
        return f"Divisor({self})"


def factor_places(p: Polynomial) -> dict:
    """{Place: multiplicity} for the finite zeros of p."""
    return {Place(q): m for q, m in factor(p)}


def divisor_of(f: RationalFunction) -> Divisor:
    """Zeros minus poles of f on P^1, including the point at infinity."""
    if f.is_zero():
        raise ValueError("divisor of the zero function")
    out = dict(factor_places(f.num))
    for p, m in factor_places(f.den).items():
        out[p] = out.get(p, 0) - m
    out[Place.infinity()] = f.den.degree - f.num.degree
    return Divisor(out)


def _strip(poly: Polynomial, q: Polynomial) -> tuple[int, Polynomial]:
    n = 0
    while poly.degree >= q.degree:
        quo, rem = divmod(poly, q)
        if not rem.is_zero():
            break
        poly = quo
        n += 1
    return n, poly


def order_at(f: RationalFunction, p: Place) -> int:
    if f.is_zero():
        raise ValueError("order of the zero function")
    if p.is_infinity:
        return f.den.degree - f.num.degree
    return _strip(f.num, p.minpoly)[0] - _strip(f.den, p.minpoly)[0]


def evaluate_at(f: RationalFunction, p: Place) -> ResidueElement:
    """Value of the unit f in the residue field of p."""
    nu = order_at(f, p)
    if nu != 0:
        raise NotAUnit(f"{f} has order {nu} at {p}")
    if p.is_infinity:
        return ResidueElement(p, f.num.lead / f.den.lead)
    if p.degree == 1:
        r = p.root
        return ResidueElement(p, f.num(r) / f.den(r))
    theta = ResidueElement(p, Fraction(0), Fraction(1))
    return f.num(theta) / f.den(theta)


def _unit_part(f: RationalFunction, p: Place) -> tuple[int, ResidueElement]:
    """(ord_p f, value of f / pi^ord at p) for the uniformiser pi = minpoly, or 1/t at infinity."""
    if p.is_infinity:
        return f.den.degree - f.num.degree, ResidueElement(p, f.num.lead / f.den.lead)
    m, num = _strip(f.num, p.minpoly)
    n, den = _strip(f.den, p.minpoly)
    if p.degree == 1:
        r = p.root
        return m - n, ResidueElement(p, num(r) / den(r))
    theta = ResidueElement(p, Fraction(0), Fraction(1))
    return m - n, num(theta) / den(theta)


def tame_symbol(f: RationalFunction, g: RationalFunction, p: Place) -> ResidueElement:
    """(-1)^(ab) * (f^b / g^a)(p) with a = ord_p f, b = ord_p g."""
    a, uf = _unit_part(f, p)
    b, ug = _unit_part(g, p)
    if a == 0 and b == 0:
        return ResidueElement(p, Fraction(1))
    value = uf ** b / ug ** a
    return -value if (a * b) % 2 else value


def residue_norm(x: ResidueElement) -> Fraction:
    return x.norm()


def weil_factors(f: RationalFunction, g: RationalFunction) -> list[tuple[Place, Fraction]]:
    """Norms of the tame symbols at every place where either function has a
    zero or pole, in canonical place order."""
    places = set(divisor_of(f).support) | set(divisor_of(g).support)
    return [(p, residue_norm(tame_symbol(f, g, p))) for p in sorted(places, key=Place.sort_key)]


def weil_product(f: RationalFunction, g: RationalFunction) -> Fraction:
    out = Fraction(1)
    for _, value in weil_factors(f, g):
        out *= value
    return out
