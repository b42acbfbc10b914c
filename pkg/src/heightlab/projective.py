"""Exact points, lines and degree-0 products of linear forms on P^2 over
Q(i).  Lines meet by cross products; no numerics here."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd

from .errors import IndeterminateRestriction
from .funcfield import Place, RationalFunction
from .gaussian import GaussQ, parse_gauss
from .poly import Polynomial


def _g(x) -> GaussQ:
    return x if isinstance(x, GaussQ) else GaussQ.coerce(x)


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _normalize(vec) -> tuple[GaussQ, GaussQ, GaussQ]:
    vec = tuple(_g(c) for c in vec)
    for c in vec:
        if c != 0:
            inv = c.inverse()
            return tuple(x * inv for x in vec)
    raise ValueError("the zero vector is not a projective point")


@dataclass(frozen=True)
class P2Point:
    """A point of P^2(Q(i)), scaled so its first nonzero coordinate is 1."""

    coords: tuple

    def __init__(self, coords):
        object.__setattr__(self, "coords", _normalize(coords))

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.coords)

    def sort_key(self):
        return tuple((c.re, c.im) for c in self.coords)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "[" + ",".join(str(c) for c in self.coords) + "]"

    def __repr__(self):
        return f"P2Point{self}"

    def to_json(self):
        return [c.to_json() for c in self.coords]


@dataclass(frozen=True)
class Line:
    """V(a z0 + b z1 + c z2), normalised like a point of the dual plane.

    The line carries a fixed degree-1 parameterisation
    ``t -> base + t * direction`` with ``t = inf -> direction``; both
    vectors are taken from cross products of the form with coordinate
    vectors, so rational lines get rational parameterisations.
    """

    form: tuple

    def __init__(self, form):
        object.__setattr__(self, "form", _normalize(form))

    @property
    def base(self):
        return self._basis()[0]

    @property
    def direction(self):
        return self._basis()[1]

    def _basis(self):
        picks = []
        for k in range(3):
            e = [GaussQ(0)] * 3
            e[k] = GaussQ(1)
            v = cross(self.form, e)
            if any(c != 0 for c in v):
                v = _clean(v)
                if not picks or any(c != 0 for c in cross(picks[0], v)):
                    picks.append(v)
            if len(picks) == 2:
                break
        return picks[0], picks[1]

    def contains(self, point: P2Point) -> bool:
        return dot(self.form, point.coords) == 0

    def point_at(self, t) -> P2Point:
        """Point with parameter t (``None`` means infinity)."""
        base, direction = self._basis()
        if t is None:
            return P2Point(direction)
        t = _g(t)
        return P2Point(tuple(b + t * d for b, d in zip(base, direction)))

    def param_of(self, point: P2Point):
        """Inverse of :meth:`point_at`; ``None`` for the point at t = inf."""
        if not self.contains(point):
            raise ValueError(f"{point} does not lie on {self}")
        base, direction = self._basis()
        # point ~ base + t*direction: solve using a 2x2 minor where base, direction are independent
        x = point.coords
        for i, j in ((0, 1), (0, 2), (1, 2)):
            det = base[i] * direction[j] - base[j] * direction[i]
            if det != 0:
                lam = (x[i] * direction[j] - x[j] * direction[i]) / det
                mu = (base[i] * x[j] - base[j] * x[i]) / det
                if lam == 0:
                    return None
                return mu / lam
        raise AssertionError("degenerate line basis")

    def meet(self, other: Line) -> P2Point:
        v = cross(self.form, other.form)
        if all(c == 0 for c in v):
            raise ValueError(f"{self} and {other} coincide")
        return P2Point(v)

    def is_rational(self) -> bool:
        return all(c.is_real() for c in self.form)

    def integer_form(self):
        """Primitive integer coefficients for rational lines."""
        if not self.is_rational():
            return None
        fr = [c.re for c in self.form]
        den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fr), 1)
        ints = [int(f * den) for f in fr]
        g = reduce(gcd, ints, 0) or 1
        return [v // g for v in ints]

    def sort_key(self):
        return tuple((c.re, c.im) for c in self.form)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        ints = self.integer_form()
        if ints is not None:
            return "V(" + ",".join(str(v) for v in ints) + ")"
        return "V(" + ",".join(str(c) for c in self.form) + ")"

    def __repr__(self):
        return f"Line{self}"

    def to_json(self):
        ints = self.integer_form()
        return ints if ints is not None else [c.to_json() for c in self.form]


def _clean(v):
    """Scale a rational vector to primitive integers with first nonzero
    entry positive; Gaussian vectors are returned unchanged."""
    if not all(c.is_real() for c in v):
        return tuple(v)
    fr = [c.re for c in v]
    den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fr), 1)
    ints = [int(f * den) for f in fr]
    g = reduce(gcd, ints, 0) or 1
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(GaussQ(x) for x in ints)


def line_from_json(value) -> Line:
    return Line(tuple(parse_gauss(c) for c in value))


class P2Function:
    """scalar * prod(form_k ^ e_k) with sum e_k = 0: a rational function on
    P^2 whose divisor is supported on lines."""

    def __init__(self, scalar=1, factors=None):
        self.scalar = _g(scalar)
        if self.scalar == 0:
            raise ValueError("the zero function is not allowed")
        merged = {}
        for form, e in (factors.items() if isinstance(factors, dict) else (factors or [])):
            if not e:
                continue
            raw = tuple(_g(c) for c in (form.form if isinstance(form, Line) else form))
            line = Line(raw)
            # absorb the normalisation scalar: raw = lead * line.form
            lead = next(c for c in raw if c != 0)
            self.scalar = self.scalar * lead ** e
            merged[line] = merged.get(line, 0) + e
        self.factors = {ln: e for ln, e in merged.items() if e}
        if sum(self.factors.values()) != 0:
            raise ValueError("a function on P^2 needs total degree 0")

    @classmethod
    def constant(cls, c) -> P2Function:
        return cls(c, {})

    @classmethod
    def from_json(cls, obj) -> P2Function:
        if not isinstance(obj, dict):
            return cls.constant(parse_gauss(obj))
        factors = [(tuple(parse_gauss(c) for c in item["form"]), int(item.get("exp", 1)))
                   for item in obj.get("factors", [])]
        return cls(parse_gauss(obj.get("scalar", 1)), factors)

    def to_json(self):
        return {"scalar": self.scalar.to_json(),
                "factors": [{"form": ln.to_json(), "exp": e} for ln, e in self.items()]}

    def items(self):
        return sorted(self.factors.items(), key=lambda kv: kv[0].sort_key())

    def is_constant(self) -> bool:
        return not self.factors

    def order_along(self, line: Line) -> int:
        return self.factors.get(line, 0)

    def __mul__(self, other: P2Function) -> P2Function:
        f = dict(self.factors)
        for ln, e in other.factors.items():
            f[ln] = f.get(ln, 0) + e
        return P2Function(self.scalar * other.scalar, f)

    def __pow__(self, n: int) -> P2Function:
        return P2Function(self.scalar ** n, {ln: e * n for ln, e in self.factors.items()})

    def inverse(self) -> P2Function:
        return self ** -1

    def __truediv__(self, other: P2Function) -> P2Function:
        return self * other.inverse()

    def __neg__(self):
        return P2Function(-self.scalar, dict(self.factors))

    def __eq__(self, other):
        return (isinstance(other, P2Function) and self.scalar == other.scalar
                and self.factors == other.factors)

    def __hash__(self):
        return hash((self.scalar, frozenset(self.factors.items())))

    def __str__(self):
        parts = [str(self.scalar)] if self.scalar != 1 or not self.factors else []
        for ln, e in self.items():
            parts.append(f"{ln}^{e}" if e != 1 else str(ln))
        return "*".join(parts)

    def __repr__(self):
        return f"P2Function({self})"

    def restrict(self, line: Line) -> LineFunction:
        if self.factors.get(line, 0):
            raise IndeterminateRestriction(f"{self} has order {self.factors[line]} along {line}")
        base, direction = line._basis()
        pieces = []
        for ln, e in self.items():
            alpha, beta = dot(ln.form, base), dot(ln.form, direction)
            if alpha == 0 and beta == 0:
                raise IndeterminateRestriction(f"{ln} vanishes identically on {line}")
            pieces.append((alpha, beta, e))
        return LineFunction(line, self.scalar, pieces)

    def value_complex(self, z) -> complex:
        """Numeric value at homogeneous complex coordinates z."""
        out = complex(self.scalar)
        for ln, e in self.factors.items():
            out *= dot(_cform(ln), z) ** e
        return out


def _cform(line: Line):
    return tuple(complex(c) for c in line.form)


class LineFunction:
    """Restriction of a P2Function to a line, written in homogeneous line
    coordinates (mu : nu) for the point mu*base + nu*direction, as
    scalar * prod (mu*alpha_k + nu*beta_k)^e_k."""

    def __init__(self, line: Line, scalar: GaussQ, pieces):
        self.line = line
        self.scalar = scalar
        self.pieces = pieces

    def _coords(self, point: P2Point):
        t = self.line.param_of(point)
        return (GaussQ(0), GaussQ(1)) if t is None else (GaussQ(1), t)

    def order_at(self, point: P2Point) -> int:
        mu, nu = self._coords(point)
        return sum(e for a, b, e in self.pieces if mu * a + nu * b == 0)

    def value_at(self, point: P2Point):
        """Value in P^1(Q(i)): returns a GaussQ, or ``None`` for infinity."""
        mu, nu = self._coords(point)
        # transverse direction for the vanishing factors
        mu1, nu1 = (GaussQ(1), GaussQ(0)) if nu != 0 else (GaussQ(0), GaussQ(1))
        order = 0
        value = self.scalar
        for a, b, e in self.pieces:
            v = mu * a + nu * b
            if v == 0:
                order += e
                value = value * (mu1 * a + nu1 * b) ** e
            else:
                value = value * v ** e
        if order > 0:
            return GaussQ(0)
        if order < 0:
            return None
        return value

    def divisor(self) -> dict:
        """Zeros minus poles on the line, as {P2Point: order}."""
        out = {}
        for a, b, e in self.pieces:
            if b == 0 and a == 0:
                continue
            # zero of mu*a + nu*b: (mu : nu) = (b : -a)
            point = _point_from_line_coords(self.line, b, -a)
            out[point] = out.get(point, 0) + e
        return {p: n for p, n in out.items() if n}

    def to_rational_function(self) -> RationalFunction:
        """As a function of the affine parameter t (rational lines only)."""
        if not self.scalar.is_real() or not all(a.is_real() and b.is_real() for a, b, _ in self.pieces):
            raise ValueError("restriction has non-rational coefficients")
        out = RationalFunction(Polynomial([self.scalar.re]))
        for a, b, e in self.pieces:
            out = out * RationalFunction(Polynomial([a.re, b.re])) ** e
        return out


def _point_from_line_coords(line: Line, mu, nu) -> P2Point:
    base, direction = line._basis()
    return P2Point(tuple(mu * b + nu * d for b, d in zip(base, direction)))


def point_of_place(line: Line, place: Place) -> P2Point:
    """Image of a degree-1 place of the parameter line."""
    if place.is_infinity:
        return line.point_at(None)
    if place.degree != 1:
        raise ValueError("only degree-1 places map to points of P^2(Q)")
    return line.point_at(place.root)


def parse_point(value) -> P2Point:
    return P2Point(tuple(parse_gauss(c) for c in value))

