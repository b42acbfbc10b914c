"""The m = 0 Archimedean pairing <xi1, xi2> = sum_a  sum_{q in Z_a . xi2} log|f_a(q)|.

Pairing values are kept as exact positive rationals whose logarithm is the
real value, so reciprocity and the projection formula become exact rational
identities.  Supports are either the projective line itself or lines in P^2
with their fixed parameterisation (see :class:`heightlab.projective.Line`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateMap, FactorDegreeExceeded, NotAUnit, SupportsNotDisjoint
from .funcfield import (Place, RationalFunction, divisor_of, evaluate_at, factor_places,
                        parse_rational_function, residue_norm)
from .poly import Polynomial, poly_gcd, sylvester_resultant
from .projective import P2Point, line_from_json, parse_point, point_of_place

P1 = "P1"


class ZeroCycle:
    """Formal integer combination of points.  Keys are :class:`Place` (points
    of P^1) or :class:`P2Point`; zero multiplicities are dropped."""

    def __init__(self, points=None):
        acc = {}
        for key, n in (points.items() if isinstance(points, dict) else (points or [])):
            acc[key] = acc.get(key, 0) + n
        self.points = {k: n for k, n in acc.items() if n}

    def items(self):
        return sorted(self.points.items(), key=lambda kv: (type(kv[0]).__name__, kv[0].sort_key()))

    def support(self) -> set:
        return set(self.points)

    @property
    def degree(self) -> int:
        return sum(n * (k.degree if isinstance(k, Place) else 1) for k, n in self.points.items())

    def __add__(self, other):
        return ZeroCycle(list(self.points.items()) + list(other.points.items()))

    def __neg__(self):
        return ZeroCycle({k: -n for k, n in self.points.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, m: int) -> ZeroCycle:
        return ZeroCycle({k: m * n for k, n in self.points.items()})

    def __eq__(self, other):
        return isinstance(other, ZeroCycle) and self.points == other.points

    def __bool__(self):
        return bool(self.points)

    def __len__(self):
        return len(self.points)

    def __str__(self):
        if not self.points:
            return "0"
        return " ".join(f"{n:+d}*({k})" for k, n in self.items())

    def __repr__(self):
        return f"ZeroCycle({self})"

    def to_json(self):
        out = []
        for k, n in self.items():
            if isinstance(k, Place):
                out.append({"place": str(k), "mult": n})
            else:
                out.append({"point": k.to_json(), "mult": n})
        return out

    @classmethod
    def from_json(cls, obj) -> ZeroCycle:
        items = obj.get("points", obj) if isinstance(obj, dict) else obj
        acc = []
        for item in items:
            mult = int(item.get("mult", 1))
            if "place" in item:
                acc.append((Place.parse(str(item["place"])), mult))
            else:
                acc.append((parse_point(item["point"]), mult))
        return cls(acc)


@dataclass(frozen=True)
class ExactLog:
    """A real number log(ratio) carried exactly through the positive rational."""

    ratio: Fraction
    factors: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.ratio <= 0:
            raise ValueError("ExactLog needs a positive ratio")

    @property
    def value(self) -> float:
        return math.log(self.ratio.numerator) - math.log(self.ratio.denominator)

    def __mul__(self, other: ExactLog) -> ExactLog:
        return ExactLog(self.ratio * other.ratio, self.factors + other.factors)

    def __str__(self):
        return f"log({self.ratio})"


@dataclass(frozen=True)
class Term:
    f: RationalFunction
    support: object = P1  # P1 or a Line

    def __str__(self):
        return f"({self.f}, {self.support})"


class Precycle0:
    """sum_a (f_a, Z_a); all supports must live in the same ambient space."""

    def __init__(self, terms):
        self.terms = [t if isinstance(t, Term) else Term(*t) for t in terms]
        for t in self.terms:
            if t.f.is_zero():
                raise ValueError("precycle functions must be nonzero")
        kinds = {t.support == P1 for t in self.terms}
        if len(kinds) > 1:
            raise ValueError("cannot mix P1 and P2-line supports in one precycle")

    @property
    def on_p1(self) -> bool:
        return all(t.support == P1 for t in self.terms)

    def __add__(self, other):
        return Precycle0(self.terms + other.terms)

    def __str__(self):
        return " + ".join(str(t) for t in self.terms) or "0"

    @classmethod
    def from_json(cls, obj) -> Precycle0:
        terms = []
        for item in obj["terms"]:
            f = parse_rational_function(str(item["f"]))
            sup = item.get("support", P1)
            if isinstance(sup, dict):
                sup = line_from_json(sup["line"])
            elif sup != P1:
                raise ValueError(f"unknown support {sup!r}")
            terms.append(Term(f, sup))
        return cls(terms)

    def to_json(self):
        return {"terms": [{"f": str(t.f),
                           "support": P1 if t.support == P1 else {"line": t.support.to_json()}}
                          for t in self.terms]}


def _term_boundary(term: Term) -> ZeroCycle:
    div = divisor_of(term.f)
    if term.support == P1:
        return ZeroCycle(div.support)
    out = []
    for place, n in div.items():
        if place.degree != 1:
            raise FactorDegreeExceeded(
                f"place {place} of {term.f} on {term.support} is not rational; "
                "P2-line supports need degree-1 places")
        out.append((point_of_place(term.support, place), n))
    return ZeroCycle(out)


def boundary(xi1p: Precycle0) -> ZeroCycle:
    out = ZeroCycle()
    for term in xi1p.terms:
        out = out + _term_boundary(term)
    return out


def _local_value(term: Term, key) -> Fraction | None:
    """|N(f(q))| if q lies on the support, else None."""
    if term.support == P1:
        if not isinstance(key, Place):
            raise ValueError(f"point {key} of P^2 paired with a P1 precycle")
        value = evaluate_at(term.f, key)
        return abs(residue_norm(value))
    if not isinstance(key, P2Point):
        raise ValueError(f"place {key} paired with a P2-line precycle")
    line = term.support
    if not line.contains(key):
        return None
    t = line.param_of(key)
    if t is not None and not t.is_real():
        raise ValueError(f"{key} is not a rational point")
    place = Place.infinity() if t is None else Place.rational(t.re)
    return abs(residue_norm(evaluate_at(term.f, place)))


def pair_m0(xi1p: Precycle0, xi2: ZeroCycle) -> ExactLog:
    common = boundary(xi1p).support() & xi2.support()
    if common:
        raise SupportsNotDisjoint(
            "boundary meets xi2 at " + ", ".join(sorted(str(c) for c in common)))
    ratio = Fraction(1)
    factors = []
    for term in xi1p.terms:
        for key, mult in xi2.items():
            value = _local_value(term, key)
            if value is None:
                continue
            if value == 0:
                raise NotAUnit(f"{term.f} vanishes at {key}")
            ratio *= value ** mult
            factors.append((str(term), str(key), mult, value))
    return ExactLog(ratio, tuple(factors))


def reciprocity_check(xi1p: Precycle0, xi2p: Precycle0) -> tuple[ExactLog, ExactLog]:
    """(<xi1', div xi2'>, <xi2', div xi1'>) for precycles on P^1."""
    if not (xi1p.on_p1 and xi2p.on_p1):
        raise ValueError("reciprocity is checked for precycles on P1")
    b1, b2 = boundary(xi1p), boundary(xi2p)
    common = b1.support() & b2.support()
    if common:
        raise SupportsNotDisjoint(
            "boundaries meet at " + ", ".join(sorted(str(c) for c in common)))
    return pair_m0(xi1p, b2), pair_m0(xi2p, b1)


class FiniteSelfMap:
    """t -> P(t)/Q(t) on P^1 with P, Q coprime, not both constant."""

    def __init__(self, num: Polynomial, den: Polynomial):
        if den.is_zero():
            raise DegenerateMap("denominator of the map is zero")
        if poly_gcd(num, den).degree > 0:
            raise DegenerateMap("numerator and denominator share a factor (zero resultant)")
        if max(num.degree, den.degree) < 1:
            raise DegenerateMap("constant map")
        self.num, self.den = num, den

    @classmethod
    def parse(cls, text: str) -> FiniteSelfMap:
        f = parse_rational_function(text)
        return cls(f.num, f.den)

    @classmethod
    def from_function(cls, f: RationalFunction) -> FiniteSelfMap:
        return cls(f.num, f.den)

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def __str__(self):
        return str(RationalFunction(self.num, self.den))


def norm_along(phi: FiniteSelfMap, f: RationalFunction) -> RationalFunction:
    """s -> prod_{phi(t) = s} f(t), via Res_t(P(t) - s Q(t), f)."""
    n = phi.degree
    a = [Polynomial([phi.num[k], -phi.den[k]]) for k in range(n + 1)]
    lc = a[-1]
    zero, one = Polynomial(), Polynomial([1])

    def res(b: Polynomial):
        return sylvester_resultant(a, [Polynomial([c]) for c in b.coeffs], zero, one)

    num = res(f.num) * lc ** f.den.degree
    den = res(f.den) * lc ** f.num.degree
    return RationalFunction(num, den)


def pushforward_precycle(phi: FiniteSelfMap, xi1p: Precycle0) -> Precycle0:
    if not xi1p.on_p1:
        raise ValueError("push-forward is defined for precycles on P1")
    return Precycle0([Term(norm_along(phi, t.f), P1) for t in xi1p.terms])


def _fiber(phi: FiniteSelfMap, q: Place) -> dict:
    """phi^*(q) as {Place: multiplicity}."""
    P, Q, n = phi.num, phi.den, phi.degree
    if q.is_infinity:
        h, total = Q, n
    elif q.degree == 1:
        h, total = P - Q * q.root, n
    else:
        c1, c0 = q.minpoly[1], q.minpoly[0]
        h, total = P * P + P * Q * c1 + Q * Q * c0, 2 * n
    out = dict(factor_places(h))
    at_inf = total - h.degree
    if at_inf:
        out[Place.infinity()] = at_inf
    return out


def pullback_cycle(phi: FiniteSelfMap, xi2: ZeroCycle) -> ZeroCycle:
    acc = []
    for key, mult in xi2.items():
        if not isinstance(key, Place):
            raise ValueError("pull-back is defined for 0-cycles on P1")
        for p, e in _fiber(phi, key).items():
            acc.append((p, mult * e))
    return ZeroCycle(acc)
