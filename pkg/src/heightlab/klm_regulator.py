"""The real m = 1 pairing of a K1-cycle on lines in P^2 with a tame-symbol
cycle:

    <xi1, xi2>_R = -2 pi * integral over gamma of (log|f1| darg f2 - log|f2| darg f1),

where gamma is the sum of the arcs g_j^{-1}[-inf, 0] on the lines D_j.

Cycle-level bookkeeping (boundaries, tame symbols, arc endpoints, general
position) is exact over Q(i); only the line integrals are numerical.

Arc convention: an arc runs from g^{-1}(0) to g^{-1}(inf).  Writing P0 and
Pinf for those points and K for the value of g at P0 + Pinf, the arc is
x(u) = (1 - u) P0 - (u / K) Pinf for u in [0, 1], so that
g(x(u)) = -u / (1 - u).  Orientation "native" keeps this direction;
"ccw"/"cw" reorient the whole contour by the sign of its signed area in
the affine chart (z0/L, z1/L), L = z0 + z1 + z2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arch_pairing import ZeroCycle
from .errors import (GeneralPositionFailure, NotMoebius, OpenContour, RoundingAmbiguous,
                     SingularityOnPath)
from .gaussian import GaussQ, parse_gauss
from .projective import Line, P2Function, P2Point, dot, line_from_json
from .quadrature import integrate

DEFAULT_TOL = 1e-9
DEFAULT_GUARD = 1e-8
CHART = (1, 1, 1)


@dataclass(frozen=True)
class K1Term:
    g: P2Function
    line: Line

    def __str__(self):
        return f"({self.g}, {self.line})"


class K1Precycle:
    def __init__(self, terms):
        self.terms = [t if isinstance(t, K1Term) else K1Term(*t) for t in terms]

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        return " + ".join(str(t) for t in self.terms) or "0"

    @classmethod
    def from_json(cls, obj) -> K1Precycle:
        return cls([K1Term(P2Function.from_json(item["g"]), line_from_json(item["line"]))
                    for item in obj["terms"]])

    def to_json(self):
        return {"terms": [{"g": t.g.to_json(), "line": t.line.to_json()} for t in self.terms]}


@dataclass(frozen=True)
class SymbolPair:
    f1: P2Function
    f2: P2Function

    @classmethod
    def from_json(cls, obj) -> SymbolPair:
        return cls(P2Function.from_json(obj["f1"]), P2Function.from_json(obj["f2"]))

    def to_json(self):
        return {"f1": self.f1.to_json(), "f2": self.f2.to_json()}


def triangle_precycle() -> K1Precycle:
    """g0 = -z1/z2 on V(z0), g1 = -z2/z0 on V(z1), g2 = -z0/z1 on V(z2)."""
    z = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    terms = []
    for j in range(3):
        num, den = z[(j + 1) % 3], z[(j + 2) % 3]
        terms.append(K1Term(P2Function(-1, [(num, 1), (den, -1)]), Line(z[j])))
    return K1Precycle(terms)


def triangle_h(p=(Fraction(3, 10), Fraction(3, 10))) -> P2Function:
    """(z0 + i z1 - p L) / L, i.e. w - p in the chart w = t0 + i t1."""
    pc = GaussQ(Fraction(p[0]), Fraction(p[1]))
    one, i = GaussQ(1), GaussQ(0, 1)
    form = (one - pc, i - pc, -pc)
    return P2Function(1, [(form, 1), (CHART, -1)])


def triangle_symbol_pair(f1=2, p=(Fraction(3, 10), Fraction(3, 10))) -> SymbolPair:
    return SymbolPair(P2Function.constant(parse_gauss(f1)), triangle_h(p))


def k1_boundary_check(xi1: K1Precycle) -> ZeroCycle:
    """sum_j div_{D_j}(g_j); empty exactly when xi1 is a cycle."""
    out = ZeroCycle()
    for term in xi1:
        out = out + ZeroCycle(term.g.restrict(term.line).divisor())
    return out


def tame_symbol_cycle(sp: SymbolPair) -> K1Precycle:
    """T{f1, f2} = sum_D ((-1)^(ab) f1^b / f2^a |_D, D), a = ord_D f1, b = ord_D f2."""
    lines = sorted(set(sp.f1.factors) | set(sp.f2.factors), key=Line.sort_key)
    terms = []
    for line in lines:
        a, b = sp.f1.order_along(line), sp.f2.order_along(line)
        sym = (sp.f1 ** b) / (sp.f2 ** a)
        if (a * b) % 2:
            sym = -sym
        sym.restrict(line)  # raises IndeterminateRestriction
        if sym.is_constant() and sym.scalar == 1:
            continue
        terms.append(K1Term(sym, line))
    return K1Precycle(terms)


class Arc:
    def __init__(self, line: Line, start: P2Point, end: P2Point, k: GaussQ, reverse=False):
        self.line = line
        self.zero, self.pole, self.k = start, end, k
        self.reverse = reverse
        p0 = [complex(c) for c in start.coords]
        pinf = [complex(c) for c in end.coords]
        kc = complex(k)
        self._p0 = p0
        self._v = [-a - b / kc for a, b in zip(p0, pinf)]

    @property
    def start(self) -> P2Point:
        return self.pole if self.reverse else self.zero

    @property
    def end(self) -> P2Point:
        return self.zero if self.reverse else self.pole

    def reversed(self) -> Arc:
        return Arc(self.line, self.zero, self.pole, self.k, not self.reverse)

    def point(self, u: float):
        if self.reverse:
            u = 1.0 - u
        return [a + u * v for a, v in zip(self._p0, self._v)]

    def velocity(self):
        return [-v for v in self._v] if self.reverse else list(self._v)

    def is_real(self) -> bool:
        return self.zero.is_real() and self.pole.is_real() and self.k.is_real()

    def __str__(self):
        return f"{self.start} -> {self.end} on {self.line}"


class Contour:
    def __init__(self, arcs, closed: bool):
        self.arcs = list(arcs)
        self.closed = closed

    def reversed(self) -> Contour:
        return Contour([a.reversed() for a in self.arcs], self.closed)

    def endpoint_cycle(self) -> ZeroCycle:
        """sum over arcs of (start) - (end)."""
        return ZeroCycle([(a.start, 1) for a in self.arcs] + [(a.end, -1) for a in self.arcs])

    def signed_area(self, chart=CHART) -> Fraction:
        """Shoelace area of the closed real contour in the chart (z0/L, z1/L)."""
        total = Fraction(0)
        for arc in self.arcs:
            if not arc.is_real():
                raise ValueError("orientation needs a contour of real arcs")
            l0 = dot(chart, arc.zero.coords).re
            l1 = dot(chart, arc.pole.coords).re
            if l0 == 0 or l1 == 0 or (l0 > 0) != ((-l1 / arc.k.re) > 0):
                raise ValueError(f"arc {arc} leaves the affine chart")
            a = [c.re / dot(chart, arc.start.coords).re for c in arc.start.coords]
            b = [c.re / dot(chart, arc.end.coords).re for c in arc.end.coords]
            total += a[0] * b[1] - a[1] * b[0]
        return total / 2

    def __len__(self):
        return len(self.arcs)


def _arc_of(term: K1Term) -> Arc | None:
    lf = term.g.restrict(term.line)
    div = lf.divisor()
    if not div:
        value = lf.scalar
        if value.is_real() and value.re <= 0:
            raise NotMoebius(f"constant {value} on {term.line}: preimage of [-inf, 0] is the whole line")
        return None
    zeros = [p for p, n in div.items() if n > 0]
    poles = [p for p, n in div.items() if n < 0]
    if len(zeros) != 1 or len(poles) != 1 or div[zeros[0]] != 1 or div[poles[0]] != -1:
        raise NotMoebius(f"{term.g} restricted to {term.line} has degree > 1")
    p0, pinf = zeros[0], poles[0]
    mid = P2Point(tuple(a + b for a, b in zip(p0.coords, pinf.coords)))
    k = lf.value_at(mid)
    return Arc(term.line, p0, pinf, k)


def build_gamma(xi1: K1Precycle) -> Contour:
    arcs = [a for a in (_arc_of(t) for t in xi1) if a is not None]
    starts = ZeroCycle([(a.start, 1) for a in arcs])
    ends = ZeroCycle([(a.end, 1) for a in arcs])
    closed = starts == ends
    if arcs and not closed:
        boundary = k1_boundary_check(xi1)
        if not boundary:
            raise OpenContour("arc endpoints do not chain although the boundary vanishes")
    return Contour(arcs, closed)


def orient(gamma: Contour, orientation: str = "ccw") -> Contour:
    if orientation == "native" or not gamma.arcs:
        return gamma
    if orientation not in ("ccw", "cw"):
        raise ValueError(f"unknown orientation {orientation!r}")
    area = gamma.signed_area()
    if area == 0:
        raise ValueError("contour has zero signed area; orientation is undefined")
    if (area > 0) != (orientation == "ccw"):
        return gamma.reversed()
    return gamma


def _cforms(f: P2Function):
    return [(tuple(complex(c) for c in ln.form), e) for ln, e in f.items()]


def _check_guard(forms, z, guard):
    nz = math.sqrt(sum(abs(c) ** 2 for c in z))
    for form, _ in forms:
        nf = math.sqrt(sum(abs(c) ** 2 for c in form))
        if abs(form[0] * z[0] + form[1] * z[1] + form[2] * z[2]) < guard * nf * nz:
            raise SingularityOnPath(f"zero or pole within {guard:g} of the path")


def _check_arc(forms, arc, guard):
    """Each form is affine along the arc, so its smallest modulus on [0, 1]
    is found in closed form instead of only at quadrature nodes."""
    p0, v = arc._p0, arc._v
    for form, _ in forms:
        a = form[0] * p0[0] + form[1] * p0[1] + form[2] * p0[2]
        b = form[0] * v[0] + form[1] * v[1] + form[2] * v[2]
        u = 0.0 if b == 0 else min(1.0, max(0.0, -(a * b.conjugate()).real / abs(b) ** 2))
        _check_guard([(form, 1)], [x + u * y for x, y in zip(p0, v)], guard)


def _dlog_im(forms, z, v) -> float:
    out = 0.0
    for form, e in forms:
        lz = form[0] * z[0] + form[1] * z[1] + form[2] * z[2]
        lv = form[0] * v[0] + form[1] * v[1] + form[2] * v[2]
        out += e * (lv / lz).imag
    return out


def _log_abs(scalar: complex, forms, z) -> float:
    out = math.log(abs(scalar))
    for form, e in forms:
        out += e * math.log(abs(form[0] * z[0] + form[1] * z[1] + form[2] * z[2]))
    return out


def integrate_darg(f: P2Function, arc: Arc, tol=DEFAULT_TOL, guard=DEFAULT_GUARD) -> float:
    """Change of arg f along the arc, by adaptive quadrature of Im(f'/f)."""
    forms = _cforms(f)
    if not forms:
        return 0.0
    v = arc.velocity()
    _check_arc(forms, arc, guard)

    def integrand(u):
        z = arc.point(u)
        _check_guard(forms, z, guard)
        return _dlog_im(forms, z, v)

    return integrate(integrand, 0.0, 1.0, rtol=tol)[0]


def contour_darg(f: P2Function, gamma: Contour, tol=DEFAULT_TOL, guard=DEFAULT_GUARD) -> float:
    return math.fsum(integrate_darg(f, arc, tol, guard) for arc in gamma.arcs)


def winding_number(f: P2Function, gamma: Contour, orientation="ccw",
                   tol=DEFAULT_TOL, guard=DEFAULT_GUARD) -> int:
    if not gamma.closed:
        raise OpenContour("winding number needs a closed contour")
    total = contour_darg(f, orient(gamma, orientation), tol, guard) / (2 * math.pi)
    n = round(total)
    if abs(total - n) >= 0.01:
        raise RoundingAmbiguous(f"total turning {total:.6f} is not near an integer")
    return int(n)


def general_position_check(xi1: K1Precycle, xi2: K1Precycle) -> None:
    """Supports of the two graphs in P^2 x (P^1 - {1}) must be disjoint."""
    for t1 in xi1:
        r1 = t1.g.restrict(t1.line)
        for t2 in xi2:
            if t1.line == t2.line:
                raise GeneralPositionFailure(f"both cycles live on {t1.line}")
            x = t1.line.meet(t2.line)
            v1 = r1.value_at(x)
            v2 = t2.g.restrict(t2.line).value_at(x)
            if v1 == v2 and v1 != 1:
                shown = "inf" if v1 is None else str(v1)
                raise GeneralPositionFailure(f"graphs meet over {x} at value {shown}")


def pair_m1_breakdown(xi1: K1Precycle, sp: SymbolPair, orientation="ccw",
                      tol=DEFAULT_TOL, guard=DEFAULT_GUARD) -> list[dict]:
    """Per-arc contributions to the real m = 1 pairing."""
    if k1_boundary_check(xi1):
        raise ValueError("xi1 is not a higher Chow cycle: its boundary is nonzero")
    general_position_check(xi1, tame_symbol_cycle(sp))
    gamma = orient(build_gamma(xi1), orientation)
    s1, s2 = complex(sp.f1.scalar), complex(sp.f2.scalar)
    f1, f2 = _cforms(sp.f1), _cforms(sp.f2)
    out = []
    for arc in gamma.arcs:
        v = arc.velocity()
        for forms in (f1, f2):
            _check_arc(forms, arc, guard)

        def integrand(u, arc=arc, v=v):
            z = arc.point(u)
            _check_guard(f1, z, guard)
            _check_guard(f2, z, guard)
            return (_log_abs(s1, f1, z) * _dlog_im(f2, z, v)
                    - _log_abs(s2, f2, z) * _dlog_im(f1, z, v))

        value, err, n = integrate(integrand, 0.0, 1.0, rtol=tol)
        out.append({"arc": str(arc), "integral": value, "error": err, "intervals": n,
                    "contribution": -2 * math.pi * value})
    return out


def pair_m1_real(xi1: K1Precycle, sp: SymbolPair, orientation="ccw",
                 tol=DEFAULT_TOL, guard=DEFAULT_GUARD) -> float:
    parts = pair_m1_breakdown(xi1, sp, orientation, tol, guard)
    return math.fsum(p["contribution"] for p in parts)


def current_identity_check_m1(xi: K1Precycle) -> dict:
    """Endpoints of gamma against the boundary of xi, both as exact 0-cycles."""
    lhs = build_gamma(xi).endpoint_cycle()
    rhs = k1_boundary_check(xi)
    return {"endpoint_cycle": lhs.to_json(), "boundary_cycle": rhs.to_json(), "equal": lhs == rhs}
