"""Elliptic curves over Q, canonical heights by the doubling limit, the
Neron-Tate pairing, and the graded height pairing for products of curves.

Height normalisation: h(P) = log max(|num x(P)|, den x(P)) and
canonical_height(P) = lim 4^-n h(2^n P) (no factor 1/2), so that
nt_pairing(P, P) = canonical_height(P).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

import mpmath

from .errors import NotOnCurve, PrecisionUnreachable

MAX_DOUBLINGS = 12
MIN_TOL = 1e-6


@dataclass(frozen=True)
class EllipticCurveQ:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.discriminant == 0:
            raise ValueError(f"singular curve {self.ainvs}")

    @classmethod
    def from_list(cls, coeffs) -> EllipticCurveQ:
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) == 2:
            coeffs = [0, 0, 0] + coeffs
        if len(coeffs) != 5:
            raise ValueError("curve needs [a1,a2,a3,a4,a6] or [a4,a6]")
        return cls(*coeffs)

    @property
    def ainvs(self):
        return [self.a1, self.a2, self.a3, self.a4, self.a6]

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def contains(self, P: ECPoint) -> bool:
        if P.is_zero():
            return True
        x, y = P.x, P.y
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x ** 3 + a2 * x * x + a4 * x + a6

    def point(self, x, y) -> ECPoint:
        P = ECPoint(Fraction(x), Fraction(y), 1)
        if not self.contains(P):
            raise NotOnCurve(f"({x}, {y}) is not on {self}")
        return P

    def __str__(self):
        return f"E{self.ainvs}"


@dataclass(frozen=True)
class ECPoint:
    """Projective (X:Y:Z) with Z in {0, 1}; the identity is (0:1:0)."""

    X: Fraction
    Y: Fraction
    Z: int = 1

    @classmethod
    def zero(cls) -> ECPoint:
        return cls(Fraction(0), Fraction(1), 0)

    def is_zero(self) -> bool:
        return self.Z == 0

    @property
    def x(self) -> Fraction:
        return self.X

    @property
    def y(self) -> Fraction:
        return self.Y

    def __str__(self):
        return "O" if self.is_zero() else f"({self.X}, {self.Y})"

    def to_json(self):
        return None if self.is_zero() else [str(self.X), str(self.Y)]


def _check(E, *points):
    for P in points:
        if not E.contains(P):
            raise NotOnCurve(f"{P} is not on {E}")


def ec_neg(E: EllipticCurveQ, P: ECPoint) -> ECPoint:
    _check(E, P)
    if P.is_zero():
        return P
    return ECPoint(P.x, -P.y - E.a1 * P.x - E.a3)


def ec_add(E: EllipticCurveQ, P: ECPoint, Q: ECPoint) -> ECPoint:
    _check(E, P, Q)
    return _add(E, P, Q)


def _add(E, P, Q):
    if P.is_zero():
        return Q
    if Q.is_zero():
        return P
    a1, a2, a3, a4, a6 = E.ainvs
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return ECPoint.zero()
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return ECPoint(x3, y3)


def ec_double(E: EllipticCurveQ, P: ECPoint) -> ECPoint:
    return ec_add(E, P, P)


def ec_mul(E: EllipticCurveQ, n: int, P: ECPoint) -> ECPoint:
    _check(E, P)
    if n < 0:
        return ec_mul(E, -n, ec_neg(E, P))
    out, base = ECPoint.zero(), P
    while n:
        if n & 1:
            out = _add(E, out, base)
        base = _add(E, base, base)
        n >>= 1
    return out


def torsion_order(E: EllipticCurveQ, P: ECPoint, bound: int = 12) -> int | None:
    """Order of P if it is at most ``bound`` (Mazur: torsion over Q has order <= 12)."""
    Q = P
    for n in range(1, bound + 1):
        if Q.is_zero():
            return n
        Q = _add(E, Q, P)
    return None


def naive_height(P: ECPoint) -> float:
    if P.is_zero():
        return 0.0
    x = P.x
    return math.log(max(abs(x.numerator), x.denominator))


def _doubling_forms(E):
    """Integer binary quartics F, G with x(2P) = F(X, Z) / G(X, Z) for x(P) = X/Z,
    coefficients listed by descending power of X."""
    b2, b4, b6, b8 = E.b_invariants
    F = [1, 0, -b4, -2 * b6, -b8]
    G = [0, 4, b2, 2 * b4, b6]
    return F, G


def _solve(rows, rhs):
    n = len(rows)
    m = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                fac = m[r][col]
                m[r] = [a - fac * b for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _bezout_identity(F, G, target):
    """Cubics f, g with f F + g G = R * X^(7-target) Z^target, R a positive
    integer; returns (R, |f|_1 + |g|_1)."""
    # unknowns f0..f3, g0..g3 (descending powers of X); equations for X^7..X^0
    rows = []
    for k in range(8):
        row = []
        for j in range(4):
            i = k - j
            row.append(F[i] if 0 <= i <= 4 else 0)
        for j in range(4):
            i = k - j
            row.append(G[i] if 0 <= i <= 4 else 0)
        rows.append(row)
    rhs = [0] * 8
    rhs[target] = 1
    sol = _solve(rows, rhs)
    den = reduce(lambda a, b: a * b // gcd(a, b), (s.denominator for s in sol), 1)
    ints = [int(s * den) for s in sol]
    return den, sum(abs(v) for v in ints)


def height_difference_bound(E: EllipticCurveQ) -> float:
    """C with |h(2Q) - 4 h(Q)| <= C for every Q in E(Q)."""
    F, G = _doubling_forms(E)
    upper = math.log(max(sum(abs(c) for c in F), sum(abs(c) for c in G)))
    r_z, s_z = _bezout_identity(F, G, 7)
    r_x, s_x = _bezout_identity(F, G, 0)
    lcm_r = r_z * r_x // gcd(r_z, r_x)
    # max(|F|,|G|) >= M^4 * min(R/S); gcd(F, G) divides lcm(R_z, R_x)
    lower = math.log(lcm_r) - math.log(min(r_z / s_z, r_x / s_x))
    return max(upper, lower, 0.0)


def doublings_needed(E: EllipticCurveQ, tol: float) -> int:
    c = height_difference_bound(E)
    n = 0
    while c / 3 * 4.0 ** -n >= tol:
        n += 1
    return n


def _x_doubling_heights(E, P, n, dps=50):
    """log max(|X|, |Z|) of x(2^n P) in lowest terms.

    The coprime pair (X, Z) is carried modulo L^(n+1), which is enough to get
    each step's gcd exactly since that gcd divides L.  The size is carried as
    log|Z| together with x = X/Z in floating point."""
    F, G = _doubling_forms(E)
    r_z, r_x = _bezout_identity(F, G, 7)[0], _bezout_identity(F, G, 0)[0]
    L = r_z * r_x // gcd(r_z, r_x)
    M = L ** (n + 1)
    X, Z = P.x.numerator % M, P.x.denominator % M
    with mpmath.workdps(dps):
        x = mpmath.mpf(P.x.numerator) / P.x.denominator
        logz = mpmath.log(P.x.denominator)
        for _ in range(n):
            nX = (X ** 4 + F[2] * X ** 2 * Z ** 2 + F[3] * X * Z ** 3 + F[4] * Z ** 4) % M
            nZ = (G[1] * X ** 3 * Z + G[2] * X ** 2 * Z ** 2 + G[3] * X * Z ** 3 + G[4] * Z ** 4) % M
            g = gcd(gcd(L, nX), nZ)
            M //= g
            X, Z = nX // g, nZ // g
            fx = x ** 4 + F[2] * x ** 2 + F[3] * x + F[4]
            gx = G[1] * x ** 3 + G[2] * x ** 2 + G[3] * x + G[4]
            logz = 4 * logz + mpmath.log(abs(gx)) - mpmath.log(g)
            x = fx / gx
        return float(logz + max(mpmath.mpf(0), mpmath.log(abs(x))))


def canonical_height(E: EllipticCurveQ, P: ECPoint, tol: float = 1e-6,
                     max_doublings: int = MAX_DOUBLINGS, doublings: int | None = None) -> float:
    """4^-n h(2^n P) with n the least integer making the tail bound
    C/3 * 4^-n fall below tol (or ``doublings`` if given)."""
    _check(E, P)
    if tol < MIN_TOL:
        raise ValueError(f"tol must be at least {MIN_TOL:g}")
    n = doublings_needed(E, tol) if doublings is None else doublings
    if n > max_doublings:
        raise PrecisionUnreachable(f"tol {tol:g} needs {n} doublings (cap {max_doublings})")
    if torsion_order(E, P) is not None:
        return 0.0
    return _x_doubling_heights(E, P, n) / 4.0 ** n


def nt_pairing(E: EllipticCurveQ, P: ECPoint, Q: ECPoint, tol: float = 1e-6, **kw) -> float:
    hpq = canonical_height(E, ec_add(E, P, Q), tol, **kw)
    return 0.5 * (hpq - canonical_height(E, P, tol, **kw) - canonical_height(E, Q, tol, **kw))


@dataclass(frozen=True)
class DegreeZeroDivisorClass:
    terms: tuple  # ((ECPoint, multiplicity), ...)

    def __post_init__(self):
        if sum(n for _, n in self.terms) != 0:
            raise ValueError("divisor class must have degree 0")

    @classmethod
    def difference(cls, P: ECPoint, Q: ECPoint) -> DegreeZeroDivisorClass:
        return cls(((P, 1), (Q, -1)))


def class_to_point(E: EllipticCurveQ, d: DegreeZeroDivisorClass) -> ECPoint:
    out = ECPoint.zero()
    for P, n in d.terms:
        out = _add(E, out, ec_mul(E, n, P))
    return out


def intersection_form(genus: int):
    """Gram matrix on (Delta, e x C, C x e) for a curve of the given genus."""
    return [[2 - 2 * genus, 1, 1],
            [1, 0, 1],
            [1, 1, 0]]


def delta11_self_intersection(genus: int) -> int:
    """deg of (Delta - e x C - C x e)^2 on C x C."""
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    gram = intersection_form(genus)
    v = (1, -1, -1)
    return sum(v[i] * gram[i][j] * v[j] for i in range(3) for j in range(3))


def lemma_height_relation(deg_w1w2: int, E: EllipticCurveQ, a1: DegreeZeroDivisorClass,
                          a2: DegreeZeroDivisorClass, tol: float = 1e-6, **kw) -> float:
    if deg_w1w2 == 0:
        return 0.0
    return deg_w1w2 * nt_pairing(E, class_to_point(E, a1), class_to_point(E, a2), tol, **kw)


def graded_height_ex5(E: EllipticCurveQ, p1: ECPoint, q1: ECPoint, p2: ECPoint, q2: ECPoint,
                      genera, tol: float = 1e-6, **kw) -> float:
    """prod_j deg(Delta_{C_j}(1,1)^2) * <p1 - q1, p2 - q2>_NT."""
    if p1 == q1 or p2 == q2:
        raise ValueError("p1 != q1 and p2 != q2 are required")
    factor = 1
    for g in genera:
        factor *= delta11_self_intersection(g)
    if factor == 0:
        return 0.0
    a1 = DegreeZeroDivisorClass.difference(p1, q1)
    a2 = DegreeZeroDivisorClass.difference(p2, q2)
    return lemma_height_relation(factor, E, a1, a2, tol, **kw)
