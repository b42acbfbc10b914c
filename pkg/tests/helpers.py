"""Random generators and independent numerical oracles shared by the tests."""
from __future__ import annotations

import math
import random
from fractions import Fraction as F

import mpmath

from heightlab.arch_pairing import (P1, FiniteSelfMap, Precycle0, Term, ZeroCycle, pair_m0,
                                    pullback_cycle, pushforward_precycle)
from heightlab.errors import FactorDegreeExceeded, NotAUnit, SupportsNotDisjoint
from heightlab.funcfield import RationalFunction, divisor_of
from heightlab.gaussian import GaussQ
from heightlab.klm_regulator import K1Precycle, K1Term
from heightlab.poly import Polynomial, poly_gcd
from heightlab.projective import Line, P2Function, cross


def _coeff(rng, lo=-20, hi=20, nonzero=False):
    while True:
        c = rng.randint(lo, hi)
        if c or not nonzero:
            return F(c)


def random_low_degree_factor(rng) -> Polynomial:
    """A linear factor or a quadratic with coefficients in [-20, 20]."""
    if rng.random() < 0.5:
        return Polynomial([_coeff(rng), _coeff(rng, nonzero=True)])
    return Polynomial([_coeff(rng), _coeff(rng), _coeff(rng, nonzero=True)])


def random_poly(rng, max_factors=3) -> Polynomial:
    p = Polynomial([_coeff(rng, nonzero=True)])
    for _ in range(rng.randint(0, max_factors)):
        p = p * random_low_degree_factor(rng)
    return p


def random_function(rng, max_factors=3) -> RationalFunction:
    return RationalFunction(random_poly(rng, max_factors), random_poly(rng, max_factors))


def real_roots_and_lead(p: Polynomial):
    coeffs = [complex(c) for c in reversed(p.coeffs)]
    roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200) if p.degree > 0 else []
    return [complex(r) for r in roots], complex(p.coeffs[-1])


def numeric_place_norm(f: RationalFunction, place) -> float:
    """|N(f(place))| from the complex roots of the place polynomial."""
    if place.is_infinity:
        dn, dd = f.num.degree, f.den.degree
        if dn != dd:
            raise ValueError("f has a zero or pole at infinity")
        return abs(float(f.num.coeffs[-1] / f.den.coeffs[-1]))
    roots, _ = real_roots_and_lead(place.minpoly)
    out = 1.0
    for r in roots:
        out *= abs(_ev(f.num, r) / _ev(f.den, r))
    return out


def _ev(p: Polynomial, z: complex) -> complex:
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * z + complex(c)
    return acc


# ---- self-maps of P^1 ---------------------------------------------------------

def random_map(rng, kind=None):
    """Numerator and denominator of a Moebius (kind "moebius") or quadratic self-map of P^1."""
    while True:
        if (kind or rng.choice(["moebius", "quadratic"])) == "moebius":
            num = Polynomial([F(rng.randint(-5, 5)), F(rng.randint(-5, 5))])
            den = Polynomial([F(rng.randint(-5, 5)), F(rng.randint(-5, 5))])
        else:
            num = Polynomial([F(rng.randint(-5, 5)) for _ in range(3)])
            den = Polynomial([F(rng.randint(-5, 5)) for _ in range(rng.choice([1, 2, 3]))])
        if den.is_zero() or num.is_zero() or max(num.degree, den.degree) < 1:
            continue
        if poly_gcd(num, den).degree > 0:
            continue
        return num, den


def projection_pair(rng, kind=None):
    """One randomized admissible instance of the projection formula."""
    while True:
        phi = FiniteSelfMap(*random_map(rng, kind))
        f = random_function(rng, 2)
        xi2 = ZeroCycle(divisor_of(random_function(rng, 2)).support)
        try:
            xi1 = Precycle0([Term(f, P1)])
            left = pair_m0(xi1, pullback_cycle(phi, xi2))
            right = pair_m0(pushforward_precycle(phi, xi1), xi2)
        except (SupportsNotDisjoint, NotAUnit, FactorDegreeExceeded):
            continue
        return phi, left, right


# ---- P^2 configurations -----------------------------------------------------

def random_triangle_cycle(rng):
    """K1-cycle on the three sides of a triangle with positive vertices.

    g_j = -s_j * l_{j+1}/l_{j+2} on D_j = V(l_j); the arcs are the sides
    between the vertices, all inside the chart z0 + z1 + z2 > 0."""
    while True:
        vs = [tuple(rng.randint(1, 6) for _ in range(3)) for _ in range(3)]
        det = sum(a * b for a, b in zip(vs[0], cross(vs[1], vs[2])))
        if det:
            break
    ls = [cross(vs[(j + 1) % 3], vs[(j + 2) % 3]) for j in range(3)]
    terms = []
    for j in range(3):
        s = F(rng.randint(1, 5), rng.randint(1, 5))
        g = P2Function(-s, [(ls[(j + 1) % 3], 1), (ls[(j + 2) % 3], -1)])
        terms.append(K1Term(g, Line(ls[j])))
    return K1Precycle(terms), vs


def chart_point(v):
    L = sum(v)
    return (F(v[0], L), F(v[1], L))


def inside_triangle(p, verts) -> bool:
    """Exact strict point-in-triangle test in the affine chart."""
    a, b, c = verts

    def side(u, v, w):
        return (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0])

    s = [side(a, b, p), side(b, c, p), side(c, a, p)]
    return all(x > 0 for x in s) or all(x < 0 for x in s)


def chart_linear(p) -> P2Function:
    """(z0 + i z1 - p L)/L = w - p."""
    pc = GaussQ(F(p[0]), F(p[1]))
    form = (GaussQ(1) - pc, GaussQ(0, 1) - pc, -pc)
    return P2Function(1, [(form, 1), ((1, 1, 1), -1)])


def random_complex_form(rng):
    return tuple(GaussQ(F(rng.randint(-9, 9), rng.randint(1, 4)),
                        F(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4)))
                 for _ in range(3))


def random_p2_function(rng, constant_ok=True) -> P2Function:
    c = GaussQ(F(rng.randint(1, 9), rng.randint(1, 9)), F(rng.randint(-5, 5), rng.randint(1, 9)))
    if constant_ok and rng.random() < 0.4:
        return P2Function.constant(c)
    return P2Function(c, [(random_complex_form(rng), 1), (random_complex_form(rng), -1)])


def random_interior_point(rng, verts):
    w = [F(rng.randint(1, 9)) for _ in range(3)]
    s = sum(w)
    return (sum(wi * v[0] for wi, v in zip(w, verts)) / s,
            sum(wi * v[1] for wi, v in zip(w, verts)) / s)


# ---- independent quadrature of the m = 1 pairing --------------------------------

def mp_pairing(gamma, f1: P2Function, f2: P2Function, dps=20) -> float:
    """-2 pi * sum over arcs of the integral of log|f1| darg f2 - log|f2| darg f1.

    Each arc is affine in its parameter, so it is rebuilt from its two
    endpoints; darg comes from numerical differentiation of log f and the
    integral from tanh-sinh quadrature."""
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for arc in gamma.arcs:
            a = [mpmath.mpc(complex(c)) for c in arc.point(0.0)]
            b = [mpmath.mpc(complex(c)) for c in arc.point(1.0)]
            m = [mpmath.mpc(complex(c)) for c in arc.point(0.5)]
            v = [bi - ai for ai, bi in zip(a, b)]
            assert all(abs(ai + vi / 2 - mi) < 1e-9 for ai, vi, mi in zip(a, v, m))

            def fval(f, z):
                val = mpmath.mpc(complex(f.scalar))
                for ln, e in f.factors.items():
                    val *= sum(mpmath.mpc(complex(c)) * zi for c, zi in zip(ln.form, z)) ** e
                return val

            def integrand(u):
                z = [ai + u * vi for ai, vi in zip(a, v)]
                g1, g2 = fval(f1, z), fval(f2, z)
                d1 = mpmath.diff(lambda s: fval(f1, [ai + s * vi for ai, vi in zip(a, v)]), u)
                d2 = mpmath.diff(lambda s: fval(f2, [ai + s * vi for ai, vi in zip(a, v)]), u)
                return mpmath.log(abs(g1)) * mpmath.im(d2 / g2) - mpmath.log(abs(g2)) * mpmath.im(d1 / g1)

            total += mpmath.quad(integrand, [0, 0.5, 1])
        return float(-2 * mpmath.pi * total)


def triangle_value(f1=2) -> float:
    return -4 * math.pi ** 2 * math.log(abs(f1))


def rng_for(seed):
    return random.Random(seed)


# ---- exact doubling oracle for canonical heights ------------------------------------

def exact_doubling_height(E, P, n) -> float:
    """4^-n log max(|X|, |Z|) of x(2^n P), with plain integer doubling and full gcds."""
    b2, b4, b6, b8 = E.b_invariants
    X, Z = P.x.numerator, P.x.denominator
    for _ in range(n):
        nX = X ** 4 - b4 * X ** 2 * Z ** 2 - 2 * b6 * X * Z ** 3 - b8 * Z ** 4
        nZ = 4 * X ** 3 * Z + b2 * X ** 2 * Z ** 2 + 2 * b4 * X * Z ** 3 + b6 * Z ** 4
        if nZ == 0:
            return 0.0
        g = math.gcd(nX, nZ)
        X, Z = nX // g, nZ // g
    m = max(abs(X), abs(Z))
    return float(mpmath.log(m)) / 4 ** n
