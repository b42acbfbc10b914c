"""Acceptance criteria, one test each.  Every test prints a single
``criterion N: PASS|FAIL  detail`` line (visible with ``pytest -s`` or when
run as a script) and then asserts."""
import math
import sys
import time
from fractions import Fraction as F

import pytest

from heightlab.arakelov import Q, QuadraticField, factor_prime, product_formula_check, valuation
from heightlab.arch_pairing import P1, Precycle0, Term, ZeroCycle, pair_m0, reciprocity_check
from heightlab.errors import GeneralPositionFailure, SingularityOnPath, SupportsNotDisjoint
from heightlab.funcfield import parse_rational_function, weil_product
from heightlab.klm_regulator import (SymbolPair, build_gamma, pair_m1_real, triangle_h,
                                     triangle_precycle, triangle_symbol_pair, winding_number)
from heightlab.neron_tate import (EllipticCurveQ, canonical_height, delta11_self_intersection,
                                  ec_add, ec_double, ec_mul, ec_neg, graded_height_ex5, nt_pairing)
from heightlab.spreads import EC_CUBIC, EC_CYCLE, EX000, MPoly, spread, verify_spread

from helpers import (projection_pair, random_function, random_p2_function, random_triangle_cycle,
                     rng_for)

_capsys = None


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    if _capsys is not None:
        with _capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


@pytest.fixture(autouse=True)
def _show(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


# 1 ---------------------------------------------------------------------------

def test_criterion_1_weil_reciprocity():
    rng = rng_for(1001)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        if weil_product(random_function(rng), random_function(rng)) != 1:
            bad += 1
    dt = time.perf_counter() - t0
    report(1, bad == 0 and dt < 5, f"200 pairs, {bad} products != 1, {dt:.2f} s (limit 5 s)")


# 2 ---------------------------------------------------------------------------

def test_criterion_2_m0_reciprocity():
    rng = rng_for(1002)
    t0 = time.perf_counter()
    done = bad = 0
    while done < 100:
        f, g = random_function(rng, 2), random_function(rng, 2)
        try:
            a, b = reciprocity_check(Precycle0([Term(f, P1)]), Precycle0([Term(g, P1)]))
        except SupportsNotDisjoint:
            continue
        done += 1
        bad += a.ratio != b.ratio
    dt = time.perf_counter() - t0
    t = parse_rational_function("t")
    worked = pair_m0(Precycle0([Term(t, P1)]),
                     ZeroCycle.from_json([{"place": "t - 2", "mult": 1},
                                          {"place": "t - 3", "mult": -1}])).ratio
    ok = bad == 0 and worked == F(2, 3) and dt < 5
    report(2, ok, f"100 pairs, {bad} mismatches; worked ratio {worked}; {dt:.2f} s (limit 5 s)")


# 3 ---------------------------------------------------------------------------

def test_criterion_3_projection_formula():
    rng = rng_for(1003)
    bad = 0
    for k in range(50):
        _, left, right = projection_pair(rng, "moebius" if k % 2 else "quadratic")
        bad += left.ratio != right.ratio
    report(3, bad == 0, f"50 maps (25 Moebius, 25 quadratic), {bad} mismatches")


# 4 ---------------------------------------------------------------------------

def test_criterion_4_coordinate_triangle():
    t0 = time.perf_counter()
    val = pair_m1_real(triangle_precycle(), triangle_symbol_pair(2))
    w = winding_number(triangle_h(), build_gamma(triangle_precycle()))
    dt = time.perf_counter() - t0
    oracle = -2 * math.pi * math.log(2) * 2 * math.pi * w
    rel = abs(val - oracle) / abs(oracle)
    ok = w == 1 and rel <= 1e-6 and dt < 10
    report(4, ok, f"value {val:.12f}, oracle {oracle:.12f}, rel err {rel:.1e}, winding {w}, "
                  f"{dt:.2f} s (limit 10 s)")


# 5 ---------------------------------------------------------------------------

def test_criterion_5_bilinearity():
    tol = 1e-9
    seed, done, worst, bad = 5000, 0, 0.0, 0
    while done < 10:
        seed += 1
        rng = rng_for(seed)
        xi, _ = random_triangle_cycle(rng)
        f1 = random_p2_function(rng)
        f2, f2b = random_p2_function(rng, False), random_p2_function(rng, False)
        try:
            a, b, ab = (pair_m1_real(xi, SymbolPair(f1, g), tol=tol) for g in (f2, f2b, f2 * f2b))
        except (GeneralPositionFailure, SingularityOnPath):
            continue
        done += 1
        err = abs(ab - a - b)
        scale = max(1.0, abs(a) + abs(b))
        worst = max(worst, err / scale)
        bad += err > 2 * tol * scale
    report(5, bad == 0, f"10 configurations, worst |<f1,f2f2'> - <f1,f2> - <f1,f2'>| / scale "
                        f"= {worst:.1e} (limit 2*tol = {2 * tol:.0e})")


# 6 ---------------------------------------------------------------------------

NONTORSION = [([0, 0, 1, -1, 0], (0, 0)), ([0, 1, 1, -2, 0], (-1, 1)), ([0, 0, 1, -7, 6], (0, 2)),
              ([0, 0, 0, 0, -2], (3, 5)), ([0, 0, 0, 0, 17], (-2, 3))]
TORSION = [([0, 0, 0, 0, 1], (2, 3)), ([0, 0, 0, -1, 0], (0, 0)), ([0, -1, 1, 0, 0], (0, 0)),
           ([0, 0, 0, 0, 4], (0, 2)), ([0, 0, 0, -43, 166], (3, 8))]


def test_criterion_6_neron_tate():
    tol = 1e-6
    t0 = time.perf_counter()
    quad = []
    for c, xy in NONTORSION:
        E = EllipticCurveQ.from_list(c)
        P = E.point(*xy)
        quad.append(abs(canonical_height(E, ec_double(E, P), tol) - 4 * canonical_height(E, P, tol)))
    tors = []
    for c, xy in TORSION:
        E = EllipticCurveQ.from_list(c)
        tors.append(abs(canonical_height(E, E.point(*xy), tol)))
    E37 = EllipticCurveQ.from_list([0, 0, 1, -1, 0])
    h10 = canonical_height(E37, E37.point(0, 0), doublings=10)
    dt = time.perf_counter() - t0
    ok = max(quad) <= 5 * tol and max(tors) <= tol and abs(h10 - 0.05111) <= 1e-4 and dt < 30
    report(6, ok, f"max |h(2P) - 4h(P)| = {max(quad):.1e} (limit {5 * tol:.0e}), "
                  f"max torsion height {max(tors):.1e}, h(0,0) on 37a1 at n=10 = {h10:.8f}, "
                  f"{dt:.2f} s (limit 30 s)")


# 7 ---------------------------------------------------------------------------

def test_criterion_7_chow_kunneth():
    tol = 1e-6
    d_ok = all(delta11_self_intersection(g) == -2 * g for g in range(11))
    E = EllipticCurveQ.from_list([0, 1, 1, -2, 0])
    g1, g2 = E.point(-1, 1), E.point(0, 0)
    p1, q1 = g1, ec_mul(E, 2, g2)
    p2, q2 = ec_add(E, g1, g2), g2
    val = graded_height_ex5(E, p1, q1, p2, q2, [1], tol)
    ref = -2 * nt_pairing(E, ec_add(E, p1, ec_neg(E, q1)), ec_add(E, p2, ec_neg(E, q2)), tol)
    ok = d_ok and abs(val - ref) <= 3 * tol
    report(7, ok, f"delta11(g) = -2g for g = 0..10: {d_ok}; graded value {val:.9f} vs "
                  f"-2<p1-q1,p2-q2> = {ref:.9f}")


# 8 ---------------------------------------------------------------------------

def test_criterion_8_product_formula():
    import sympy
    worst, val_bad = 0.0, 0
    for k in (Q, QuadraticField(-1), QuadraticField(2), QuadraticField(-5)):
        rng = rng_for(8000 + abs(k.d))
        for _ in range(50):
            while True:
                a = F(rng.randint(-10 ** 4, 10 ** 4), rng.randint(1, 50))
                b = F(0) if k.is_rational else F(rng.randint(-10 ** 4, 10 ** 4), rng.randint(1, 50))
                if a or b:
                    break
            alpha = k.element(a, b)
            worst = max(worst, abs(product_formula_check(alpha)))
            N = alpha.norm
            for p in sympy.factorint(abs(N.numerator) * N.denominator):
                total = sum(P.f * valuation(alpha, P) for P in factor_prime(k, p))
                ordp = sympy.multiplicity(p, abs(N.numerator)) - sympy.multiplicity(p, N.denominator)
                val_bad += total != ordp
    ok = worst <= 1e-10 and val_bad == 0
    report(8, ok, f"200 elements over Q, Q(i), Q(sqrt 2), Q(sqrt -5): max |deg| = {worst:.1e} "
                  f"(limit 1e-10), {val_bad} valuation mismatches")


# 9 ---------------------------------------------------------------------------

def _canonical(sp):
    """Main polynomials and relations with fresh variables renamed by their constants."""
    def ren(poly):
        out = MPoly()
        for mono, c in poly.terms.items():
            term = MPoly.const(c)
            for v, e in mono:
                term = term * MPoly.var(f"<{sp.substitution.get(v, v)}>" if v in sp.substitution
                                        else v) ** e
            out = out + term
        return out
    return [ren(m) for m in sp.mains], {ren(r) for r in sp.relations}


def test_criterion_9_spreads():
    V = MPoly.var
    sp1 = spread(EX000)
    mains, rels = _canonical(sp1)
    pi, rpi, e = V("<pi>"), V("<sqrt(pi)>"), V("<e>")
    x, y = V("x"), V("y")
    ok1 = mains == [pi * y ** 2 + (rpi + 4) * x ** 3 + e * x] and rels == {pi - rpi ** 2}
    v1 = verify_spread(sp1, threshold=1e-30)["ok"]

    sp2 = spread([EC_CUBIC, EC_CYCLE], eliminate_pi=True)
    _, rels2 = _canonical(sp2)
    i, r3, r5 = V("<i>"), V("<sqrt(3)>"), V("<sqrt(5)>")
    ok2 = rels2 == {i ** 2 + 1, r3 ** 2 - 3, r5 ** 2 - 5}
    v2 = verify_spread(sp2, threshold=1e-30)["ok"]
    ok = ok1 and v1 and ok2 and v2
    report(9, ok, f"EX000 main {sp1.to_json()['main']!r} relations {sp1.to_json()['relations']} "
                  f"verified={v1}; cubic relations {sp2.to_json()['relations']} verified={v2}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
