import math
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.abc import x as X
from sympy.polys.numberfields.primes import prime_decomp

from heightlab.arakelov import (Q, ArakelovDivisor, InfinitePlace, QuadraticField,
                                degree, divisor_report, factor_prime, principal_divisor,
                                product_formula_check, valuation)
from heightlab.errors import ZeroElement

from helpers import rng_for

QI, QS2, QSm5 = QuadraticField(-1), QuadraticField(2), QuadraticField(-5)
FIELDS = [Q, QI, QS2, QSm5, QuadraticField(5), QuadraticField(-3), QuadraticField(13),
          QuadraticField(-7)]


def random_element(rng, k, lo=-60, hi=60):
    while True:
        a = F(rng.randint(lo, hi), rng.randint(1, 12))
        b = F(0) if k.is_rational else F(rng.randint(lo, hi), rng.randint(1, 12))
        if a or b:
            return k.element(a, b)


# ---- fields and primes ----------------------------------------------------------

def test_field_basics():
    assert QI.discriminant == -4 and QS2.discriminant == 8
    assert QuadraticField(5).discriminant == 5 and QuadraticField(5).half_basis
    assert QI.signature == (0, 1) and QS2.signature == (2, 0) and Q.signature == (1, 0)
    with pytest.raises(ValueError):
        QuadraticField(8)


def test_factor_prime_examples():
    (P,) = factor_prime(QI, 2)
    assert P.splitting == "ramified" and P.f == 1 and P.e == 2
    split = factor_prime(QI, 5)
    assert [P.splitting for P in split] == ["split", "split"]
    assert sorted(P.root for P in split) == [2, 3]
    (P,) = factor_prime(QS2, 3)
    assert P.splitting == "inert" and P.f == 2
    with pytest.raises(ValueError):
        factor_prime(QI, 15)


@pytest.mark.parametrize("k", FIELDS[1:])
def test_factor_prime_matches_sympy(k):
    c1, c0 = k.minpoly
    T = sympy.Poly(X ** 2 + c1 * X + c0, X)
    for p in sympy.primerange(2, 60):
        ours = sorted((P.e, P.f) for P in factor_prime(k, p))
        ref = sorted((P.e, P.f) for P in prime_decomp(p, T))
        assert ours == ref


def test_hensel_root():
    (P, _) = factor_prime(QI, 5)
    for j in range(1, 6):
        r = P.hensel_root(j)
        assert (r * r + 1) % 5 ** j == 0 and r % 5 == P.root


# ---- valuations ------------------------------------------------------------------

def test_valuation_examples():
    (P2,) = factor_prime(QI, 2)
    assert valuation(QI.element(1, 1), P2) == 1
    by_root = {P.root: P for P in factor_prime(QI, 5)}
    alpha = QI.element(2, 1)
    # 2 + i lies in the prime containing w - 3 (i = 3 mod 5)
    assert valuation(alpha, by_root[3]) == 1
    assert valuation(alpha, by_root[2]) == 0
    (P3,) = factor_prime(QS2, 3)
    assert valuation(QS2.element(3), P3) == 1
    assert valuation(QI.element(F(1, 4)), P2) == -4
    with pytest.raises(ZeroElement):
        valuation(QI.element(0), P2)


def _sympy_valuations(k, a, b, p):
    """{root or None: valuation} of the integral element a + b w.

    After removing the integer content, a primitive element lies in at most
    one prime over a split p, and there its valuation is ord_p of the norm;
    membership comes from sympy's prime decomposition."""
    c1, c0 = k.minpoly
    T = sympy.Poly(X ** 2 + c1 * X + c0, X)
    decomp = prime_decomp(p, T)
    c = math.gcd(a, b)
    a, b = a // c, b // c
    ordn = sympy.multiplicity(p, abs(a * a - a * b * c1 + b * b * c0))
    shift = sympy.multiplicity(p, c)

    def inside(P, poly):
        return P.reduce_element(P.ZK.parent.element_from_poly(sympy.Poly(poly, X))).equiv(0)

    out = {}
    for P in decomp:
        if len(decomp) == 2:
            root = next(r for r in range(p) if (r * r + c1 * r + c0) % p == 0 and inside(P, X - r))
            out[root] = shift + (ordn if inside(P, a + b * X) else 0)
        elif P.e == 2:
            out[None] = 2 * shift + ordn
        else:
            out[None] = shift + ordn // 2
    return out


@pytest.mark.parametrize("k", FIELDS[1:])
def test_valuation_matches_sympy(k):
    rng = rng_for(abs(k.d))
    for _ in range(12):
        a, b = rng.randint(-40, 40), rng.randint(-40, 40)
        if a == 0 and b == 0:
            continue
        n = int(abs(k.element(a, b).norm))
        for p in sorted(sympy.factorint(n)) if n > 1 else []:
            ref = _sympy_valuations(k, a, b, p)
            for P in factor_prime(k, p):
                key = P.root if P.splitting == "split" else None
                assert valuation(k.element(a, b), P) == ref[key], (k, a, b, P)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(FIELDS))
def test_valuation_consistency_with_norm(seed, k):
    alpha = random_element(rng_for(seed), k)
    N = alpha.norm
    for p in sympy.factorint(abs(N.numerator) * N.denominator):
        total = sum(P.f * valuation(alpha, P) for P in factor_prime(k, p))
        ordp = sympy.multiplicity(p, abs(N.numerator)) - sympy.multiplicity(p, N.denominator)
        assert total == ordp


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(FIELDS))
def test_valuation_additive(seed, k):
    rng = rng_for(seed)
    a, b = random_element(rng, k), random_element(rng, k)
    ab = a * b
    for p in sympy.factorint(abs(ab.norm.numerator) * ab.norm.denominator):
        for P in factor_prime(k, p):
            assert valuation(ab, P) == valuation(a, P) + valuation(b, P)


# ---- Arakelov divisors --------------------------------------------------------------

def test_principal_divisor_examples():
    D = principal_divisor(Q.element(2))
    assert [(P.label, n) for P, n in D.finite_items()] == [("(2)", 1)]
    assert [x for _, x in D.infinite_items()] == [pytest.approx(-math.log(2))]
    D = principal_divisor(QI.element(1, 1))
    assert [(P.splitting, n) for P, n in D.finite_items()] == [("ramified", 1)]
    assert [x for _, x in D.infinite_items()] == [pytest.approx(-math.log(2))]
    D = principal_divisor(QI.element(0, 1))
    assert not D.finite and [x for _, x in D.infinite_items()] == [0.0]


def test_degree_examples():
    assert degree(ArakelovDivisor()) == 0
    (P3,) = factor_prime(QS2, 3)
    assert degree(ArakelovDivisor({P3: 1})) == pytest.approx(math.log(9))
    assert degree(ArakelovDivisor(infinite={InfinitePlace("real", 1): 2.5})) == 2.5


def test_product_formula_examples():
    assert product_formula_check(Q.element(2)) == pytest.approx(0, abs=1e-15)
    assert product_formula_check(QI.element(1, 1)) == pytest.approx(0, abs=1e-15)
    assert product_formula_check(QS2.element(3)) == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize("k", [Q, QI, QS2, QSm5])
def test_product_formula_random(k):
    rng = rng_for(7 + abs(k.d))
    for _ in range(50):
        alpha = random_element(rng, k, -10 ** 6, 10 ** 6)
        assert abs(product_formula_check(alpha)) <= 1e-10


def test_product_formula_for_units_with_cancellation():
    # (1 + sqrt 2)^40 has a tiny conjugate
    eps = QS2.element(1, 1)
    u = eps
    for _ in range(39):
        u = u * eps
    assert u.norm == 1
    D = principal_divisor(u)
    assert not D.finite
    lam = sorted(x for _, x in D.infinite_items())
    assert lam[0] == pytest.approx(-40 * math.log(1 + math.sqrt(2)), rel=1e-12)
    assert abs(degree(D)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(FIELDS))
def test_principal_divisor_is_a_homomorphism(seed, k):
    rng = rng_for(seed)
    a, b = random_element(rng, k), random_element(rng, k)
    lhs, rhs = principal_divisor(a * b), principal_divisor(a) + principal_divisor(b)
    assert lhs.finite == {P: n for P, n in rhs.finite.items() if n}
    for v, val in lhs.infinite.items():
        assert val == pytest.approx(rhs.infinite[v], abs=1e-9)


def test_report_shape():
    rep = divisor_report(principal_divisor(QI.element(2, 1)))
    assert set(rep) == {"finite", "infinite", "degree"}
    assert rep["finite"][0]["prime"] == "(5, w-3)"
    assert abs(rep["degree"]) < 1e-12
    with pytest.raises(ZeroElement):
        principal_divisor(QI.element(0))
