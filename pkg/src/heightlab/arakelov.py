"""Arakelov divisors on the ring of integers of Q or of a quadratic field.

Elements are written a + b*w in the integral basis {1, w}, with w = sqrt(d)
for d = 2, 3 mod 4 and w = (1 + sqrt(d))/2 for d = 1 mod 4.  Finite primes
are handled without ideal arithmetic: a split prime is the kernel of
w -> r mod p^j for a Hensel-lifted root r of the minimal polynomial of w.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from .errors import ZeroElement


def _squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorint(abs(n)).values())


@dataclass(frozen=True)
class QuadraticField:
    """Q(sqrt(d)); d = 1 stands for Q itself (see :data:`Q`)."""

    d: int

    def __post_init__(self):
        if self.d != 1 and (not _squarefree(self.d)):
            raise ValueError(f"d = {self.d} is not a squarefree integer")
        if self.d == 0:
            raise ValueError("d must be nonzero")

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    @property
    def degree(self) -> int:
        return 1 if self.is_rational else 2

    @property
    def half_basis(self) -> bool:
        """True when w = (1 + sqrt d)/2."""
        return not self.is_rational and self.d % 4 == 1

    @property
    def discriminant(self) -> int:
        if self.is_rational:
            return 1
        return self.d if self.half_basis else 4 * self.d

    @property
    def minpoly(self) -> tuple[int, int]:
        """(c1, c0) with w^2 + c1 w + c0 = 0."""
        if self.half_basis:
            return -1, -(self.d - 1) // 4
        return 0, -self.d

    @property
    def signature(self) -> tuple[int, int]:
        if self.is_rational:
            return 1, 0
        return (2, 0) if self.d > 0 else (0, 1)

    def infinite_places(self) -> list[InfinitePlace]:
        if self.is_rational:
            return [InfinitePlace("real", 1)]
        if self.d > 0:
            return [InfinitePlace("real", 1), InfinitePlace("real", -1)]
        return [InfinitePlace("complex", 0)]

    def element(self, a, b=0) -> FieldElement:
        return FieldElement(self, Fraction(a), Fraction(b))

    def __str__(self):
        if self.is_rational:
            return "Q"
        return "Q(i)" if self.d == -1 else f"Q(sqrt({self.d}))"


Q = QuadraticField(1)


@dataclass(frozen=True)
class FieldElement:
    field: QuadraticField
    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.field.is_rational and self.b != 0:
            raise ValueError("elements of Q have b = 0")

    @property
    def norm(self) -> Fraction:
        if self.field.is_rational:
            return self.a
        a, b = self.a, self.b
        c1, c0 = self.field.minpoly
        return a * a - a * b * c1 + b * b * c0

    @property
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __mul__(self, other: FieldElement) -> FieldElement:
        c1, c0 = self.field.minpoly
        a, b, c, e = self.a, self.b, other.a, other.b
        bb = b * e  # coefficient of w^2 = -c1 w - c0
        return FieldElement(self.field, a * c - bb * c0, a * e + b * c - bb * c1)

    def embeddings(self) -> list[complex]:
        """Images under the infinite places (float precision)."""
        k = self.field
        if k.is_rational:
            return [complex(float(self.a))]
        root = math.sqrt(abs(k.d))
        out = []
        for place in k.infinite_places():
            s = place.sign if place.kind == "real" else 1
            w = complex(s * root, 0) if k.d > 0 else complex(0, root)
            if k.half_basis:
                w = (1 + w) / 2
            out.append(float(self.a) + float(self.b) * w)
        return out

    def __str__(self):
        if self.field.is_rational or self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*w"


@dataclass(frozen=True)
class FinitePrime:
    """A prime of O_k over p; ``root`` is w mod p for split primes."""

    p: int
    splitting: str  # "split" | "inert" | "ramified" | "rational"
    f: int
    root: int | None = None
    field_d: int = field(default=1, compare=True)

    @property
    def e(self) -> int:
        return 2 if self.splitting == "ramified" else 1

    @property
    def norm(self) -> int:
        return self.p ** self.f

    @property
    def label(self) -> str:
        if self.splitting == "split":
            return f"({self.p}, w-{self.root})"
        return f"({self.p})" if self.splitting in ("inert", "rational") else f"({self.p})^(1/2)"

    def hensel_root(self, j: int) -> int:
        """Root of the minimal polynomial of w modulo p^j lifting ``root``."""
        k = QuadraticField(self.field_d)
        c1, c0 = k.minpoly
        mod = self.p ** j
        r = self.root
        for _ in range(max(j, 1).bit_length() + 1):
            fr = (r * r + c1 * r + c0) % mod
            if fr == 0:
                break
            r = (r - fr * pow(2 * r + c1, -1, mod)) % mod
        return r % mod

    def sort_key(self):
        return (self.p, -1 if self.root is None else self.root)

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class InfinitePlace:
    kind: str  # "real" | "complex"
    sign: int = 1  # image of sqrt(d) is sign*sqrt(d) for real places

    @property
    def label(self) -> str:
        return "complex" if self.kind == "complex" else ("real+" if self.sign > 0 else "real-")

    def sort_key(self):
        return (self.kind, -self.sign)

    def __str__(self):
        return self.label


def factor_prime(k: QuadraticField, p: int) -> list[FinitePrime]:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if k.is_rational:
        return [FinitePrime(p, "rational", 1, None, 1)]
    c1, c0 = k.minpoly
    if p == 2:
        roots = [r for r in range(2) if (r * r + c1 * r + c0) % 2 == 0]
    else:
        half = pow(2, -1, p)
        roots = sorted({(-c1 + s) * half % p
                        for s in sqrt_mod((c1 * c1 - 4 * c0) % p, p, all_roots=True) or []})
    if k.discriminant % p == 0:
        return [FinitePrime(p, "ramified", 1, roots[0], k.d)]
    if roots:
        return [FinitePrime(p, "split", 1, r, k.d) for r in roots]
    return [FinitePrime(p, "inert", 2, None, k.d)]


def _ord(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _integral_valuation(a: int, b: int, norm: int, P: FinitePrime) -> int:
    n_ord = _ord(norm, P.p)
    if P.splitting == "rational":
        return _ord(a, P.p)
    if P.splitting == "inert":
        return n_ord // 2
    if P.splitting == "ramified":
        return n_ord
    v = 0
    for j in range(1, n_ord + 1):
        if (a + b * P.hensel_root(j)) % P.p ** j:
            break
        v = j
    return v


def valuation(alpha: FieldElement, P: FinitePrime) -> int:
    """v_P(alpha), normalised so that v_P(k^*) = Z."""
    if alpha.is_zero():
        raise ZeroElement("valuation of 0")
    m = alpha.a.denominator * alpha.b.denominator // gcd(alpha.a.denominator, alpha.b.denominator)
    beta = FieldElement(alpha.field, alpha.a * m, alpha.b * m)
    a, b = int(beta.a), int(beta.b)
    return _integral_valuation(a, b, int(beta.norm), P) - P.e * _ord(m, P.p)


class ArakelovDivisor:
    """sum_P m_P P + sum_v lambda_v v."""

    def __init__(self, finite=None, infinite=None):
        self.finite = {P: n for P, n in (finite or {}).items() if n}
        self.infinite = {v: float(x) for v, x in (infinite or {}).items()}

    def __add__(self, other: ArakelovDivisor) -> ArakelovDivisor:
        fin = dict(self.finite)
        for P, n in other.finite.items():
            fin[P] = fin.get(P, 0) + n
        inf = dict(self.infinite)
        for v, x in other.infinite.items():
            inf[v] = inf.get(v, 0.0) + x
        return ArakelovDivisor(fin, inf)

    def finite_items(self):
        return sorted(self.finite.items(), key=lambda kv: kv[0].sort_key())

    def infinite_items(self):
        return sorted(self.infinite.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self):
        parts = [f"{n}*{P}" for P, n in self.finite_items()]
        parts += [f"{x:.12g}*[{v}]" for v, x in self.infinite_items()]
        return " + ".join(parts) or "0"


def _primes_of(n: Fraction) -> list[int]:
    out = set(factorint(abs(n.numerator))) | set(factorint(n.denominator))
    return sorted(out)


def _log_abs_embeddings(alpha: FieldElement) -> list[float]:
    """log|tau alpha| for each infinite place, in place order.

    For a real quadratic field the smaller conjugate is recovered as
    |N(alpha)| / |larger conjugate| to avoid cancellation."""
    k = alpha.field
    images = alpha.embeddings()
    if k.is_rational or k.d < 0:
        if k.d < 0:
            return [0.5 * _log_fraction(alpha.norm)]
        return [_log_fraction(abs(alpha.a))]
    big = max(range(2), key=lambda i: abs(images[i]))
    log_big = math.log(abs(images[big]))
    out = [0.0, 0.0]
    out[big] = log_big
    out[1 - big] = _log_fraction(abs(alpha.norm)) - log_big
    return out


def _log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def principal_divisor(alpha: FieldElement) -> ArakelovDivisor:
    """sum_P v_P(alpha) P - sum_v log|alpha|_v v, with |.|_v = |tau .|^2 at complex v."""
    if alpha.is_zero():
        raise ZeroElement("principal divisor of 0")
    k = alpha.field
    m = alpha.a.denominator * alpha.b.denominator
    finite = {}
    for p in sorted(set(_primes_of(alpha.norm)) | set(factorint(m))):
        for P in factor_prime(k, p):
            v = valuation(alpha, P)
            if v:
                finite[P] = v
    infinite = {}
    for place, lg in zip(k.infinite_places(), _log_abs_embeddings(alpha)):
        infinite[place] = -(2 * lg if place.kind == "complex" else lg) + 0.0
    return ArakelovDivisor(finite, infinite)


def degree(D: ArakelovDivisor) -> float:
    terms = [n * P.f * math.log(P.p) for P, n in D.finite_items()]
    terms += [x for _, x in D.infinite_items()]
    return math.fsum(terms)


def product_formula_check(alpha: FieldElement) -> float:
    return degree(principal_divisor(alpha))


def divisor_report(D: ArakelovDivisor) -> dict:
    """Per-place terms of deg(D) as a JSON-ready dict."""
    fin = [{"prime": P.label, "p": P.p, "splitting": P.splitting, "f": P.f,
            "mult": n, "log_norm": P.f * math.log(P.p), "term": n * P.f * math.log(P.p)}
           for P, n in D.finite_items()]
    inf = [{"place": v.label, "lambda": x} for v, x in D.infinite_items()]
    return {"finite": fin, "infinite": inf, "degree": degree(D)}
