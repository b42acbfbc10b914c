"""Dense univariate polynomials over Q (or Q(i)) and factorisation into
irreducible pieces of degree at most two."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, isqrt

import mpmath

from .errors import FactorDegreeExceeded
from .gaussian import GaussQ


def _scalar(c):
    if isinstance(c, (Fraction, GaussQ)):
        return c
    return Fraction(c)


class Polynomial:
    """Coefficients stored low degree first; trailing zeros stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [_scalar(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls([c])

    @classmethod
    def x(cls) -> Polynomial:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def _lift(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Polynomial([self[k] + o[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Polynomial([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return Polynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        inv = 1 / o.lead if not isinstance(o.lead, GaussQ) else o.lead.inverse()
        for k in range(dq, -1, -1):
            c = rem[k + len(o.coeffs) - 1] * inv
            quot[k] = c
            if c == 0:
                continue
            for j, b in enumerate(o.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return Polynomial(quot), Polynomial(rem[: len(o.coeffs) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Polynomial:
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        return self * (1 / self.lead if not isinstance(self.lead, GaussQ) else self.lead.inverse())

    def derivative(self) -> Polynomial:
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def compose(self, other: Polynomial) -> Polynomial:
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) or (isinstance(c, GaussQ) and c.is_real())
                   for c in self.coeffs)

    def primitive_integer(self) -> tuple[int, ...]:
        """Integer coefficient vector proportional to self, content 1,
        positive leading coefficient."""
        den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0) or 1
        ints = [v // g for v in ints]
        if ints and ints[-1] < 0:
            ints = [-v for v in ints]
        return tuple(ints)

    def to_str(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if isinstance(c, GaussQ) and not c.is_real():
                coef = str(c)
                neg = False
            else:
                c = c.re if isinstance(c, GaussQ) else c
                neg = c < 0
                coef = str(abs(c))
            if k == 0:
                term = coef
            else:
                mono = var if k == 1 else f"{var}^{k}"
                term = mono if coef == "1" else f"{coef}*{mono}"
            if not parts:
                parts.append(f"-{term}" if neg else term)
            else:
                parts.append(f"- {term}" if neg else f"+ {term}")
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({self.to_str()})"

    __str__ = to_str


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: monic squarefree coprime a_i with f = c * prod a_i^i."""
    f = f.monic()
    if f.degree <= 0:
        return []
    out = []
    fp = f.derivative()
    a0 = poly_gcd(f, fp)
    b = f.exact_div(a0)
    c = fp.exact_div(a0)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def _numeric_roots(f: Polynomial, dps=60, extraprec=400):
    ints = f.primitive_integer()
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(list(reversed(ints)), maxsteps=400, extraprec=extraprec)
        return [complex(r) for r in roots], ints[-1]


def _candidate(value: float, lead: int) -> Fraction:
    # Gauss's lemma: denominators of monic rational factors divide the leading coefficient.
    return Fraction(round(value * lead), lead)


def _close(value: float, cand: Fraction) -> bool:
    # a nearby rational that happens to divide must not steal another root's factor
    return abs(value - float(cand)) <= 1e-8 * max(1.0, abs(value))


def _split_quadratic(f: Polynomial) -> list[Polynomial]:
    c, b, _ = f.coeffs
    disc = b * b - 4 * c
    if disc < 0:
        return [f]
    rn, rd = isqrt(disc.numerator), isqrt(disc.denominator)
    if rn * rn != disc.numerator or rd * rd != disc.denominator:
        return [f]
    r = Fraction(rn, rd)
    return sorted((Polynomial([(b - r) / 2, 1]), Polynomial([(b + r) / 2, 1])), key=lambda q: q.coeffs)


def _split_numeric(f: Polynomial, dps=60, extraprec=400):
    """Factors found from numerical roots, checked by exact division, and the unsplit rest."""
    roots, lead = _numeric_roots(f, dps, extraprec)
    factors = []
    rest = f
    remaining = []
    for r in roots:
        c = _candidate(r.real, lead)
        if abs(r.imag) < 1e-8 * max(1.0, abs(r)) and _close(r.real, c):
            cand = Polynomial([-c, 1])
            q, rem = divmod(rest, cand)
            if rem.is_zero():
                factors.append(cand)
                rest = q
                continue
        remaining.append(r)
    used = [False] * len(remaining)
    for i in range(len(remaining)):
        if used[i]:
            continue
        for j in range(i + 1, len(remaining)):
            if used[j]:
                continue
            s = remaining[i] + remaining[j]
            p = remaining[i] * remaining[j]
            if abs(s.imag) > 1e-6 * max(1.0, abs(s)) or abs(p.imag) > 1e-6 * max(1.0, abs(p)):
                continue
            cp, cs = _candidate(p.real, lead), _candidate(s.real, lead)
            if not (_close(p.real, cp) and _close(s.real, cs)):
                continue
            cand = Polynomial([cp, -cs, 1])
            q, rem = divmod(rest, cand)
            if rem.is_zero():
                factors.append(cand)
                rest = q
                used[i] = used[j] = True
                break
    return factors, rest


def factor_squarefree(f: Polynomial) -> list[Polynomial]:
    """Split a squarefree rational polynomial into monic irreducible factors
    of degree 1 or 2.  Candidates come from numerical roots and are accepted
    only after exact division."""
    f = f.monic()
    if f.degree <= 0:
        return []
    if f.degree == 1:
        return [f]
    if f.degree == 2:
        return _split_quadratic(f)
    factors, rest = _split_numeric(f, 20, 40)
    if rest.degree > 0:
        factors, rest = _split_numeric(f)
    if rest.degree > 0:
        raise FactorDegreeExceeded(
            f"irreducible factor of degree >= 3 in {f.to_str()} (unsplit part {rest.to_str()})")
    return factors


def factor(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Monic irreducible factors (degree <= 2) with multiplicities."""
    if not f.is_rational():
        raise ValueError("factorisation is only available over Q")
    out = []
    for part, mult in squarefree_decomposition(f):
        for q in factor_squarefree(part):
            out.append((q, mult))
    return out


def sylvester_resultant(a: list, b: list, zero, one):
    """Resultant of two polynomials given as coefficient lists (low degree
    first, leading entry nonzero as a formal coefficient) over an integral
    domain whose elements support + - * and exact ``//``.  Bareiss
    fraction-free elimination on the Sylvester matrix."""
    m, n = len(a) - 1, len(b) - 1
    if m < 0 or n < 0:
        return zero
    if m == 0:
        return _power(a[0], n, one)
    if n == 0:
        return _power(b[0], m, one)
    size = m + n
    rows = []
    for k in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(a)):
            row[k + j] = c
        rows.append(row)
    for k in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(b)):
            row[k + j] = c
        rows.append(row)
    return _bareiss_det(rows, zero, one)


def _power(x, n, one):
    out = one
    for _ in range(n):
        out = out * x
    return out


def _bareiss_det(mat, zero, one):
    mat = [list(r) for r in mat]
    n = len(mat)
    sign = 1
    prev = one
    for k in range(n - 1):
        if mat[k][k] == zero:
            for r in range(k + 1, n):
                if mat[r][k] != zero:
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]
                mat[i][j] = _exact(num, prev)
        prev = mat[k][k]
    det = mat[n - 1][n - 1]
    return det if sign > 0 else zero - det


def _exact(num, den):
    if isinstance(num, Polynomial):
        return num.exact_div(den)
    return num / den
