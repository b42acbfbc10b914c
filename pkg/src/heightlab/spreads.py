"""Spread a polynomial with symbolic constants to a presentation over Q.

Each constant of the input becomes a fresh variable.  Algebraic constants
carry a relation polynomial:  i -> x^2 + 1,  sqrt(k) -> x^2 - k, and
sqrt(pi) -> u - v^2 when pi itself also occurs (u the variable for pi).
pi and e are treated as algebraically independent and get no relation.

With ``eliminate_pi=True`` pi is written as the square of the sqrt(pi)
variable instead, so only genuinely algebraic relations remain.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import expr as ex
from .errors import PolySyntaxError, VerificationFailed

FRESH_NAMES = ("u", "v", "w", "t", "s", "r", "q", "p", "a", "b", "c", "d")
CHECK_DPS = 50
CHECK_THRESHOLD = mpmath.mpf(10) ** -30


class MPoly:
    """Sparse polynomial in named variables: {monomial: coefficient}, where a
    monomial is a sorted tuple of (name, exponent) pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c) -> MPoly:
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> MPoly:
        return cls({((name, 1),): 1})

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant_value(self):
        return self.terms.get((), 0)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def __add__(self, other):
        other = _lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return MPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = MPoly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        other = _lift(other)
        if not other.is_constant() or other.constant_value() == 0:
            raise PolySyntaxError("division is only allowed by nonzero rational constants")
        inv = 1 / other.constant_value()
        return MPoly({m: c * inv for m, c in self.terms.items()})

    def __rtruediv__(self, other):
        return _lift(other) / self

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def substitute(self, values: dict) -> MPoly:
        """Replace variables named in ``values`` by numbers."""
        out = MPoly()
        for m, c in self.terms.items():
            coeff, rest = c, []
            for v, e in m:
                if v in values:
                    coeff = coeff * values[v] ** e
                else:
                    rest.append((v, e))
            out = out + MPoly({tuple(rest): coeff})
        return out

    def to_str(self, order=None) -> str:
        if not self.terms:
            return "0"
        order = list(order or [])
        rank = {v: i for i, v in enumerate(order)}

        def var_key(ve):
            return (rank.get(ve[0], len(rank)), ve[0])

        def key(m):
            return [(var_key(ve), -ve[1]) for ve in sorted(m, key=var_key)] + [((len(rank) + 1, ""), 0)]

        parts = []
        for m in sorted(self.terms, key=key):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}"
                            for v, e in sorted(m, key=var_key))
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MPoly({self})"


def _lift(x) -> MPoly:
    return x if isinstance(x, MPoly) else MPoly.const(x)


def _mono_mul(m1, m2):
    acc = dict(m1)
    for v, e in m2:
        acc[v] = acc.get(v, 0) + e
    return tuple(sorted(acc.items()))


def _const_value(c: ex.Const):
    if c.kind == "pi":
        return mpmath.pi
    if c.kind == "e":
        return mpmath.e
    if c.kind == "i":
        return mpmath.mpc(0, 1)
    if c.kind == "sqrt_pi":
        return mpmath.sqrt(mpmath.pi)
    return mpmath.sqrt(c.arg)


@dataclass
class SpreadPresentation:
    sources: tuple
    original_vars: tuple
    main: MPoly | tuple
    relations: list
    substitution: dict  # fresh variable -> constant label
    values: dict  # fresh variable -> constant label, or Fraction for inverted denominators
    trees: tuple = ()

    @property
    def mains(self) -> tuple:
        return self.main if isinstance(self.main, tuple) else (self.main,)

    @property
    def fresh_vars(self) -> list:
        return list(self.substitution)

    def to_json(self):
        order = self.fresh_vars + list(self.original_vars)
        mains = [m.to_str(order) for m in self.mains]
        return {"input": self.sources[0] if len(self.sources) == 1 else list(self.sources),
                "main": mains[0] if len(mains) == 1 else mains,
                "relations": [r.to_str(order) for r in self.relations],
                "substitution": dict(self.substitution)}

    def to_text(self) -> str:
        data = self.to_json()
        mains = data["main"] if isinstance(data["main"], list) else [data["main"]]
        lines = [f"main: {m}" for m in mains]
        lines += [f"relation: {r} = 0" for r in data["relations"]]
        lines += [f"{v} -> {c}" for v, c in data["substitution"].items()]
        return "\n".join(lines)


def parse_poly(text: str):
    return ex.parse(text)


def _names_in(node) -> list:
    seen = []
    for n in ex.walk(node):
        if isinstance(n, ex.Var) and n.name not in seen:
            seen.append(n.name)
    return seen


def _consts_in(node) -> list:
    seen = []
    for n in ex.walk(node):
        if isinstance(n, ex.Const) and n.label not in seen:
            seen.append(n.label)
    return seen


def _rational_leaf(node):
    if isinstance(node, ex.Num):
        return MPoly.const(node.value)
    if isinstance(node, ex.Var):
        return MPoly.var(node.name)
    raise AssertionError(node)


def _lower(node, leaf):
    """Evaluate ``node`` as an MPoly, rejecting non-constant divisors and
    negative powers of non-constants."""
    if isinstance(node, ex.Pow) and node.exponent < 0:
        base = _lower(node.base, leaf)
        if not base.is_constant():
            raise PolySyntaxError("negative exponent on a non-constant")
        return MPoly.const(1) / (base ** -node.exponent)
    if isinstance(node, (ex.Num, ex.Var, ex.Const)):
        return leaf(node)
    if isinstance(node, ex.Neg):
        return -_lower(node.operand, leaf)
    if isinstance(node, ex.Pow):
        return _lower(node.base, leaf) ** node.exponent
    left, right = _lower(node.left, leaf), _lower(node.right, leaf)
    return {"+": left + right, "-": left - right, "*": left * right}.get(node.op) \
        if node.op != "/" else left / right


def _poly_of(node, const_map):
    def leaf(n):
        if isinstance(n, ex.Const):
            return const_map[n.label]
        return _rational_leaf(n)
    return _lower(node, leaf)


def spread(exprs, over_z: bool = False, eliminate_pi: bool = False) -> SpreadPresentation:
    """Spread one polynomial (text or tree) or a list of them over a shared
    set of fresh variables."""
    single = not isinstance(exprs, (list, tuple))
    items = [exprs] if single else list(exprs)
    trees = [parse_poly(e) if isinstance(e, str) else e for e in items]

    original = []
    consts = []
    for tree in trees:
        original += [v for v in _names_in(tree) if v not in original]
        consts += [c for c in _consts_in(tree) if c not in consts]
    pool = (n for n in FRESH_NAMES + tuple(f"u{k}" for k in range(1, 1000)) if n not in original)

    fresh = {}  # constant label -> fresh variable
    for label in consts:
        if eliminate_pi and label == "pi":
            label = "sqrt(pi)"
        if label not in fresh:
            fresh[label] = next(pool)

    const_map, relations = {}, []
    for label, var in fresh.items():
        const_map[label] = MPoly.var(var)
        if label == "i":
            relations.append(MPoly.var(var) ** 2 + 1)
        elif label.startswith("sqrt(") and label != "sqrt(pi)":
            relations.append(MPoly.var(var) ** 2 - int(label[5:-1]))
    if "sqrt(pi)" in fresh:
        v = MPoly.var(fresh["sqrt(pi)"])
        if eliminate_pi:
            const_map["pi"] = v ** 2
        elif "pi" in fresh:
            relations.insert(0, MPoly.var(fresh["pi"]) - v ** 2)

    mains = [_poly_of(t, const_map) for t in trees]
    substitution = {var: label for label, var in fresh.items()}
    values = dict(substitution)

    if over_z:
        dens = sorted({c.denominator for m in mains for c in m.terms.values() if c.denominator > 1})
        for D in dens:
            var = next(pool)
            x = MPoly.var(var)
            relations.append(D * x - 1)
            values[var] = Fraction(1, D)
            substitution[var] = f"1/{D}"
            mains = [_clear(m, D, x) for m in mains]

    rel_out = []
    for r in relations:
        if r not in rel_out:
            rel_out.append(r)
    sources = tuple(e if isinstance(e, str) else ex.to_text(e) for e in items)
    return SpreadPresentation(sources, tuple(original), mains[0] if single else tuple(mains),
                              rel_out, substitution, values, tuple(trees))


def _clear(m: MPoly, D: int, x: MPoly) -> MPoly:
    """Rewrite coefficients n/D as n * x."""
    out = MPoly()
    for mono, c in m.terms.items():
        if c.denominator == D:
            out = out + MPoly({mono: c * D}) * x
        else:
            out = out + MPoly({mono: c})
    return out


_LABELS = {"pi": ex.Const("pi"), "e": ex.Const("e"), "i": ex.Const("i"),
           "sqrt(pi)": ex.Const("sqrt_pi")}


def _label_const(label):
    if label in _LABELS:
        return _LABELS[label]
    return ex.Const("sqrt_int", int(label[5:-1]))


def verify_spread(sp: SpreadPresentation, dps: int = CHECK_DPS, threshold=None) -> dict:
    """Substitute the true constants at ``dps`` digits; every relation must
    vanish and every coefficient of the input must be reproduced."""
    threshold = CHECK_THRESHOLD if threshold is None else mpmath.mpf(threshold)
    with mpmath.workdps(dps):
        nums = {}
        for var, lab in sp.values.items():
            nums[var] = (mpmath.mpf(lab.numerator) / lab.denominator if isinstance(lab, Fraction)
                         else _const_value(_label_const(lab)))
        rel_report = []
        ok = True
        for r in sp.relations:
            val = r.substitute(nums).constant_value()
            good = abs(val) < threshold
            ok &= bool(good)
            rel_report.append({"relation": r.to_str(), "residual": mpmath.nstr(abs(val), 5),
                               "ok": bool(good)})
        coeff_report = []
        trees = sp.trees or tuple(parse_poly(src) for src in sp.sources)
        if trees:
            for src, tree, main in zip(sp.sources, trees, sp.mains):
                target = _poly_of(tree, _numeric_const_map(tree))
                got = main.substitute(nums)
                worst = mpmath.mpf(0)
                for mono in set(target.terms) | set(got.terms):
                    a = mpmath.mpmathify(target.terms.get(mono, 0))
                    b = mpmath.mpmathify(got.terms.get(mono, 0))
                    worst = max(worst, abs(a - b) / max(1, abs(a)))
                good = worst < threshold
                ok &= bool(good)
                coeff_report.append({"polynomial": src, "max_rel_error": mpmath.nstr(worst, 5),
                                     "ok": bool(good)})
    report = {"ok": ok, "dps": dps, "relations": rel_report, "coefficients": coeff_report}
    if not ok:
        raise VerificationFailed("spread does not match the numeric constants", report)
    return report


def _numeric_const_map(tree):
    return {lab: MPoly.const(_const_value(_label_const(lab))) for lab in _consts_in(tree)}


EX000 = "pi*y^2 + (sqrt(pi)+4)*x^3 + e*x"
EC_CUBIC = "2^(-1)*e*z0*z2^2 - pi*z1^3 + sqrt(pi)*z1*z0^2 + sqrt(3)*i*z0^3"
EC_CYCLE = "sqrt(5)*z0^4*z1 + i*z2^5"
