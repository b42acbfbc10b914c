"""Tokenizer and recursive-descent parser for polynomial text.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" exponent)?
    exponent := integer | "(" ("+" | "-")? integer ")" | ("+" | "-") integer
    atom   := number | "pi" | "e" | "i" | "sqrt" "(" (integer | "pi") ")"
            | identifier | "(" expr ")"

Numbers are integers or decimals and are kept exact.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import PolySyntaxError

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    """Symbolic constant.  ``kind`` is one of ``pi``, ``e``, ``i``,
    ``sqrt_int`` (with integer ``arg``) or ``sqrt_pi``."""
    kind: str
    arg: int | None = None

    @property
    def label(self) -> str:
        if self.kind == "sqrt_int":
            return f"sqrt({self.arg})"
        if self.kind == "sqrt_pi":
            return "sqrt(pi)"
        return self.kind


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


def _is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PolySyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                                      len(text[:pos]) + (len(text[pos:]) - len(text[pos:].lstrip())))
            start = m.start(m.lastindex)
            tok = m.group(m.lastindex)
            if tok == "**":
                tok = "^"
            kind = ("num", "ident", "op")[m.lastindex - 1]
            self.tokens.append((kind, tok, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, tok, pos = self.take()
        if tok != value:
            raise PolySyntaxError(f"expected {value!r}, found {tok or 'end of input'!r}", pos)

    def parse(self):
        if not self.tokens:
            raise PolySyntaxError("empty expression", 0)
        node = self.expr()
        kind, tok, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected token {tok!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, tok, pos = self.peek()
        if kind == "op" and tok in ("+", "-"):
            self.take()
            inner = self.unary()
            return inner if tok == "+" else Neg(inner)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return Pow(base, self.exponent())
        return base

    def exponent(self):
        kind, tok, pos = self.peek()
        if tok == "(":
            self.take()
            value = self._signed_int()
            self.expect(")")
            return value
        return self._signed_int()

    def _signed_int(self):
        sign = 1
        kind, tok, pos = self.peek()
        if kind == "op" and tok in ("+", "-"):
            self.take()
            sign = -1 if tok == "-" else 1
            kind, tok, pos = self.peek()
        if kind != "num" or not tok.isdigit():
            raise PolySyntaxError("exponent must be an integer", pos)
        self.take()
        return sign * int(tok)

    def atom(self):
        kind, tok, pos = self.take()
        if kind == "num":
            return Num(Fraction(tok))
        if kind == "ident":
            if tok in ("pi", "e", "i"):
                return Const(tok)
            if tok == "sqrt":
                return self._sqrt(pos)
            return Var(tok)
        if tok == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise PolySyntaxError(f"unexpected token {tok or 'end of input'!r}", pos)

    def _sqrt(self, pos):
        self.expect("(")
        kind, tok, apos = self.take()
        if kind == "ident" and tok == "pi":
            self.expect(")")
            return Const("sqrt_pi")
        if kind != "num" or not tok.isdigit():
            raise PolySyntaxError("sqrt takes a positive integer or pi", apos)
        n = int(tok)
        if not _is_squarefree(n):
            root = isqrt(n)
            hint = f"; sqrt({n}) = {root}" if root * root == n else ""
            raise PolySyntaxError(f"radicand {n} is not a squarefree integer >= 2{hint}", apos)
        self.expect(")")
        return Const("sqrt_int", n)


def parse(text: str):
    """Parse ``text`` into an expression tree (Num, Var, Const, Neg, BinOp, Pow)."""
    return _Parser(text).parse()


def walk(node):
    """Yield every node of the tree in left-to-right (source) order."""
    yield node
    if isinstance(node, Neg):
        yield from walk(node.operand)
    elif isinstance(node, BinOp):
        yield from walk(node.left)
        yield from walk(node.right)
    elif isinstance(node, Pow):
        yield from walk(node.base)


def evaluate(node, leaf):
    """Fold the tree bottom-up.  ``leaf`` maps Num/Var/Const to ring elements;
    the ring must support + - * and, for division nodes, ``/``."""
    if isinstance(node, (Num, Var, Const)):
        return leaf(node)
    if isinstance(node, Neg):
        return -evaluate(node.operand, leaf)
    if isinstance(node, Pow):
        base = evaluate(node.base, leaf)
        if node.exponent < 0:
            return 1 / (base ** -node.exponent)
        return base ** node.exponent
    left = evaluate(node.left, leaf)
    right = evaluate(node.right, leaf)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    return left / right


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node, parent: int = 0) -> str:
    """Render a tree back to grammar-valid text."""
    if isinstance(node, Num):
        text = str(node.value)
        return f"({text})" if (node.value < 0 or "/" in text) and parent > 0 else text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Const):
        return node.label
    if isinstance(node, Neg):
        text = "-" + to_text(node.operand, 3)
        return f"({text})" if parent > 0 else text
    if isinstance(node, Pow):
        exp = str(node.exponent) if node.exponent >= 0 else f"({node.exponent})"
        text = f"{to_text(node.base, 4)}^{exp}"
        return f"({text})" if parent >= 4 else text
    prec = _PREC[node.op]
    right_prec = prec + 1 if node.op in ("-", "/") else prec
    text = f"{to_text(node.left, prec)} {node.op} {to_text(node.right, right_prec)}"
    return f"({text})" if prec < parent else text
