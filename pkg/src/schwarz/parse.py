"""Tokenizer and recursive-descent parser for the polynomial text grammar.

Grammar (no implicit multiplication)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | NAME | NAME '(' expr ')' | '(' expr ')'

``i`` is the imaginary unit.  Division is only meaningful to :func:`to_poly`
when the divisor is constant; :func:`to_rational` accepts any divisor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .exact import ONE, ExactComplex, I
from .poly import VARPAIRS, Poly, UniPoly

__all__ = [
    "ParseError",
    "Node",
    "parse_expr",
    "parse_poly",
    "to_poly",
    "to_rational",
    "FUNCTIONS",
    "is_rational_node",
]

FUNCTIONS = ("exp",)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    """Syntax or semantic error in polynomial text; ``position`` is 0-based."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class Node:
    kind: str  # num | var | add | sub | mul | div | neg | pow | call
    args: tuple
    pos: int = 0


def _tokenize(text: str):
    tokens = []
    k = 0
    n = len(text)
    while k < n:
        if text[k].isspace():
            k += 1
            continue
        m = _TOKEN.match(text, k)
        if not m or m.end() == k:
            raise ParseError(f"unexpected character {text[k]!r}", k)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, start))
        k = m.end()
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> Node:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                node = Node("add" if val == "+" else "sub", (node, rhs), pos)
            else:
                return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                node = Node("mul" if val == "*" else "div", (node, rhs), pos)
            else:
                return node

    def unary(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return inner if val == "+" else Node("neg", (inner,), pos)
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            kind, val, epos = self.peek()
            paren = False
            if kind == "op" and val == "(":
                self.take()
                paren = True
                kind, val, epos = self.peek()
            if kind == "op" and val == "-":
                self.take()
                sign = -1
                kind, val, epos = self.peek()
            if kind != "int":
                raise ParseError("exponent must be an integer literal", epos)
            self.take()
            if paren:
                self.expect_op(")")
            return Node("pow", (base, sign * val), pos)
        return base

    def atom(self) -> Node:
        kind, val, pos = self.take()
        if kind == "int":
            return Node("num", (ExactComplex.gaussian(val),), pos)
        if kind == "name":
            if val == "i":
                return Node("num", (I,), pos)
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "(":
                if val not in FUNCTIONS:
                    raise ParseError(f"unknown function {val!r}", pos)
                self.take()
                arg = self.expr()
                self.expect_op(")")
                return Node("call", (val, arg), pos)
            return Node("var", (val,), pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_expr(text: str) -> Node:
    return _Parser(text).parse()


def to_poly(node: Node, gens: Iterable[str]) -> Poly:
    gens = tuple(gens)

    def go(n: Node) -> Poly:
        k = n.kind
        if k == "num":
            return Poly.const(n.args[0], gens)
        if k == "var":
            name = n.args[0]
            if name not in gens:
                raise ParseError(f"unknown variable {name!r} (expected one of {', '.join(gens)})", n.pos)
            return Poly.var(name, gens)
        if k == "add":
            return go(n.args[0]) + go(n.args[1])
        if k == "sub":
            return go(n.args[0]) - go(n.args[1])
        if k == "mul":
            return go(n.args[0]) * go(n.args[1])
        if k == "neg":
            return -go(n.args[0])
        if k == "pow":
            if n.args[1] < 0:
                raise ParseError("exponent must be a nonnegative integer", n.pos)
            return go(n.args[0]) ** n.args[1]
        if k == "div":
            den = go(n.args[1])
            if not den.is_constant() or den.is_zero():
                raise ParseError("division only by nonzero constants in a polynomial", n.pos)
            return go(n.args[0]).scale(den.constant_value().inverse())
        if k == "call":
            raise ParseError(f"function {n.args[0]!r} not allowed in a polynomial", n.pos)
        raise ParseError(f"bad node {k}", n.pos)

    return go(node)


def parse_poly(text: str, varpair: str | tuple = "XY") -> Poly:
    """Parse ``text`` into an expanded polynomial over a named variable pair."""
    gens = VARPAIRS[varpair] if isinstance(varpair, str) else tuple(varpair)
    return to_poly(parse_expr(text), gens)


def to_rational(node: Node, var: str = "z") -> tuple[UniPoly, UniPoly]:
    """Reduce an expression in one variable to ``(num, den)`` (not yet coprime)."""

    def go(n: Node) -> tuple[UniPoly, UniPoly]:
        k = n.kind
        one = UniPoly.const(ONE, var)
        if k == "num":
            return UniPoly.const(n.args[0], var), one
        if k == "var":
            if n.args[0] != var:
                raise ParseError(f"unknown variable {n.args[0]!r} (expected {var})", n.pos)
            return UniPoly.x(var), one
        if k in ("add", "sub"):
            (a, b), (c, d) = go(n.args[0]), go(n.args[1])
            num = a * d + c * b if k == "add" else a * d - c * b
            return num, b * d
        if k == "mul":
            (a, b), (c, d) = go(n.args[0]), go(n.args[1])
            return a * c, b * d
        if k == "div":
            (a, b), (c, d) = go(n.args[0]), go(n.args[1])
            if c.is_zero():
                raise ParseError("division by zero", n.pos)
            return a * d, b * c
        if k == "neg":
            a, b = go(n.args[0])
            return -a, b
        if k == "pow":
            a, b = go(n.args[0])
            e = n.args[1]
            if e < 0:
                if a.is_zero():
                    raise ParseError("zero to a negative power", n.pos)
                a, b, e = b, a, -e
            return a ** e, b ** e
        if k == "call":
            raise ParseError(f"function {n.args[0]!r} is not rational", n.pos)
        raise ParseError(f"bad node {k}", n.pos)

    return go(node)


def is_rational_node(node: Node) -> bool:
    if node.kind == "call":
        return False
    return all(is_rational_node(a) for a in node.args if isinstance(a, Node))

