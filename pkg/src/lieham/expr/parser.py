"""Recursive-descent parser for the expression grammar.

    expr     := term (("+"|"-") term)*
    term     := unary (("*"|"/") unary)*
    unary    := "-" unary | factor
    factor   := base ("^" exponent)?
    base     := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")" | "|" expr "|"
    exponent := "-"? (INTEGER | INTEGER "/" INTEGER | "(" "-"? INTEGER ("/" INTEGER)? ")")

Division chains are left-associative, so ``1/2`` is the quotient of two
integer literals rather than a single token.  ``int(f, s, a, b)`` denotes
the quadrature-defined function of ``f`` over ``s`` from ``a`` to ``b``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .nodes import BUILTINS, QUAD_NAME, Add, Const, Div, Func, Mul, Neg, Pow, Quad, Sym


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class UnknownFunctionError(ParseError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<decimal>\d+\.\d*|\.\d+)|(?P<integer>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^(),|]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset=0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def expect_op(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            found = tok[1] or "end of input"
            raise self.error(f"expected {op!r}, found {found!r}")
        return self.take()

    def is_op(self, *ops):
        tok = self.peek()
        return tok[0] == "op" and tok[1] in ops

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self):
        terms = [self.term()]
        while self.is_op("+", "-"):
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else Neg(t))
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self):
        left = self.unary()
        factors = [left]
        while self.is_op("*", "/"):
            op = self.take()[1]
            right = self.unary()
            if op == "*":
                factors.append(right)
            else:
                num = factors[0] if len(factors) == 1 else Mul(tuple(factors))
                factors = [Div(num, right)]
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def unary(self):
        if self.is_op("-"):
            self.take()
            return Neg(self.unary())
        return self.factor()

    def factor(self):
        base = self.base()
        if self.is_op("^"):
            self.take()
            base = Pow(base, self.exponent())
        return base

    def _integer(self):
        tok = self.peek()
        if tok[0] != "integer":
            raise self.error("expected an integer exponent")
        self.take()
        return int(tok[1])

    def _rational_tail(self, value):
        # INTEGER "/" INTEGER, only when an integer really follows the slash
        if self.is_op("/") and self.peek(1)[0] == "integer":
            self.take()
            den = self.take()
            if int(den[1]) == 0:
                raise self.error("zero denominator in exponent", den)
            return Fraction(value, int(den[1]))
        return Fraction(value)

    def exponent(self):
        sign = 1
        if self.is_op("-"):
            self.take()
            sign = -1
        if self.is_op("("):
            self.take()
            inner = 1
            if self.is_op("-"):
                self.take()
                inner = -1
            value = self._rational_tail(self._integer())
            self.expect_op(")")
            return sign * inner * value
        return sign * self._rational_tail(self._integer())

    def base(self):
        tok = self.peek()
        kind, value, pos = tok
        if kind == "integer":
            self.take()
            return Const(Fraction(int(value)))
        if kind == "decimal":
            self.take()
            return Const(Fraction(value))
        if kind == "ident":
            self.take()
            if self.is_op("("):
                return self.call(value, tok)
            if value in BUILTINS or value == QUAD_NAME:
                raise self.error(f"builtin {value!r} used without arguments", tok)
            return Sym(value)
        if kind == "op" and value == "(":
            self.take()
            e = self.expr()
            self.expect_op(")")
            return e
        if kind == "op" and value == "|":
            self.take()
            e = self.expr()
            self.expect_op("|")
            return Func("abs", e)
        found = value or "end of input"
        raise self.error(f"unexpected {found!r}")

    def call(self, name, tok):
        if name not in BUILTINS and name != QUAD_NAME:
            raise UnknownFunctionError(f"unknown function {name!r}", tok[2], self.text)
        self.expect_op("(")
        args = [self.expr()]
        while self.is_op(","):
            self.take()
            args.append(self.expr())
        self.expect_op(")")
        if name == QUAD_NAME:
            if len(args) != 4 or not isinstance(args[1], Sym):
                raise ParseError("int expects (integrand, variable, lower, upper)", tok[2], self.text)
            return Quad(args[0], args[1].name, args[2], args[3])
        if len(args) != 1:
            raise ParseError(f"{name} takes exactly one argument", tok[2], self.text)
        return Func(name, args[0])


def parse(text: str):
    """Parse ``text`` into an expression tree."""
    if not isinstance(text, str):
        raise TypeError("parse expects a string")
    return _Parser(text).parse()
