"""Recursive-descent parser for scalar expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' integer)?
    integer:= ['-' | '+'] INT | '(' ['-' | '+'] INT ')'
    atom   := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'

``FUNC`` is one of ``exp ln sin cos``; ``NAME`` must be a declared coordinate.
"""
from __future__ import annotations

import re

from .core import ExprError, Expr, const, coord, n_func, simplify

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


class ExprSyntaxError(ExprError):
    def __init__(self, message, text, position):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}: {text!r}")


class UnknownIdentifier(ExprSyntaxError):
    def __init__(self, name, text, position):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", text, position)


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, names):
        self.text = text
        self.names = {n: i for i, n in enumerate(names)}
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            what = "end of input" if t[0] == "end" else repr(t[1])
            raise ExprSyntaxError(f"expected {value!r}, found {what}", self.text, t[2])
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ExprSyntaxError(msg, self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise self.error(f"unexpected token {t[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op[1] == "*":
                e = e * rhs
            else:
                if rhs.is_const(0):
                    raise ExprSyntaxError("division by the literal zero", self.text, op[2])
                e = e / rhs
        return e

    def unary(self):
        t = self.peek()
        if t[1] == "-":
            self.take()
            return -self.unary()
        if t[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            caret = self.take()
            n = self.integer(caret)
            if n < 0 and base.is_const(0):
                raise ExprSyntaxError("negative power of zero", self.text, caret[2])
            return base ** n
        return base

    def integer(self, caret):
        paren = False
        if self.peek()[1] == "(":
            self.take()
            paren = True
        sign = 1
        if self.peek()[1] in ("-", "+"):
            sign = -1 if self.take()[1] == "-" else 1
        t = self.take()
        if t[0] != "num" or not t[1].isdigit():
            raise ExprSyntaxError("'^' needs an integer exponent", self.text, t[2])
        if paren:
            self.expect(")")
        return sign * int(t[1])

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            if val.isdigit():
                return const(int(val))
            return const(float(val))
        if kind == "name":
            if val in ("exp", "ln", "sin", "cos"):
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                if val == "ln" and arg.is_const() and arg.value <= 0:
                    raise ExprSyntaxError("logarithm of a non-positive constant",
                                          self.text, pos)
                return n_func(val, arg)
            if val in self.names:
                return coord(self.names[val])
            raise UnknownIdentifier(val, self.text, pos)
        if val == "(":
            e = self.expr()
            self.expect(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {what}", self.text, pos)


def parse(text: str, chart) -> Expr:
    """Parse ``text`` into a normal-form :class:`Expr`.

    ``chart`` is anything with a ``names`` attribute, or a plain sequence of
    coordinate names.
    """
    names = getattr(chart, "names", chart)
    if not isinstance(text, str):
        raise TypeError("expression text must be a string")
    return simplify(_Parser(text, list(names)).parse())
