"""Minimal recursive-descent parser for arithmetic expressions in ``t``.

Grammar (right-associative ``^`` binds tighter than unary minus on its left
operand, matching conventional mathematical notation):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 't' | NAME '(' expr ')' | '(' expr ')'

Supported functions: exp, log, sqrt.  The compiled result is a callable
mapping numpy arrays to numpy arrays.
"""

from __future__ import annotations

import re
from typing import Callable

import numpy as np

from .errors import ConfigurationError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_FUNCTIONS = {"exp": np.exp, "log": np.log, "sqrt": np.sqrt}


def _tokenize(text: str):
    pos, tokens = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ConfigurationError(f"bad character in expression at position {pos}: {text[pos:]!r}")
        if m.group("num") is not None:
            tokens.append(("num", float(m.group("num"))))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ConfigurationError(f"expected {op!r} in expression")

    def parse(self):
        node = self.expr()
        if self.pos != len(self.tokens):
            raise ConfigurationError("trailing tokens in expression")
        return node

    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            node = (np.add if op == "+" else np.subtract, node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.factor()
            node = (np.multiply if op == "*" else np.divide, node, rhs)
        return node

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            return (np.negative, self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exponent = self.factor()
            return (np.power, base, exponent)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ("const", val)
        if kind == "name":
            if val == "t":
                return ("var",)
            if val in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return (_FUNCTIONS[val], arg)
            raise ConfigurationError(f"unknown identifier {val!r} in expression")
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ConfigurationError(f"unexpected token {val!r} in expression")


def _evaluate(node, t):
    head = node[0]
    if head == "const":
        return np.full_like(t, node[1])
    if head == "var":
        return t
    if len(node) == 2:
        return head(_evaluate(node[1], t))
    return head(_evaluate(node[1], t), _evaluate(node[2], t))


def compile_expression(text: str) -> Callable[[np.ndarray], np.ndarray]:
    ast = _Parser(_tokenize(text)).parse()

    def fn(t, _ast=ast):
        arr = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return _evaluate(_ast, arr)

    return fn
