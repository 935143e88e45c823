"""Tiny arithmetic grammar for profile definitions in config files.

Supported: decimal literals, the variable ``x``, binary ``+ - * /``,
right-associative ``^``, unary minus, parentheses, and the functions
``sin``, ``cos``, ``exp``.  Parsing builds a closure tree; evaluation
accepts a float or a numpy array and broadcasts constants to the input
shape.

Grammar (recursive descent):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
"""

from __future__ import annotations

import re
from typing import Callable, List, Tuple, Union

import numpy as np

from .exceptions import ExpressionError

__all__ = ["Expression", "parse_expression"]

_FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_Node = Callable[[np.ndarray], Union[np.ndarray, float]]


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens: List[Tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = len(text) - len(stripped)
            raise ExpressionError(
                f"unexpected character {stripped[0]!r} at position {col} in {text!r}"
            )
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> Tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str) -> "ExpressionError":
        kind, value, col = self.peek()
        shown = value if kind != "end" else "end of input"
        return ExpressionError(
            f"{message}, got {shown!r} at position {col} in {self.text!r}"
        )

    def parse(self) -> _Node:
        node = self.expr()
        if self.peek()[0] != "end":
            raise self.fail("unexpected trailing input")
        return node

    def expr(self) -> _Node:
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            lhs = node
            if op == "+":
                node = lambda x, a=lhs, b=rhs: a(x) + b(x)
            else:
                node = lambda x, a=lhs, b=rhs: a(x) - b(x)
        return node

    def term(self) -> _Node:
        node = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            lhs = node
            if op == "*":
                node = lambda x, a=lhs, b=rhs: a(x) * b(x)
            else:
                node = lambda x, a=lhs, b=rhs: a(x) / b(x)
        return node

    def factor(self) -> _Node:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            inner = self.factor()
            return lambda x, a=inner: -a(x)
        return self.power()

    def power(self) -> _Node:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            exponent = self.factor()
            return lambda x, a=base, b=exponent: np.power(a(x), b(x))
        return base

    def atom(self) -> _Node:
        kind, value, _ = self.peek()
        if kind == "num":
            self.take()
            val = float(value)
            return lambda x, v=val: v
        if kind == "name":
            self.take()
            if value == "x":
                return lambda x: x
            fn = _FUNCTIONS.get(value)
            if fn is None:
                raise ExpressionError(
                    f"unknown name {value!r} in {self.text!r} "
                    f"(allowed: x, {', '.join(sorted(_FUNCTIONS))})"
                )
            if self.peek()[:2] != ("op", "("):
                raise self.fail(f"expected '(' after {value}")
            self.take()
            arg = self.expr()
            if self.peek()[:2] != ("op", ")"):
                raise self.fail("expected ')'")
            self.take()
            return lambda x, f=fn, a=arg: f(a(x))
        if kind == "op" and value == "(":
            self.take()
            inner = self.expr()
            if self.peek()[:2] != ("op", ")"):
                raise self.fail("expected ')'")
            self.take()
            return inner
        raise self.fail("expected a number, name or '('")


class Expression:
    """Parsed expression; call with a float or numpy array."""

    def __init__(self, source: str, node: _Node) -> None:
        self.source = source
        self._node = node

    def __call__(self, x: object) -> Union[float, np.ndarray]:
        arr = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            out = self._node(arr)
        if arr.ndim == 0:
            return float(out)
        result = np.asarray(out, dtype=float)
        if result.shape != arr.shape:
            result = np.broadcast_to(result, arr.shape).copy()
        return result

    def __repr__(self) -> str:
        return f"Expression({self.source!r})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Expression):
            return self.source == other.source
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Expression", self.source))


def parse_expression(text: str) -> Expression:
    """Parse ``text`` into a callable Expression.

    Raises ExpressionError with position information on malformed input.
    """
    if not isinstance(text, str) or not text.strip():
        raise ExpressionError("expression must be a non-empty string")
    node = _Parser(text).parse()
    return Expression(text.strip(), node)
