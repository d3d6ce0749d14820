"""A small real-valued expression language in one variable ``x``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := number | 'x' | ident '(' args ')' | '(' expr ')' | '-' factor
    args   := expr (',' expr)*

Functions: ``log exp sqrt pow min max`` and the weights ``ell(j, .)`` and
``Lambda(k, .)``, whose first argument must be a literal non-negative
integer.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .weights import WeightDomainError, Lambda, ell


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = expected
        detail = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class ExprEvalError(ValueError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class WeightCall:
    name: str  # "ell" or "Lambda"
    index: int
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call, WeightCall]

# name -> (min arity, max arity); None means unbounded
_ARITY = {
    "log": (1, 1),
    "exp": (1, 1),
    "sqrt": (1, 1),
    "pow": (2, 2),
    "min": (2, None),
    "max": (2, None),
}
_WEIGHTS = ("ell", "Lambda")

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/(),]))"
)
_FACTOR_START = frozenset({"number", "x", "identifier", "(", "-"})


@dataclass
class _Tok:
    kind: str  # number, ident, op, end
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(
                f"unexpected character {text[pos]!r}", len(text[:pos].encode()), _FACTOR_START
            )
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _byte_offset(self, offset: int) -> int:
        return len(self.text[:offset].encode())

    def fail(self, message: str, expected=frozenset()):
        raise ExprSyntaxError(message, self._byte_offset(self.tok.offset), frozenset(expected))

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.fail(f"unexpected {found!r}", {text})

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}", {"+", "-", "*", "/", "end of input"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return Num(float(tok.text))
        if tok.kind == "ident":
            if tok.text == "x":
                self.i += 1
                return Var()
            return self.call()
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if self.accept("-"):
            return Neg(self.factor())
        found = tok.text or "end of input"
        self.fail(f"unexpected {found!r}", _FACTOR_START)

    def call(self) -> Expr:
        name_tok = self.tok
        name = name_tok.text
        if name not in _ARITY and name not in _WEIGHTS:
            raise ExprSyntaxError(f"unknown identifier {name!r}", self._byte_offset(name_tok.offset))
        self.i += 1
        self.expect("(")
        if name in _WEIGHTS:
            idx_tok = self.tok
            if idx_tok.kind != "number" or not idx_tok.text.isdigit():
                raise ExprSyntaxError(
                    f"first argument of {name} must be a literal non-negative integer",
                    self._byte_offset(idx_tok.offset),
                )
            self.i += 1
            self.expect(",")
            arg = self.expr()
            if self.tok.kind == "op" and self.tok.text == ",":
                raise ExprSyntaxError(
                    f"{name} takes 2 arguments", self._byte_offset(self.tok.offset)
                )
            self.expect(")")
            return WeightCall(name, int(idx_tok.text), arg)
        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        self.expect(")")
        lo, hi = _ARITY[name]
        if len(args) < lo or (hi is not None and len(args) > hi):
            want = str(lo) if lo == hi else f"at least {lo}"
            raise ExprSyntaxError(
                f"{name} takes {want} argument(s), got {len(args)}",
                self._byte_offset(name_tok.offset),
            )
        return Call(name, tuple(args))


def parse(text: str) -> Expr:
    return _Parser(text).parse()


def to_text(node: Expr) -> str:
    """Print ``node`` so that parsing the result gives back an equal tree."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"-{to_text(node.operand)}"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, WeightCall):
        return f"{node.name}({node.index}, {to_text(node.arg)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_text(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


def _div(a: float, b: float) -> float:
    if b == 0:
        raise ExprEvalError("division by zero")
    return a / b


def _log(a: float) -> float:
    if a <= 0:
        raise ExprEvalError(f"log of non-positive value {a!r}")
    return math.log(a)


def _sqrt(a: float) -> float:
    if a < 0:
        raise ExprEvalError(f"sqrt of negative value {a!r}")
    return math.sqrt(a)


def _pow(a: float, b: float) -> float:
    try:
        out = math.pow(a, b)
    except (ValueError, ZeroDivisionError, OverflowError) as e:
        raise ExprEvalError(f"pow({a!r}, {b!r}): {e}") from None
    return out


def _exp(a: float) -> float:
    try:
        return math.exp(a)
    except OverflowError:
        raise ExprEvalError(f"exp({a!r}) overflows") from None


_FUNCS = {"log": _log, "exp": _exp, "sqrt": _sqrt, "pow": _pow, "min": min, "max": max}
_BINOPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
}


def evaluate(node: Expr, x: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(x)
    if isinstance(node, Neg):
        return -evaluate(node.operand, x)
    if isinstance(node, BinOp):
        return _BINOPS[node.op](evaluate(node.left, x), evaluate(node.right, x))
    if isinstance(node, WeightCall):
        arg = evaluate(node.arg, x)
        fn = ell if node.name == "ell" else Lambda
        try:
            return fn(node.index, arg)
        except WeightDomainError:
            raise ExprEvalError(f"{node.name}({node.index}, {arg!r}) needs an argument >= 1") from None
    if isinstance(node, Call):
        return _FUNCS[node.name](*(evaluate(a, x) for a in node.args))
    raise TypeError(f"not an expression node: {node!r}")
