"""A small arithmetic expression language for profile functions.

Grammar (EBNF, see docs/grammar.md)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = ("-" | "+") unary | power ;
    power   = primary [ "^" unary ] ;
    primary = number | "u" | constant | func "(" expr ")" | "(" expr ")" ;

``^`` is right-associative and binds tighter than unary minus, so ``-u^2``
is ``-(u^2)``.  Evaluation is vectorized over numpy arrays.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, LoxoforgeError


class ExprSyntaxError(ConfigError):
    def __init__(self, message, position, expected=()):
        super().__init__(f"{message} at offset {position}")
        self.position = position
        self.expected = tuple(expected)


class UnknownIdentifier(ExprSyntaxError):
    pass


class EvalError(LoxoforgeError):
    def __init__(self, kind, position, source=""):
        super().__init__(f"{kind} at offset {position} in {source!r}")
        self.kind = kind
        self.position = position


def _arccot(x):
    return 0.5 * np.pi - np.arctan(x)


def _sech(x):
    return 1.0 / np.cosh(x)


FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "arccot": _arccot,
    "sech": _sech,
    "abs": np.abs,
}

CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLE = "u"


# -- AST --------------------------------------------------------------------
@dataclass(frozen=True)
class Num:
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: object
    pos: int = field(default=0, compare=False)


# -- tokenizer ----------------------------------------------------------------
_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(src):
    toks = []
    i = 0
    offsets = _byte_offsets(src)
    while i < len(src):
        if src[i].isspace():
            i += 1
            continue
        mt = _TOKEN.match(src, i)
        if not mt or mt.end() == i:
            raise ExprSyntaxError(f"unexpected character {src[i]!r}", offsets[i])
        kind = mt.lastgroup
        start = mt.start(kind)
        toks.append(_Tok(kind, mt.group(kind), offsets[start]))
        i = mt.end()
    toks.append(_Tok("end", "", offsets[len(src)]))
    return toks


def _byte_offsets(src):
    out, n = [], 0
    for ch in src:
        out.append(n)
        n += len(ch.encode("utf-8"))
    out.append(n)
    return out


class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def _next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def _expect(self, text):
        if self.tok.text != text:
            raise ExprSyntaxError(f"expected {text!r}", self.tok.pos, (text,))
        return self._next()

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(
                f"unexpected token {self.tok.text!r}", self.tok.pos, ("+", "-", "*", "/", "^", "end")
            )
        return node

    def expr(self):
        node = self.term()
        while self.tok.text in ("+", "-"):
            t = self._next()
            node = BinOp(t.text, node, self.term(), t.pos)
        return node

    def term(self):
        node = self.unary()
        while self.tok.text in ("*", "/"):
            t = self._next()
            node = BinOp(t.text, node, self.unary(), t.pos)
        return node

    def unary(self):
        if self.tok.text == "-":
            t = self._next()
            return Neg(self.unary(), t.pos)
        if self.tok.text == "+":
            self._next()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.tok.text == "^":
            t = self._next()
            return BinOp("^", base, self.unary(), t.pos)
        return base

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self._next()
            return Num(float(t.text), t.pos)
        if t.kind == "name":
            self._next()
            if t.text in FUNCTIONS:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Call(t.text, arg, t.pos)
            if self.tok.text == "(":
                raise UnknownIdentifier(f"unknown function {t.text!r}", t.pos, tuple(FUNCTIONS))
            if t.text == VARIABLE:
                return Var(t.text, t.pos)
            if t.text in CONSTANTS:
                return Const(t.text, t.pos)
            raise UnknownIdentifier(f"unknown identifier {t.text!r}", t.pos, (VARIABLE, *CONSTANTS))
        if t.text == "(":
            self._next()
            node = self.expr()
            self._expect(")")
            return node
        raise ExprSyntaxError(
            "expected a number, identifier or '('" if t.kind != "end" else "unexpected end of input",
            t.pos,
            ("number", "identifier", "("),
        )


# -- printing -----------------------------------------------------------------
def to_source(node):
    """Canonical, fully parenthesized source text."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    return f"({to_source(node.left)} {node.op} {to_source(node.right)})"


# -- evaluation ---------------------------------------------------------------
def _evaluate(node, u, src):
    if isinstance(node, Num):
        return np.full(u.shape, node.value)
    if isinstance(node, Var):
        return u
    if isinstance(node, Const):
        return np.full(u.shape, CONSTANTS[node.name])
    if isinstance(node, Neg):
        return -_evaluate(node.operand, u, src)
    if isinstance(node, Call):
        x = _evaluate(node.arg, u, src)
        if node.func == "ln" and np.any(x <= 0):
            raise EvalError("LogDomain", node.pos, src)
        if node.func == "sqrt" and np.any(x < 0):
            raise EvalError("SqrtDomain", node.pos, src)
        out = FUNCTIONS[node.func](x)
    else:
        left = _evaluate(node.left, u, src)
        right = _evaluate(node.right, u, src)
        if node.op == "+":
            out = left + right
        elif node.op == "-":
            out = left - right
        elif node.op == "*":
            out = left * right
        elif node.op == "/":
            if np.any(right == 0):
                raise EvalError("DivByZero", node.pos, src)
            out = left / right
        else:
            out = np.power(left, right)
    if not np.all(np.isfinite(out)):
        raise EvalError("NonFinite", node.pos, src)
    return out


@dataclass(frozen=True)
class ProfileExpr:
    source: str
    ast: object

    def __call__(self, u):
        return evaluate(self, u)

    def __str__(self):
        return to_source(self.ast)


def parse(src: str) -> ProfileExpr:
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0, ("number", "identifier", "("))
    return ProfileExpr(src, _Parser(src).parse())


def evaluate(expr: ProfileExpr, u=0.0):
    """Evaluate at ``u`` (scalar or array); scalars give a float."""
    arr = np.asarray(u, dtype=float)
    with np.errstate(all="ignore"):
        out = _evaluate(expr.ast, arr, expr.source)
    return float(out) if out.ndim == 0 else out


eval_expr = evaluate


def derivative(expr: ProfileExpr, u, h=None):
    """Central difference with default step ``1e-6 * max(1, |u|)``."""
    u = np.asarray(u, dtype=float)
    if h is None:
        h = 1e-6 * np.maximum(1.0, np.abs(u))
    out = (evaluate(expr, u + h) - evaluate(expr, u - h)) / (2.0 * h)
    return float(out) if np.ndim(out) == 0 else out


def parse_angle(text) -> float:
    """Accept raw radians or expressions such as ``pi/6``."""
    if isinstance(text, (int, float)):
        return float(text)
    return float(evaluate(parse(str(text)), 0.0))
