"""Real-valued expressions in one variable ``x``.

Coefficient profiles ``a(x)`` and ``b(x)`` arrive as text.  This module
parses them into an immutable tree, evaluates the tree (scalar or numpy
array argument) and differentiates it symbolically.

Grammar, loosest binding first::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?            # right associative
    atom   := NUMBER | 'x' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'

so ``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.  Exponents must
reduce to a constant.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Named",
    "Unary",
    "Binary",
    "ExprSyntaxError",
    "DomainError",
    "parse",
    "evaluate",
    "differentiate",
    "substitute",
    "reflect",
    "to_program",
    "FUNCTIONS",
]

ArrayLike = Union[float, np.ndarray]

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")
NAMED = {"pi": math.pi, "e": math.e}


class ExprSyntaxError(SyntaxError):
    """Malformed expression text; ``offset`` is a 0-based byte offset."""

    def __init__(self, message: str, src: str, char_index: int):
        self.byte_offset = len(src[:char_index].encode("utf-8"))
        super().__init__(f"{message} at offset {self.byte_offset}")
        self.offset = self.byte_offset
        self.text = src


class DomainError(ValueError):
    """Evaluation left the real domain of an operation."""

    def __init__(self, message: str, x=None, subexpr: "Expr | None" = None):
        self.x = x
        self.subexpr = subexpr
        detail = message
        if subexpr is not None:
            detail += f" in '{subexpr}'"
        if x is not None:
            detail += f" at x={x!r}"
        super().__init__(detail)


# ---------------------------------------------------------------------------
# tree


class Expr:
    """Base node.  Subclasses are frozen dataclasses."""

    __slots__ = ()

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return evaluate(self, x)

    def __str__(self) -> str:
        return _format(self, 0)

    def is_const(self) -> bool:
        return False

    # convenience builders; all go through the folding constructors
    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return sub(self, _lift(other))

    def __rsub__(self, other):
        return sub(_lift(other), self)

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __truediv__(self, other):
        return div(self, _lift(other))

    def __neg__(self):
        return neg(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def is_const(self) -> bool:
        return True


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Named(Expr):
    name: str

    def is_const(self) -> bool:
        return True


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # "neg" or a name in FUNCTIONS
    arg: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


X = Var()


def _lift(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return Const(float(v))


def _const_value(e: Expr) -> float | None:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Named):
        return NAMED[e.name]
    return None


def _try_fold(e: Expr) -> Expr:
    """Replace a node whose operands are literal constants by its value."""
    try:
        with np.errstate(all="raise"):
            v = float(_eval_scalar(e, 0.0))
    except (DomainError, FloatingPointError, OverflowError, ZeroDivisionError):
        return e
    if not math.isfinite(v):
        return e
    return Const(v)


def neg(u: Expr) -> Expr:
    if isinstance(u, Const):
        return Const(-u.value)
    if isinstance(u, Unary) and u.op == "neg":
        return u.arg
    return Unary("neg", u)


def add(u: Expr, v: Expr) -> Expr:
    cu, cv = _const_value(u), _const_value(v)
    if isinstance(u, Const) and isinstance(v, Const):
        return Const(u.value + v.value)
    if cu == 0.0:
        return v
    if cv == 0.0:
        return u
    return Binary("+", u, v)


def sub(u: Expr, v: Expr) -> Expr:
    if isinstance(u, Const) and isinstance(v, Const):
        return Const(u.value - v.value)
    if _const_value(v) == 0.0:
        return u
    if _const_value(u) == 0.0:
        return neg(v)
    return Binary("-", u, v)


def mul(u: Expr, v: Expr) -> Expr:
    cu, cv = _const_value(u), _const_value(v)
    if isinstance(u, Const) and isinstance(v, Const):
        return Const(u.value * v.value)
    if cu == 0.0 or cv == 0.0:
        return Const(0.0)
    if cu == 1.0:
        return v
    if cv == 1.0:
        return u
    return Binary("*", u, v)


def div(u: Expr, v: Expr) -> Expr:
    cv = _const_value(v)
    if _const_value(u) == 0.0 and cv != 0.0:
        return Const(0.0)
    if cv == 1.0:
        return u
    node = Binary("/", u, v)
    if isinstance(u, Const) and isinstance(v, Const):
        return _try_fold(node)
    return node


def power(u: Expr, p: float) -> Expr:
    if p == 0.0:
        return Const(1.0)
    if p == 1.0:
        return u
    node = Binary("^", u, Const(float(p)))
    if isinstance(u, Const):
        return _try_fold(node)
    return node


def func(name: str, u: Expr) -> Expr:
    node = Unary(name, u)
    if isinstance(u, Const):
        return _try_fold(node)
    return node


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            start = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {src[start]!r}", src, start)
        kind = m.lastgroup
        text = m.group(kind)
        start = m.start(kind)
        if text == "**":
            text = "^"
        tokens.append((kind, text, start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        if tok[0] == "end":
            message = "unexpected end of input" if message is None else message
        raise ExprSyntaxError(message, self.src, tok[2])

    def expect(self, text: str):
        tok = self.peek()
        if tok[1] != text or tok[0] == "end":
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            self.fail(f"expected {text!r}, found {what}")
        return self.take()

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail(f"unexpected trailing token {tok[1]!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = add(e, rhs) if op == "+" else sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            e = mul(e, rhs) if op == "*" else div(e, rhs)
        return e

    def unary(self) -> Expr:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            exponent = self.unary()
            value = _const_value(exponent)
            if value is None:
                try:
                    value = float(_eval_scalar(exponent, 0.0))
                except DomainError:
                    value = None
                if not _is_constant_tree(exponent) or value is None:
                    self.fail("exponent must be a constant", tok)
            return power(base, value)
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        kind, text, _ = tok
        if kind == "end":
            self.fail("unexpected end of input")
        if kind == "num":
            self.take()
            return Const(float(text))
        if kind == "name":
            self.take()
            if text == "x":
                return X
            if text in NAMED:
                return Named(text)
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return func(text, arg)
            self.fail(f"unknown identifier {text!r}", tok)
        if text == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        self.fail(f"unexpected token {text!r}", tok)


def _is_constant_tree(e: Expr) -> bool:
    if isinstance(e, Var):
        return False
    if isinstance(e, Unary):
        return _is_constant_tree(e.arg)
    if isinstance(e, Binary):
        return _is_constant_tree(e.left) and _is_constant_tree(e.right)
    return True


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree.

    Raises
    ------
    ExprSyntaxError
        On unbalanced parentheses, unknown identifiers, trailing tokens or
        an incomplete expression.  ``err.offset`` is the byte offset.
    """
    if isinstance(src, bytes):
        src = src.decode("utf-8")
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _format(e: Expr, outer: int) -> str:
    if isinstance(e, Const):
        s = repr(e.value)
        return f"({s})" if e.value < 0 or s.startswith("-") else s
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Named):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            s = "-" + _format(e.arg, _PREC["neg"])
            return f"({s})" if outer >= _PREC["neg"] else s
        return f"{e.op}({_format(e.arg, 0)})"
    p = _PREC[e.op]
    if e.op == "^":
        s = f"{_format(e.left, p + 1)}^{_format(e.right, p)}"
    else:
        # right operand binds tighter to keep left associativity
        s = f"{_format(e.left, p)} {e.op} {_format(e.right, p + 1)}"
    return f"({s})" if p < outer else s


# ---------------------------------------------------------------------------
# evaluation


def _eval_scalar(e: Expr, x: float) -> float:
    return _eval(e, x, math)


def _eval(e: Expr, x, lib):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Named):
        return NAMED[e.name]
    if isinstance(e, Unary):
        v = _eval(e.arg, x, lib)
        if e.op == "neg":
            return -v
        if e.op == "log" and np.any(np.asarray(v) <= 0):
            raise DomainError("log of non-positive value", _first_bad(x, np.asarray(v) <= 0), e)
        if e.op == "sqrt" and np.any(np.asarray(v) < 0):
            raise DomainError("sqrt of negative value", _first_bad(x, np.asarray(v) < 0), e)
        return _FUNCS[lib is math][e.op](v)
    lhs = _eval(e.left, x, lib)
    rhs = _eval(e.right, x, lib)
    op = e.op
    if op == "+":
        return lhs + rhs
    if op == "-":
        return lhs - rhs
    if op == "*":
        return lhs * rhs
    if op == "/":
        zero = np.asarray(rhs) == 0
        if np.any(zero):
            raise DomainError("division by zero", _first_bad(x, zero), e)
        return lhs / rhs
    # power with constant exponent
    p = float(rhs)
    base = np.asarray(lhs)
    if p != int(p) and np.any(base < 0):
        raise DomainError("non-integer power of negative value", _first_bad(x, base < 0), e)
    if p < 0 and np.any(base == 0):
        raise DomainError("negative power of zero", _first_bad(x, base == 0), e)
    if lib is math:
        return float(lhs) ** p if p != int(p) else float(lhs) ** int(p)
    return np.power(lhs, p)


_FUNCS: dict[bool, dict[str, Callable]] = {
    True: {"sin": math.sin, "cos": math.cos, "exp": math.exp, "log": math.log, "sqrt": math.sqrt},
    False: {"sin": np.sin, "cos": np.cos, "exp": np.exp, "log": np.log, "sqrt": np.sqrt},
}


def _first_bad(x, mask):
    if np.ndim(x) == 0:
        return float(x)
    mask = np.broadcast_to(mask, np.shape(x))
    return float(np.asarray(x)[np.argmax(mask)])


def evaluate(e: Expr, x: ArrayLike) -> ArrayLike:
    """Value of ``e`` at ``x`` (float or array).

    Raises DomainError instead of returning NaN or infinity.
    """
    if np.ndim(x) == 0:
        try:
            v = _eval(e, float(x), math)
        except OverflowError:
            raise DomainError("overflow", float(x), e) from None
        v = float(v)
        if not math.isfinite(v):
            raise DomainError("non-finite value", float(x), e)
        return v
    xs = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        v = _eval(e, xs, np)
    v = np.broadcast_to(np.asarray(v, dtype=float), xs.shape).copy()
    bad = ~np.isfinite(v)
    if np.any(bad):
        raise DomainError("non-finite value", _first_bad(xs, bad), e)
    return v


# ---------------------------------------------------------------------------
# calculus


def _d(e: Expr) -> Expr:
    if isinstance(e, (Const, Named)):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0)
    if isinstance(e, Unary):
        u = e.arg
        du = _d(u)
        if isinstance(du, Const) and du.value == 0.0:
            return Const(0.0)
        op = e.op
        if op == "neg":
            return neg(du)
        if op == "sin":
            return mul(func("cos", u), du)
        if op == "cos":
            return neg(mul(func("sin", u), du))
        if op == "exp":
            return mul(e, du)
        if op == "log":
            return div(du, u)
        if op == "sqrt":
            return div(du, mul(Const(2.0), e))
        raise AssertionError(op)
    u, v = e.left, e.right
    if e.op == "+":
        return add(_d(u), _d(v))
    if e.op == "-":
        return sub(_d(u), _d(v))
    if e.op == "*":
        return add(mul(_d(u), v), mul(u, _d(v)))
    if e.op == "/":
        return div(sub(mul(_d(u), v), mul(u, _d(v))), power(v, 2.0))
    p = _const_value(v)
    return mul(mul(Const(p), power(u, p - 1.0)), _d(u))


def differentiate(e: Expr, order: int = 1) -> Expr:
    """Exact symbolic derivative of the given order (``order >= 1``)."""
    if order < 1 or int(order) != order:
        raise ValueError(f"order must be a positive integer, got {order!r}")
    for _ in range(int(order)):
        e = _d(e)
    return e


def substitute(e: Expr, replacement: Expr) -> Expr:
    """Replace every occurrence of ``x`` in ``e`` by ``replacement``."""
    if isinstance(e, Var):
        return replacement
    if isinstance(e, Unary):
        arg = substitute(e.arg, replacement)
        return neg(arg) if e.op == "neg" else func(e.op, arg)
    if isinstance(e, Binary):
        lhs = substitute(e.left, replacement)
        rhs = substitute(e.right, replacement)
        if e.op == "^":
            return power(lhs, _const_value(rhs))
        return {"+": add, "-": sub, "*": mul, "/": div}[e.op](lhs, rhs)
    return e


def reflect(e: Expr) -> Expr:
    """The profile ``x -> e(1 - x)``."""
    return substitute(e, Binary("-", Const(1.0), X))


# ---------------------------------------------------------------------------
# postfix program for compiled evaluation

OP_CONST, OP_X, OP_NEG, OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_POW = range(8)
OP_SIN, OP_COS, OP_EXP, OP_LOG, OP_SQRT = range(8, 13)
_UNARY_CODES = {"neg": OP_NEG, "sin": OP_SIN, "cos": OP_COS, "exp": OP_EXP,
                "log": OP_LOG, "sqrt": OP_SQRT}
_BINARY_CODES = {"+": OP_ADD, "-": OP_SUB, "*": OP_MUL, "/": OP_DIV, "^": OP_POW}


def to_program(e: Expr) -> tuple[np.ndarray, np.ndarray, int]:
    """Flatten ``e`` to postfix ``(opcodes, constants, stack_depth)``.

    Consumed by the compiled evaluator in :mod:`dampwave._kernel`.  Domain
    violations produce NaN there; callers re-evaluate with :func:`evaluate`
    to obtain a proper :class:`DomainError`.
    """
    ops: list[int] = []
    consts: list[float] = []
    depth = _emit(e, ops, consts)
    return np.asarray(ops, dtype=np.int64), np.asarray(consts, dtype=np.float64), depth


def _emit(e: Expr, ops: list[int], consts: list[float]) -> int:
    value = _const_value(e)
    if value is not None:
        ops.append(OP_CONST)
        consts.append(value)
        return 1
    if isinstance(e, Var):
        ops.append(OP_X)
        consts.append(0.0)
        return 1
    if isinstance(e, Unary):
        d = _emit(e.arg, ops, consts)
        ops.append(_UNARY_CODES[e.op])
        consts.append(0.0)
        return d
    d1 = _emit(e.left, ops, consts)
    d2 = _emit(e.right, ops, consts)
    ops.append(_BINARY_CODES[e.op])
    consts.append(0.0)
    return max(d1, d2 + 1)
