"""Expression trees in the two coordinates ``u`` and ``v``.

Nodes are frozen dataclasses, so structural equality and hashing come for
free. The lower-case constructors (``add``, ``mul``, ...) fold constants and
apply the 0/1 identities; they never attempt deeper algebra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from flowlab.errors import DomainError, FlowlabError

MAX_DEPTH = 64
MAX_EXPONENT = 16
FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt")
VARIABLES = ("u", "v")


class Expr:
    """Base class of all expression nodes."""

    def __call__(self, u, v):
        return evaluate(self, u, v)

    def __str__(self):
        return render(self)

    # operator sugar for building expressions in code and tests
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, k):
        return power(self, k)


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr


U = Var("u")
V = Var("v")
ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, str):
        if x in VARIABLES:
            return Var(x)
        raise FlowlabError("unknown-identifier", x)
    return Const(float(x))


def is_const(e, value=None):
    return isinstance(e, Const) and (value is None or e.value == value)


def depth(e):
    if isinstance(e, (Const, Var)):
        return 1
    if isinstance(e, (Neg, Func)):
        return 1 + depth(e.arg)
    if isinstance(e, Pow):
        return 1 + depth(e.base)
    return 1 + max(depth(e.left), depth(e.right))


# --- simplifying constructors -------------------------------------------

def neg(a):
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def add(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if is_const(a, 0.0):
        return b
    if is_const(b, 0.0):
        return a
    if isinstance(b, Neg):
        return sub(a, b.arg)
    return Add(a, b)


def sub(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if is_const(b, 0.0):
        return a
    if is_const(a, 0.0):
        return neg(b)
    if a == b:
        return ZERO
    return Sub(a, b)


def mul(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if is_const(a, 0.0) or is_const(b, 0.0):
        return ZERO
    if is_const(a, 1.0):
        return b
    if is_const(b, 1.0):
        return a
    if is_const(a, -1.0):
        return neg(b)
    if is_const(b, -1.0):
        return neg(a)
    return Mul(a, b)


def div(a, b):
    if is_const(b, 0.0):
        # kept symbolic: the domain error surfaces at evaluation time
        return Div(a, b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value / b.value)
    if is_const(a, 0.0):
        return ZERO
    if is_const(b, 1.0):
        return a
    return Div(a, b)


def power(a, k):
    if isinstance(k, Const):
        k = k.value
    if float(k) != int(k):
        raise FlowlabError("bad-exponent", f"exponent must be an integer, got {k}")
    k = int(k)
    if abs(k) > MAX_EXPONENT:
        raise FlowlabError("bad-exponent", f"|exponent| must be <= {MAX_EXPONENT}, got {k}")
    if k == 0:
        return ONE
    if k == 1:
        return a
    if isinstance(a, Const):
        if a.value == 0.0 and k < 0:
            return Pow(a, k)
        return Const(a.value ** k)
    return Pow(a, k)


def func(name, a):
    if name not in FUNCTIONS:
        raise FlowlabError("unknown-identifier", name)
    if isinstance(a, Const):
        x = a.value
        if name == "sin":
            return Const(math.sin(x))
        if name == "cos":
            return Const(math.cos(x))
        if name == "exp" and x == 0.0:
            return ONE
        if name == "ln" and x == 1.0:
            return ZERO
        if name == "sqrt" and x in (0.0, 1.0):
            return Const(x)
    return Func(name, a)


# --- evaluation ----------------------------------------------------------

def _check(ok, what):
    if not np.all(ok):
        raise DomainError(what)


def _fn_sin(x):
    return np.sin(x)


def _fn_cos(x):
    return np.cos(x)


def _fn_exp(x):
    with np.errstate(over="ignore"):
        r = np.exp(x)
    _check(np.isfinite(r), "exp overflow")
    return r


def _fn_ln(x):
    _check(np.asarray(x) > 0, "ln of a non-positive number")
    return np.log(x)


def _fn_sqrt(x):
    _check(np.asarray(x) >= 0, "sqrt of a negative number")
    return np.sqrt(x)


_FN = {"sin": _fn_sin, "cos": _fn_cos, "exp": _fn_exp, "ln": _fn_ln, "sqrt": _fn_sqrt}


@lru_cache(maxsize=4096)
def compile_expr(e):
    """Compile ``e`` into a Python callable ``f(u, v)``.

    The callable accepts floats or ``numpy`` arrays and raises
    :class:`DomainError` instead of returning ``nan`` or ``inf``.
    """
    if isinstance(e, Const):
        c = e.value
        return lambda u, v: c + 0.0 * np.asarray(u)
    if isinstance(e, Var):
        if e.name == "u":
            return lambda u, v: np.asarray(u, dtype=float)
        if e.name == "v":
            return lambda u, v: np.asarray(v, dtype=float)
        raise FlowlabError("unknown-identifier", e.name)
    if isinstance(e, Neg):
        f = compile_expr(e.arg)
        return lambda u, v: -f(u, v)
    if isinstance(e, Pow):
        f = compile_expr(e.base)
        k = e.exponent

        def _pow(u, v):
            b = f(u, v)
            if k < 0:
                _check(b != 0, "zero to a negative power")
            with np.errstate(over="ignore"):
                r = np.power(b, float(k))
            _check(np.isfinite(r), "power overflow")
            return r
        return _pow
    if isinstance(e, Func):
        f = compile_expr(e.arg)
        g = _FN[e.name]
        return lambda u, v: g(f(u, v))
    left = compile_expr(e.left)
    right = compile_expr(e.right)
    if isinstance(e, Add):
        return lambda u, v: left(u, v) + right(u, v)
    if isinstance(e, Sub):
        return lambda u, v: left(u, v) - right(u, v)
    if isinstance(e, Mul):
        return lambda u, v: left(u, v) * right(u, v)
    if isinstance(e, Div):
        def _div(u, v):
            d = right(u, v)
            _check(d != 0, "division by zero")
            return left(u, v) / d
        return _div
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e, u, v):
    """Evaluate ``e`` at ``(u, v)``; returns a float for scalar input."""
    r = compile_expr(e)(u, v)
    with np.errstate(all="ignore"):
        _check(np.isfinite(r), "non-finite value")
    if np.ndim(r) == 0:
        return float(r)
    return r


# --- rendering -----------------------------------------------------------

def _fmt_number(x):
    if x.is_integer() and abs(x) < 1e15:
        s = str(int(x))
    else:
        s = repr(x)
    return f"({s})" if x < 0 or s.startswith("-") else s


def render(e):
    """Text form of ``e`` that parses back to a structurally equal tree."""
    if isinstance(e, Const):
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{render(e.arg)})"
    if isinstance(e, Pow):
        k = e.exponent
        ks = str(k) if k >= 0 else f"({k})"
        return f"({render(e.base)}^{ks})"
    if isinstance(e, Func):
        return f"{e.name}({render(e.arg)})"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
    return f"({render(e.left)} {op} {render(e.right)})"


def variables(e):
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Const):
        return set()
    if isinstance(e, (Neg, Func)):
        return variables(e.arg)
    if isinstance(e, Pow):
        return variables(e.base)
    return variables(e.left) | variables(e.right)
