"""Recursive-descent parser for field component expressions.

Grammar (whitespace is ignored)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;          (* right associative *)
    atom    = number | "u" | "v" | "pi"
            | func "(" expr ")" | "(" expr ")" ;
    func    = "sin" | "cos" | "exp" | "ln" | "sqrt" ;
    number  = ( digits [ "." [ digits ] ] | "." digits )
              [ ("e" | "E") [ "+" | "-" ] digits ] ;

The exponent of ``^`` must fold to an integer constant with absolute value
at most 16. Offsets in errors are 0-based character positions.
"""
import math
import re

from flowlab.errors import DomainError, ParseError
from flowlab.fieldexpr import expr as ex

MAX_LENGTH = 4096

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError("syntax-error", f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, off = self.take()
        if text != value:
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError("syntax-error", f"expected {value!r}, found {found}", off)

    def parse(self):
        e = self.expr(0)
        kind, text, off = self.peek()
        if kind != "end":
            raise ParseError("syntax-error", f"unexpected {text!r}", off)
        return e

    def _guard(self, level):
        # grammar recursion, not tree depth; the tree is checked after parsing
        if level > 8 * ex.MAX_DEPTH:
            raise ParseError("syntax-error", "expression nested too deeply", self.peek()[2])

    def expr(self, level):
        self._guard(level)
        left = self.term(level + 1)
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            right = self.term(level + 1)
            left = ex.Add(left, right) if op == "+" else ex.Sub(left, right)
        return left

    def term(self, level):
        self._guard(level)
        left = self.unary(level + 1)
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            right = self.unary(level + 1)
            left = ex.Mul(left, right) if op == "*" else ex.Div(left, right)
        return left

    def unary(self, level):
        self._guard(level)
        if self.peek()[1] == "-":
            self.take()
            arg = self.unary(level + 1)
            return ex.neg(arg) if isinstance(arg, ex.Const) else ex.Neg(arg)
        return self.power(level + 1)

    def power(self, level):
        self._guard(level)
        base = self.atom(level + 1)
        if self.peek()[1] == "^":
            self.take()
            off = self.peek()[2]
            exponent = _fold(self.unary(level + 1))
            if exponent is None or not float(exponent).is_integer():
                raise ParseError("syntax-error", "exponent must be an integer constant", off)
            if abs(exponent) > ex.MAX_EXPONENT:
                raise ParseError("syntax-error", f"|exponent| exceeds {ex.MAX_EXPONENT}", off)
            return ex.Pow(base, int(exponent))
        return base

    def atom(self, level):
        self._guard(level)
        kind, text, off = self.take()
        if kind == "num":
            value = float(text)
            if not math.isfinite(value):
                raise ParseError("syntax-error", f"number {text!r} is out of range", off)
            return ex.Const(value)
        if kind == "id":
            if text in ex.VARIABLES:
                return ex.Var(text)
            if text == "pi":
                return ex.Const(math.pi)
            if text in ex.FUNCTIONS:
                self.expect("(")
                arg = self.expr(level + 1)
                self.expect(")")
                return ex.Func(text, arg)
            raise ParseError("unknown-identifier", f"unknown identifier {text!r}", off)
        if text == "(":
            e = self.expr(level + 1)
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(text)
        raise ParseError("syntax-error", f"unexpected {found}", off)


def _fold(e):
    """Numeric value of a constant-only tree, or None."""
    if ex.variables(e):
        return None
    try:
        return float(ex.evaluate(e, 0.0, 0.0))
    except DomainError:
        return None


def parse(text):
    """Parse ``text`` into an expression tree.

    Raises :class:`~flowlab.errors.ParseError` with code ``"syntax-error"``
    or ``"unknown-identifier"``; ``err.offset`` locates the problem.
    """
    if len(text) > MAX_LENGTH:
        raise ParseError("syntax-error", f"input longer than {MAX_LENGTH} characters", MAX_LENGTH)
    e = _Parser(text).parse()
    if ex.depth(e) > ex.MAX_DEPTH:
        raise ParseError("syntax-error", f"tree depth exceeds {ex.MAX_DEPTH}", 0)
    return e
