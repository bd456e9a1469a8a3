"""A small expression language for scalar fields in the coordinates u, v, x, y.

Grammar (whitespace is insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" ["-"] integer)?
    atom   := number | var | fn "(" expr ")" | "(" expr ")"
    var    := "u" | "v" | "x" | "y"
    fn     := sin | cos | exp | log | sqrt | sinh | cosh

so ``^`` binds tighter than unary minus (``-x^2`` is ``-(x^2)``), which binds
tighter than ``*`` and ``/``.  Binary operators are left associative.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

from .jet import Jet, JetDomainError, JetError, jet_unary

VARIABLES = ("u", "v", "x", "y")
FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "sinh", "cosh")


class ExprError(ValueError):
    """Base class for expression failures; ``offset`` is a byte offset or None."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


class ParseError(ExprError):
    pass


class EvalDomainError(ExprError):
    pass


# AST ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    value: float
    pos: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Variable:
    name: str
    pos: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"
    pos: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"
    pos: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"
    pos: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"
    pos: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    arg: "Expr"
    pos: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class IntPower:
    base: "Expr"
    k: int
    pos: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Apply:
    fn: str
    arg: "Expr"
    pos: int = field(default=0, compare=False, repr=False)


Expr = Union[Constant, Variable, Add, Sub, Mul, Div, Neg, IntPower, Apply]


# lexer -------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # number, name, op, end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    # offsets are reported in bytes of the UTF-8 encoding
    byte_pos = lambda k: len(text[:k].encode("utf-8"))
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", byte_pos(i))
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), byte_pos(i)))
        i = m.end()
    toks.append(_Tok("end", "", byte_pos(len(text))))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _is_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def _expect(self, op: str) -> _Tok:
        if not self._is_op(op):
            raise ParseError(f"expected {op!r}, found {self.tok.text or 'end of input'!r}", self.tok.pos)
        return self._advance()

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected token {self.tok.text!r}", self.tok.pos)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self._is_op("+", "-"):
            t = self._advance()
            right = self.term()
            left = (Add if t.text == "+" else Sub)(left, right, t.pos)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self._is_op("*", "/"):
            t = self._advance()
            right = self.unary()
            left = (Mul if t.text == "*" else Div)(left, right, t.pos)
        return left

    def unary(self) -> Expr:
        if self._is_op("-"):
            t = self._advance()
            return Neg(self.unary(), t.pos)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self._is_op("^"):
            t = self._advance()
            sign = 1
            if self._is_op("-", "+"):
                sign = -1 if self._advance().text == "-" else 1
            num = self.tok
            if num.kind != "number":
                raise ParseError("exponent must be an integer literal", num.pos)
            if not num.text.isdigit():
                raise ParseError(f"non-integer exponent {num.text!r}", num.pos)
            self._advance()
            if self._is_op("^"):
                raise ParseError("chained exponents need parentheses", self.tok.pos)
            return IntPower(base, sign * int(num.text), t.pos)
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self._advance()
            return Constant(float(t.text), t.pos)
        if t.kind == "name":
            self._advance()
            if t.text in VARIABLES:
                return Variable(t.text, t.pos)
            if t.text in FUNCTIONS:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Apply(t.text, arg, t.pos)
            raise ParseError(f"unknown identifier {t.text!r}", t.pos)
        if self._is_op("("):
            self._advance()
            e = self.expr()
            self._expect(")")
            return e
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)


def parse(text: str) -> Expr:
    """Parse ``text`` into an AST; raises :class:`ParseError` with a byte offset."""
    return _Parser(text).parse()


def as_expr(e: "Expr | str | float | int") -> Expr:
    if isinstance(e, str):
        return parse(e)
    if isinstance(e, (int, float)):
        return Constant(float(e))
    return e


# printing ----------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, IntPower: 4}


def _prec(e: Expr) -> int:
    if isinstance(e, Constant) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return 3
    return _PREC.get(type(e), 5)


def to_text(e: Expr) -> str:
    """Render an AST so that ``parse(to_text(e)) == e``."""

    def wrap(sub: Expr, min_prec: int) -> str:
        s = to_text(sub)
        return f"({s})" if _prec(sub) < min_prec else s

    if isinstance(e, Constant):
        if not math.isfinite(e.value):
            raise ExprError(f"cannot print non-finite constant {e.value}")
        s = repr(float(e.value))
        return s
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, (Add, Sub, Mul, Div)):
        op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
        p = _PREC[type(e)]
        return f"{wrap(e.left, p)} {op} {wrap(e.right, p + 1)}"
    if isinstance(e, Neg):
        return f"-{wrap(e.arg, 3)}"
    if isinstance(e, IntPower):
        return f"{wrap(e.base, 5)}^{e.k}"
    if isinstance(e, Apply):
        return f"{e.fn}({to_text(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


# evaluation --------------------------------------------------------------------


def substitute(e: Expr, mapping: Mapping[str, str]) -> Expr:
    """Rename variables, e.g. ``{"u": "v", "v": "u"}``."""
    if isinstance(e, Constant):
        return e
    if isinstance(e, Variable):
        return Variable(mapping.get(e.name, e.name), e.pos)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return type(e)(substitute(e.left, mapping), substitute(e.right, mapping), e.pos)
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, mapping), e.pos)
    if isinstance(e, IntPower):
        return IntPower(substitute(e.base, mapping), e.k, e.pos)
    if isinstance(e, Apply):
        return Apply(e.fn, substitute(e.arg, mapping), e.pos)
    raise TypeError(f"not an expression node: {e!r}")


def _evaluate(e: Expr, leaf: Callable, const: Callable):
    if isinstance(e, Constant):
        return const(e.value)
    if isinstance(e, Variable):
        return leaf(e.name)
    try:
        if isinstance(e, Add):
            return _evaluate(e.left, leaf, const) + _evaluate(e.right, leaf, const)
        if isinstance(e, Sub):
            return _evaluate(e.left, leaf, const) - _evaluate(e.right, leaf, const)
        if isinstance(e, Mul):
            return _evaluate(e.left, leaf, const) * _evaluate(e.right, leaf, const)
        if isinstance(e, Div):
            num = _evaluate(e.left, leaf, const)
            den = _evaluate(e.right, leaf, const)
            return num / den
        if isinstance(e, Neg):
            return -_evaluate(e.arg, leaf, const)
        if isinstance(e, IntPower):
            return _evaluate(e.base, leaf, const) ** e.k
        if isinstance(e, Apply):
            return jet_unary(e.fn, _evaluate(e.arg, leaf, const))
    except EvalDomainError:
        raise
    except (JetDomainError, ZeroDivisionError, OverflowError) as exc:
        raise EvalDomainError(f"{exc} in {to_text(e)!r}", e.pos) from exc
    raise TypeError(f"not an expression node: {e!r}")


def eval_jet(e: "Expr | str", p, degree: int = 4) -> Jet:
    """Taylor jet of ``e`` at point ``p = (u, v, x, y)`` to total degree ``degree``."""
    e = as_expr(e)
    p = tuple(float(t) for t in p)
    if len(p) != 4:
        raise ExprError(f"point must have four coordinates, got {len(p)}")
    leaves = {name: Jet.variable(i, p[i], degree) for i, name in enumerate(VARIABLES)}
    try:
        return _evaluate(e, leaves.__getitem__, lambda c: Jet.constant(c, degree))
    except JetError as exc:
        if isinstance(exc, JetDomainError):
            raise EvalDomainError(str(exc)) from exc
        raise


# first-order fast path -------------------------------------------------------
#
# Geodesic integration needs thousands of first derivatives of the same
# expression.  Compiling the tree once into closures over plain floats avoids
# the per-node cost of general jets.

Dual = tuple  # (value, d_u, d_v, d_x, d_y)


def _positive(name: str) -> Callable[[float], None]:
    def check(x: float) -> None:
        if x <= 0.0:
            raise ArithmeticError(f"{name} requires a positive constant term, got {x!r}")

    return check


_FIRST_ORDER = {
    "sin": (math.sin, math.cos, None),
    "cos": (math.cos, lambda x: -math.sin(x), None),
    "exp": (math.exp, math.exp, None),
    "sinh": (math.sinh, math.cosh, None),
    "cosh": (math.cosh, math.sinh, None),
    "log": (math.log, lambda x: 1.0 / x, _positive("log")),
    "sqrt": (math.sqrt, lambda x: 0.5 / math.sqrt(x), _positive("sqrt")),
}


def _guard(fn: Callable[[Sequence[float]], Dual], e: Expr) -> Callable[[Sequence[float]], Dual]:
    def run(p):
        try:
            return fn(p)
        except EvalDomainError:
            raise
        except (ArithmeticError, ValueError) as exc:
            raise EvalDomainError(f"{exc} in {to_text(e)!r}", e.pos) from exc

    return run


def _compile(e: Expr) -> Callable[[Sequence[float]], Dual]:
    if isinstance(e, Constant):
        const = (e.value, 0.0, 0.0, 0.0, 0.0)
        return lambda p: const
    if isinstance(e, Variable):
        slot = VARIABLES.index(e.name)
        unit = tuple(1.0 if k == slot else 0.0 for k in range(4))
        return lambda p: (p[slot],) + unit
    if isinstance(e, (Add, Sub, Mul, Div)):
        f, g = _compile(e.left), _compile(e.right)
        if isinstance(e, Add):
            def add(p):
                a0, a1, a2, a3, a4 = f(p)
                b0, b1, b2, b3, b4 = g(p)
                return (a0 + b0, a1 + b1, a2 + b2, a3 + b3, a4 + b4)

            return add
        if isinstance(e, Sub):
            def sub(p):
                a0, a1, a2, a3, a4 = f(p)
                b0, b1, b2, b3, b4 = g(p)
                return (a0 - b0, a1 - b1, a2 - b2, a3 - b3, a4 - b4)

            return sub
        if isinstance(e, Mul):
            def mul(p):
                a0, a1, a2, a3, a4 = f(p)
                b0, b1, b2, b3, b4 = g(p)
                return (a0 * b0, a0 * b1 + a1 * b0, a0 * b2 + a2 * b0, a0 * b3 + a3 * b0, a0 * b4 + a4 * b0)

            return mul

        def div(p):
            a0, a1, a2, a3, a4 = f(p)
            b0, b1, b2, b3, b4 = g(p)
            if b0 == 0.0:
                raise ZeroDivisionError("division by a jet with zero constant term")
            q = a0 / b0
            return (q, (a1 - q * b1) / b0, (a2 - q * b2) / b0, (a3 - q * b3) / b0, (a4 - q * b4) / b0)

        return _guard(div, e)
    if isinstance(e, Neg):
        f = _compile(e.arg)

        def neg(p):
            a0, a1, a2, a3, a4 = f(p)
            return (-a0, -a1, -a2, -a3, -a4)

        return neg
    if isinstance(e, IntPower):
        f, k = _compile(e.base), e.k
        if k == 0:
            one = (1.0, 0.0, 0.0, 0.0, 0.0)
            return lambda p: one

        def power(p):
            a0, a1, a2, a3, a4 = f(p)
            if k < 0 and a0 == 0.0:
                raise ZeroDivisionError("division by a jet with zero constant term")
            s = k * a0 ** (k - 1)
            return (a0**k, s * a1, s * a2, s * a3, s * a4)

        return _guard(power, e)
    if isinstance(e, Apply):
        f = _compile(e.arg)
        value, deriv, check = _FIRST_ORDER[e.fn]

        def apply(p):
            a0, a1, a2, a3, a4 = f(p)
            if check is not None:
                check(a0)
            s = deriv(a0)
            return (value(a0), s * a1, s * a2, s * a3, s * a4)

        return _guard(apply, e)
    raise TypeError(f"not an expression node: {e!r}")


def compile_gradient(e: "Expr | str") -> Callable[[Sequence[float]], Dual]:
    """Evaluator ``p -> (value, d_u, d_v, d_x, d_y)``; build once, call often."""
    return _compile(as_expr(e))


def eval_gradient(e: "Expr | str", p) -> tuple[float, tuple[float, float, float, float]]:
    """Value and gradient of ``e`` at ``p``."""
    p = tuple(float(t) for t in p)
    if len(p) != 4:
        raise ExprError(f"point must have four coordinates, got {len(p)}")
    out = compile_gradient(e)(p)
    return out[0], out[1:]


def eval_value(e: "Expr | str", p) -> float:
    return eval_jet(e, p, 0).value
