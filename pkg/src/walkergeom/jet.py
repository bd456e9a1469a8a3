"""Truncated multivariate Taylor arithmetic in the four coordinates (u, v, x, y).

A :class:`Jet` of degree ``D`` stores the Taylor coefficients
``f^(alpha)(p) / alpha!`` of a scalar field at a base point ``p`` for every
multi-index ``alpha`` of total order ``|alpha| <= D``.  Arithmetic is exact
truncation in total degree, so any partial derivative up to order ``D`` of a
composite expression is recovered exactly (up to floating point rounding).

Coordinates are numbered 1..4 in the public helpers (``u=1, v=2, x=3, y=4``),
matching the numeral-subscript convention ``a_13 = d^2 a / du dx``.  Methods on
:class:`Jet` use 0-based slots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

NVARS = 4
DEFAULT_DEGREE = 4
MAX_DEGREE = 8

MultiIndex = tuple[int, int, int, int]


class JetError(ValueError):
    """Base class for jet arithmetic failures."""


class DegreeError(JetError):
    pass


class JetDomainError(JetError):
    pass


@dataclass(frozen=True)
class _Layout:
    degree: int
    indices: tuple[MultiIndex, ...]
    position: dict
    factorials: np.ndarray
    mul_a: np.ndarray
    mul_b: np.ndarray
    mul_out: np.ndarray
    # per slot: (source positions in this layout, target positions in degree-1 layout, multipliers)
    diff_maps: tuple


@lru_cache(maxsize=None)
def _layout(degree: int) -> _Layout:
    indices = sorted(
        (a for a in product(range(degree + 1), repeat=NVARS) if sum(a) <= degree),
        key=lambda a: (sum(a), tuple(-k for k in a)),
    )
    position = {a: i for i, a in enumerate(indices)}
    factorials = np.array([math.prod(math.factorial(k) for k in a) for a in indices], dtype=float)

    ma, mb, mo = [], [], []
    for i, a in enumerate(indices):
        for j, b in enumerate(indices):
            s = tuple(x + y for x, y in zip(a, b))
            if sum(s) <= degree:
                ma.append(i)
                mb.append(j)
                mo.append(position[s])

    diff_maps = []
    if degree > 0:
        lower = _layout(degree - 1)
        for slot in range(NVARS):
            src, dst, mult = [], [], []
            for j, b in enumerate(lower.indices):
                a = list(b)
                a[slot] += 1
                src.append(position[tuple(a)])
                dst.append(j)
                mult.append(a[slot])
            diff_maps.append((np.array(src), np.array(dst), np.array(mult, dtype=float)))

    return _Layout(
        degree=degree,
        indices=tuple(indices),
        position=position,
        factorials=factorials,
        mul_a=np.array(ma, dtype=np.intp),
        mul_b=np.array(mb, dtype=np.intp),
        mul_out=np.array(mo, dtype=np.intp),
        diff_maps=tuple(diff_maps),
    )


def multi_indices(degree: int) -> tuple[MultiIndex, ...]:
    """All multi-indices of total order <= ``degree`` in storage order."""
    return _layout(degree).indices


def _check_degree(degree: int) -> None:
    if not isinstance(degree, (int, np.integer)) or degree < 0 or degree > MAX_DEGREE:
        raise DegreeError(f"jet degree must be an integer in [0, {MAX_DEGREE}], got {degree!r}")


class Jet:
    """Immutable truncated Taylor expansion of a scalar field at a point."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Sequence[float] | np.ndarray):
        _check_degree(degree)
        arr = np.array(coeffs, dtype=float)
        n = len(_layout(degree).indices)
        if arr.shape != (n,):
            raise DegreeError(f"degree {degree} jet needs {n} coefficients, got shape {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "degree", int(degree))
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    # construction -----------------------------------------------------------

    @classmethod
    def constant(cls, value: float, degree: int) -> "Jet":
        _check_degree(degree)
        c = np.zeros(len(_layout(degree).indices))
        c[0] = value
        return cls(degree, c)

    @classmethod
    def variable(cls, slot: int, value: float, degree: int) -> "Jet":
        if slot not in range(NVARS):
            raise JetError(f"coordinate slot must be 0..3, got {slot!r}")
        _check_degree(degree)
        lay = _layout(degree)
        c = np.zeros(len(lay.indices))
        c[0] = value
        if degree >= 1:
            e = [0] * NVARS
            e[slot] = 1
            c[lay.position[tuple(e)]] = 1.0
        return cls(degree, c)

    @classmethod
    def from_dict(cls, coeffs: dict, degree: int) -> "Jet":
        lay = _layout(degree)
        c = np.zeros(len(lay.indices))
        for alpha, val in coeffs.items():
            alpha = tuple(alpha)
            if alpha not in lay.position:
                raise DegreeError(f"multi-index {alpha} exceeds degree {degree}")
            c[lay.position[alpha]] = val
        return cls(degree, c)

    # inspection -------------------------------------------------------------

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def coeff(self, alpha: Iterable[int]) -> float:
        alpha = tuple(alpha)
        pos = _layout(self.degree).position.get(alpha)
        if pos is None:
            if len(alpha) != NVARS or min(alpha) < 0:
                raise JetError(f"invalid multi-index {alpha}")
            raise DegreeError(f"|{alpha}| = {sum(alpha)} exceeds jet degree {self.degree}")
        return float(self.coeffs[pos])

    def partial(self, alpha: Iterable[int]) -> float:
        """``d^alpha f`` at the base point, i.e. ``alpha! * coeff(alpha)``."""
        alpha = tuple(alpha)
        return self.coeff(alpha) * math.prod(math.factorial(k) for k in alpha)

    def d(self, *slots: int) -> float:
        """Partial derivative by listing 1-based coordinate numbers, e.g. ``j.d(1, 3)``."""
        alpha = [0] * NVARS
        for s in slots:
            alpha[s - 1] += 1
        return self.partial(alpha)

    def to_dict(self, drop_zeros: bool = True) -> dict:
        lay = _layout(self.degree)
        return {a: float(c) for a, c in zip(lay.indices, self.coeffs) if c != 0.0 or not drop_zeros}

    def derivatives(self) -> np.ndarray:
        """All partial derivatives in storage order (see :func:`multi_indices`)."""
        return self.coeffs * _layout(self.degree).factorials

    # structural operations --------------------------------------------------

    def diff(self, slot: int) -> "Jet":
        """Jet of the partial derivative in ``slot`` (0-based); degree drops by one."""
        if self.degree == 0:
            raise DegreeError("cannot differentiate a degree-0 jet")
        src, dst, mult = _layout(self.degree).diff_maps[slot]
        out = np.zeros(len(_layout(self.degree - 1).indices))
        out[dst] = self.coeffs[src] * mult
        return Jet(self.degree - 1, out)

    def truncate(self, degree: int) -> "Jet":
        if degree > self.degree:
            raise DegreeError(f"cannot raise jet degree {self.degree} to {degree}")
        n = len(_layout(degree).indices)
        return Jet(degree, self.coeffs[:n])

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.degree != self.degree:
                raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet.constant(float(other), self.degree)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(self.degree, self.coeffs + o.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(self.degree, self.coeffs - o.coeffs)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(self.degree, o.coeffs - self.coeffs)

    def __neg__(self):
        return Jet(self.degree, -self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet(self.degree, self.coeffs * float(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        lay = _layout(self.degree)
        out = np.bincount(
            lay.mul_out,
            weights=self.coeffs[lay.mul_a] * o.coeffs[lay.mul_b],
            minlength=len(lay.indices),
        )
        return Jet(self.degree, out)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        c0 = self.value
        if c0 == 0.0:
            raise JetDomainError("division by a jet with zero constant term")
        # 1/(c0 + h) = sum_k (-1)^k h^k / c0^(k+1)
        series = [(-1.0) ** k / c0 ** (k + 1) for k in range(self.degree + 1)]
        return _compose(self, series)

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            if other == 0:
                raise JetDomainError("division by zero")
            return Jet(self.degree, self.coeffs / float(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)):
            raise JetError("only integer powers are supported")
        return powi(self, int(k))

    def __repr__(self) -> str:
        terms = ", ".join(f"{a}: {c:.6g}" for a, c in self.to_dict().items())
        return f"Jet(degree={self.degree}, {{{terms}}})"

    def allclose(self, other: "Jet", rtol: float = 0.0, atol: float = 1e-12) -> bool:
        return self.degree == other.degree and bool(
            np.allclose(self.coeffs, other.coeffs, rtol=rtol, atol=atol)
        )


def _compose(arg: Jet, series: Sequence[float]) -> Jet:
    """Evaluate ``sum_k series[k] * (arg - arg(p))**k`` by Horner's rule."""
    h = Jet(arg.degree, np.concatenate([[0.0], arg.coeffs[1:]]))
    result = Jet.constant(series[arg.degree], arg.degree)
    for k in range(arg.degree - 1, -1, -1):
        result = result * h + series[k]
    return result


# univariate Taylor coefficients f^(k)(c)/k!, k = 0..n


def _exp_series(c: float, n: int) -> list[float]:
    e = math.exp(c)
    return [e / math.factorial(k) for k in range(n + 1)]


def _sin_series(c: float, n: int) -> list[float]:
    cyc = (math.sin(c), math.cos(c), -math.sin(c), -math.cos(c))
    return [cyc[k % 4] / math.factorial(k) for k in range(n + 1)]


def _cos_series(c: float, n: int) -> list[float]:
    cyc = (math.cos(c), -math.sin(c), -math.cos(c), math.sin(c))
    return [cyc[k % 4] / math.factorial(k) for k in range(n + 1)]


def _sinh_series(c: float, n: int) -> list[float]:
    cyc = (math.sinh(c), math.cosh(c))
    return [cyc[k % 2] / math.factorial(k) for k in range(n + 1)]


def _cosh_series(c: float, n: int) -> list[float]:
    cyc = (math.cosh(c), math.sinh(c))
    return [cyc[k % 2] / math.factorial(k) for k in range(n + 1)]


def _log_series(c: float, n: int) -> list[float]:
    if c <= 0.0:
        raise JetDomainError(f"log requires a positive constant term, got {c!r}")
    return [math.log(c)] + [(-1.0) ** (k + 1) / (k * c**k) for k in range(1, n + 1)]


def _sqrt_series(c: float, n: int) -> list[float]:
    if c <= 0.0:
        raise JetDomainError(f"sqrt requires a positive constant term, got {c!r}")
    out = []
    binom = 1.0
    for k in range(n + 1):
        out.append(math.sqrt(c) * binom / c**k)
        binom *= (0.5 - k) / (k + 1)
    return out


_SERIES = {
    "exp": _exp_series,
    "sin": _sin_series,
    "cos": _cos_series,
    "sinh": _sinh_series,
    "cosh": _cosh_series,
    "log": _log_series,
    "sqrt": _sqrt_series,
}

UNARY_FUNCTIONS = ("neg", "powi") + tuple(_SERIES)


def powi(j: Jet, k: int) -> Jet:
    if k < 0:
        return powi(j.reciprocal(), -k)
    result = Jet.constant(1.0, j.degree)
    base = j
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


# spec-level functional API ----------------------------------------------------


def jet_var(index: int, value: float, degree: int = DEFAULT_DEGREE) -> Jet:
    """Jet of coordinate function number ``index`` (1..4) with base value ``value``."""
    if index not in (1, 2, 3, 4):
        raise JetError(f"coordinate index must be 1..4, got {index!r}")
    return Jet.variable(index - 1, value, degree)


def jet_binary(op: str, lhs: Jet, rhs: Jet) -> Jet:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise JetError(f"unknown binary op {op!r}")


def jet_unary(fn: str, arg: Jet, k: int | None = None) -> Jet:
    if fn == "neg":
        return -arg
    if fn == "powi":
        if k is None:
            raise JetError("powi needs an integer exponent")
        return powi(arg, k)
    series = _SERIES.get(fn)
    if series is None:
        raise JetError(f"unknown function {fn!r}")
    return _compose(arg, series(arg.value, arg.degree))


def partial(j: Jet, alpha: Iterable[int]) -> float:
    return j.partial(alpha)
