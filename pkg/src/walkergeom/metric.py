"""Metric descriptions and their evaluation at points.

Three kinds of metric are supported:

* :class:`WalkerMetric` in canonical Walker form with lower-right block
  ``W = [[a, c], [c, b]]``, given either directly by the fields ``a, b, c`` or
  through a potential ``theta`` with ``a = -2 theta_vv, c = 2 theta_uv,
  b = -2 theta_uu``;
* :class:`ProductMetric`, the off-diagonal block form ``[[0, D], [D^T, 0]]``
  in coordinates ``(r, s, x, y)`` (stored in the ``u, v`` slots) with
  ``D_AB' = d^2 Omega / dx^A dx^B'``;
* :class:`GeneralMetric`, an arbitrary symmetric matrix of expressions, used
  only by the generic curvature oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .expr import Expr, as_expr, compile_gradient, eval_jet, substitute, to_text
from .jet import Jet

WALKER_SWAP = {"u": "v", "v": "u", "x": "y", "y": "x"}


class SingularMetricError(ValueError):
    pass


class Point4(NamedTuple):
    u: float
    v: float
    x: float
    y: float

    @classmethod
    def of(cls, p: Sequence[float]) -> "Point4":
        if len(p) != 4:
            raise ValueError(f"a point needs four coordinates, got {len(p)}")
        vals = [float(t) for t in p]
        if not all(np.isfinite(vals)):
            raise ValueError(f"point has non-finite coordinates: {vals}")
        return cls(*vals)

    def swapped(self) -> "Point4":
        """Image under the Walker interchange ``(u, v, x, y) -> (v, u, y, x)``."""
        return Point4(self.v, self.u, self.y, self.x)


@dataclass(frozen=True)
class MetricAt:
    g: np.ndarray
    g_inv: np.ndarray
    det_g: float
    jets: tuple  # 4x4 nested tuple of Jet, one per metric entry


def walker_matrix(a: float, b: float, c: float) -> np.ndarray:
    return np.array(
        [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0], [1.0, 0.0, a, c], [0.0, 1.0, c, b]]
    )


@dataclass(frozen=True)
class WalkerMetric:
    """Walker metric given by its ``W`` block, or by a potential ``theta``."""

    a: Expr | None = None
    b: Expr | None = None
    c: Expr | None = None
    theta: Expr | None = None

    @property
    def is_theta(self) -> bool:
        return self.theta is not None

    def abc_jets(self, p: Sequence[float], degree: int) -> tuple[Jet, Jet, Jet]:
        """Jets of ``a, b, c`` at ``p``, each of total degree ``degree``."""
        if self.theta is not None:
            t = eval_jet(self.theta, p, degree + 2)
            t_u, t_v = t.diff(0), t.diff(1)
            a = t_v.diff(1) * -2.0
            c = t_u.diff(1) * 2.0
            b = t_u.diff(0) * -2.0
            return a, b, c
        return tuple(eval_jet(e, p, degree) for e in (self.a, self.b, self.c))

    def abc(self, p: Sequence[float]) -> tuple[float, float, float]:
        return tuple(j.value for j in self.abc_jets(p, 0))

    @cached_property
    def _gradient_programs(self):
        return tuple(compile_gradient(e) for e in (self.a, self.b, self.c))

    def abc_first_order(self, p: Sequence[float]) -> tuple[Jet, Jet, Jet]:
        """Same as ``abc_jets(p, 1)``, through compiled evaluators when possible."""
        if self.theta is not None:
            return self.abc_jets(p, 1)
        q = tuple(float(t) for t in p)
        return tuple(Jet(1, prog(q)) for prog in self._gradient_programs)

    def entry_jets(self, p: Sequence[float], degree: int) -> tuple:
        a, b, c = self.abc_jets(p, degree)
        zero, one = Jet.constant(0.0, degree), Jet.constant(1.0, degree)
        return (
            (zero, zero, one, zero),
            (zero, zero, zero, one),
            (one, zero, a, c),
            (zero, one, c, b),
        )

    def describe(self) -> dict:
        if self.theta is not None:
            return {"kind": "theta", "theta": to_text(self.theta)}
        return {"kind": "walker", "a": to_text(self.a), "b": to_text(self.b), "c": to_text(self.c)}


@dataclass(frozen=True)
class ProductMetric:
    """ParaKähler metric from a potential ``omega(r, s, x, y)``.

    ``r`` and ``s`` occupy the ``u`` and ``v`` slots, so expressions are
    written in ``u, v, x, y`` with ``u`` read as ``r`` and ``v`` as ``s``.
    """

    omega: Expr

    def d_block_jets(self, p: Sequence[float], degree: int) -> tuple[tuple[Jet, Jet], tuple[Jet, Jet]]:
        w = eval_jet(self.omega, p, degree + 2)
        return tuple(tuple(w.diff(A).diff(B) for B in (2, 3)) for A in (0, 1))

    def d_block(self, p: Sequence[float]) -> np.ndarray:
        return np.array([[j.value for j in row] for row in self.d_block_jets(p, 0)])

    def entry_jets(self, p: Sequence[float], degree: int) -> tuple:
        d = self.d_block_jets(p, degree)
        zero = Jet.constant(0.0, degree)
        return (
            (zero, zero, d[0][0], d[0][1]),
            (zero, zero, d[1][0], d[1][1]),
            (d[0][0], d[1][0], zero, zero),
            (d[0][1], d[1][1], zero, zero),
        )

    def describe(self) -> dict:
        return {"kind": "omega", "omega": to_text(self.omega)}


@dataclass(frozen=True)
class GeneralMetric:
    """Symmetric 4x4 matrix of expressions; only the upper triangle is read."""

    entries: tuple

    def entry_jets(self, p: Sequence[float], degree: int) -> tuple:
        jets = [[None] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i, 4):
                jets[i][j] = jets[j][i] = eval_jet(self.entries[i][j], p, degree)
        return tuple(tuple(r) for r in jets)

    def describe(self) -> dict:
        return {"kind": "general", "g": [[to_text(self.entries[i][j]) for j in range(4)] for i in range(4)]}


AnyMetric = WalkerMetric | ProductMetric | GeneralMetric


def walker_from_abc(a, b, c) -> WalkerMetric:
    return WalkerMetric(a=as_expr(a), b=as_expr(b), c=as_expr(c))


def walker_from_theta(theta) -> WalkerMetric:
    return WalkerMetric(theta=as_expr(theta))


def product_from_omega(omega) -> ProductMetric:
    return ProductMetric(omega=as_expr(omega))


def general_metric(entries) -> GeneralMetric:
    if len(entries) != 4 or any(len(r) != 4 for r in entries):
        raise ValueError("a general metric needs a 4x4 matrix of expressions")
    return GeneralMetric(tuple(tuple(as_expr(e) for e in row) for row in entries))


def walker_swap(m: WalkerMetric) -> WalkerMetric:
    """Metric in the interchanged chart ``(v, u, y, x)`` with ``a <-> b``."""
    if m.theta is not None:
        return WalkerMetric(theta=substitute(m.theta, WALKER_SWAP))
    return WalkerMetric(
        a=substitute(m.b, WALKER_SWAP),
        b=substitute(m.a, WALKER_SWAP),
        c=substitute(m.c, WALKER_SWAP),
    )


def metric_at(m: AnyMetric, p: Sequence[float], degree: int = 2) -> MetricAt:
    """Components, inverse, determinant and entry jets of ``m`` at ``p``."""
    jets = m.entry_jets(Point4.of(p), degree)
    g = np.array([[j.value for j in row] for row in jets])
    if isinstance(m, WalkerMetric):
        a, b, c = g[2, 2], g[3, 3], g[2, 3]
        g_inv = np.array(
            [[-a, -c, 1.0, 0.0], [-c, -b, 0.0, 1.0], [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]
        )
        det_g = 1.0
    else:
        det_g = float(np.linalg.det(g))
        scale = max(1.0, float(np.max(np.abs(g)))) ** 4
        if not np.isfinite(det_g) or abs(det_g) <= 1e-14 * scale:
            raise SingularMetricError(f"metric is singular at {tuple(p)} (det = {det_g:.3e})")
        g_inv = np.linalg.inv(g)
        g_inv = 0.5 * (g_inv + g_inv.T)
    return MetricAt(g=g, g_inv=g_inv, det_g=det_g, jets=jets)
