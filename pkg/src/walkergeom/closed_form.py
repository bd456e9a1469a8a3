"""Closed-form curvature of a Walker metric in Walker coordinates.

Every function takes a :class:`WalkerDerivs` namespace holding ``a, b, c`` and
their partial derivatives at a point, written with numeral subscripts
(``a13`` is the second derivative of ``a`` in ``u`` and ``x``).  Coordinates
are numbered ``1=u, 2=v, 3=x, 4=y``; arrays returned here use 0-based indices.

The tables are transcribed literally.  Entries known to disagree with a direct
computation from the metric are listed in :data:`CORRECTIONS`; the default
evaluation path applies them, and :func:`literal_table_audit` in
``curvature`` reports the literal values for comparison.
"""

from __future__ import annotations

from itertools import product
from typing import Callable

import numpy as np

from .jet import Jet


class WalkerDerivs:
    """Values of ``a, b, c`` and their partials up to second order at a point."""

    __slots__ = ("_vals",)

    def __init__(self, a: Jet, b: Jet, c: Jet):
        vals = {}
        for name, j in (("a", a), ("b", b), ("c", c)):
            vals[name] = j.value
            if j.degree >= 1:
                for i in range(1, 5):
                    vals[f"{name}{i}"] = j.d(i)
            if j.degree >= 2:
                for i, k in product(range(1, 5), repeat=2):
                    vals[f"{name}{i}{k}"] = j.d(i, k)
        object.__setattr__(self, "_vals", vals)

    def __getattr__(self, name: str) -> float:
        try:
            return self._vals[name]
        except KeyError:
            raise AttributeError(f"derivative {name!r} not available") from None

    def __setattr__(self, name, value):
        raise AttributeError("WalkerDerivs is immutable")

    def as_dict(self) -> dict:
        return dict(self._vals)


# Christoffel symbols ------------------------------------------------------------


def christoffels(d) -> np.ndarray:
    """``G[i, j, k] = Gamma^i_jk``."""
    G = np.zeros((4, 4, 4))
    a, b, c = d.a, d.b, d.c

    def put(j, k, column):
        for i, val in enumerate(column):
            G[i, j - 1, k - 1] = G[i, k - 1, j - 1] = val

    put(1, 3, (d.a1 / 2, d.c1 / 2, 0.0, 0.0))
    put(1, 4, (d.c1 / 2, d.b1 / 2, 0.0, 0.0))
    put(2, 3, (d.a2 / 2, d.c2 / 2, 0.0, 0.0))
    put(2, 4, (d.c2 / 2, d.b2 / 2, 0.0, 0.0))
    put(3, 3, ((a * d.a1 + c * d.a2 + d.a3) / 2, (2 * d.c3 + c * d.a1 + b * d.a2 - d.a4) / 2, -d.a1 / 2, -d.a2 / 2))
    put(3, 4, ((d.a4 + a * d.c1 + c * d.c2) / 2, (d.b3 + c * d.c1 + b * d.c2) / 2, -d.c1 / 2, -d.c2 / 2))
    put(4, 4, ((2 * d.c4 + a * d.b1 + c * d.b2 - d.b3) / 2, (d.b4 + c * d.b1 + b * d.b2) / 2, -d.b1 / 2, -d.b2 / 2))
    return G


# mixed Riemann tensor R^i_jkl -----------------------------------------------------


def _riemann_updown_columns(d) -> dict:
    """Literal table: key (j, k, l) -> the four values R^i_jkl for i = 1..4."""
    a, b, c = d.a, d.b, d.c
    t = {}
    t[1, 1, 3] = (-d.a11 / 2, -d.c11 / 2, 0.0, 0.0)
    t[2, 1, 3] = (-d.a12 / 2, -d.c12 / 2, 0.0, 0.0)
    t[3, 1, 3] = (
        -(a * d.a11 + c * d.a12) / 2,
        -(2 * d.c13 + 2 * c * d.a11 + 2 * b * d.a12 - 2 * d.a14 + d.b1 * d.a2 - d.c1 * d.c2) / 4,
        d.a11 / 2,
        d.a12 / 2,
    )
    t[4, 1, 3] = (
        (2 * d.c13 - d.a14 - a * d.c11 - 2 * c * d.c12 + d.a2 * d.b1 - d.c1 * d.c2) / 4,
        -(c * d.c11 + b * d.c12) / 2,
        -d.c11 / 2,
        -d.c12 / 2,
    )
    t[1, 1, 4] = (-d.c11 / 2, -d.b11 / 2, 0.0, 0.0)
    t[2, 1, 4] = (-d.c12 / 2, -d.b12 / 2, 0.0, 0.0)
    t[3, 1, 4] = (
        -(a * d.c11 + c * d.c12) / 2,
        (2 * d.c14 - 2 * d.b13 - 2 * c * d.c11 - 2 * b * d.c12 + d.a1 * d.b1 - d.b1 * d.c2 + d.b2 * d.c1 - d.c1**2) / 4,
        d.c11 / 2,
        d.c12 / 2,
    )
    t[4, 1, 4] = (
        -(2 * d.c14 + 2 * a * d.b11 + 2 * c * d.b12 - 2 * d.b13 + d.a1 * d.b1 + d.b2 * d.c1 - d.b1 * d.c2 - d.c1**2) / 4,
        -(c * d.b11 + b * d.b12) / 2,
        d.b11 / 2,
        d.b12 / 2,
    )
    t[1, 2, 3] = (-d.a12 / 2, -d.c12 / 2, 0.0, 0.0)
    t[2, 2, 3] = (-d.a22 / 2, -d.c22 / 2, 0.0, 0.0)
    t[3, 2, 3] = (
        -(a * d.a12 + c * d.a22) / 2,
        -(2 * d.c23 + 2 * c * d.a12 + 2 * b * d.a22 - 2 * d.a24 + d.a1 * d.c2 + d.a2 * d.b2 - d.a2 * d.c1 - d.c2**2) / 4,
        d.a12 / 2,
        d.a22 / 2,
    )
    t[4, 2, 3] = (
        (2 * d.c23 - 2 * d.a24 - 2 * a * d.c11 - 2 * c * d.c22 - d.a2 * d.c1 + d.a1 * d.c2 + d.a2 * d.b2 - d.c2**2) / 4,
        -(c * d.c12 + b * d.c22) / 2,
        d.c12 / 2,
        d.c22 / 2,
    )
    t[1, 2, 4] = (-d.c12 / 2, -d.b12 / 2, 0.0, 0.0)
    t[2, 2, 4] = (-d.c22 / 2, -d.b22 / 2, 0.0, 0.0)
    t[3, 2, 4] = (
        -(a * d.c12 + c * d.c22) / 2,
        (2 * d.c24 - 2 * d.b32 - 2 * c * d.c12 - 2 * b * d.c22 + d.a2 * d.b1 - d.c1 * d.c2) / 4,
        d.c12 / 2,
        d.c22 / 2,
    )
    t[4, 2, 4] = (
        -(2 * d.c24 + 2 * a * d.b12 + 2 * c * d.b22 - 2 * d.b23 + d.a2 * d.b1 - d.c1 * d.c2) / 4,
        -(c * d.b12 + b * d.b22) / 2,
        d.b12 / 2,
        d.b22 / 2,
    )
    t[1, 3, 4] = (
        (2 * d.a14 - 2 * d.c13 + d.c1 * d.c2 - d.a2 * d.b1) / 4,
        (2 * d.c14 - 2 * d.b13 + d.a1 * d.b1 + d.b2 * d.c1 - d.b1 * d.c2 - d.c1**2) / 4,
        0.0,
        0.0,
    )
    t[2, 3, 4] = (
        (2 * d.a24 - 2 * d.c23 + d.a2 * d.c1 - d.a1 * d.c2 - d.b2 * d.c2 + d.c2**2) / 4,
        (2 * d.c24 - 2 * d.b23 + d.a2 * d.b1 - d.c1 * d.c2) / 4,
        0.0,
        0.0,
    )
    t[3, 3, 4] = (
        (
            2 * a * d.a14 + 2 * c * d.a24 - 2 * a * d.c13 - 2 * c * d.c23 + c * d.a2 * d.c1
            + a * d.c1 * d.c2 - c * d.a1 * d.c2 - a * d.a2 * d.b1 - c * d.a2 * d.b2 + c * d.c2**2
        ) / 4,
        (
            2 * d.c34 + d.a1 * d.c4 - d.b3 * d.c2 + d.b2 * d.c3 - d.a4 * d.c1 + c * d.a14
            + b * d.a24 - c * d.c13 - b * d.c23 - d.a44 - d.b33
        ) / 2
        + (
            d.a2 * d.b4 + d.a3 * d.b1 - d.a4 * d.b2 - d.a1 * d.b3 + a * d.a1 * d.b1 + c * d.a1 * d.b2
            - c * d.c1 * d.c2 + b * d.a2 * d.c1 - b * d.a1 * d.c2 - a * d.c1**2
        ) / 4,
        -(2 * d.a14 - 2 * d.c13 - d.a2 * d.b1 + d.c1 * d.c2) / 4,
        -(2 * d.a24 - 2 * d.c23 - d.a1 * d.c2 + d.a2 * d.c1 - d.a2 * d.b2 + d.c2**2) / 4,
    )
    t[4, 3, 4] = (
        -(
            2 * d.c34 + d.a1 * d.c4 - d.a4 * d.c1 + d.b2 * d.c3 - d.b3 * d.c2 - a * d.c14
            - c * d.c24 + a * d.b13 + c * d.b23 - d.a44 - d.b33
        ) / 2
        - (
            d.a3 * d.b1 - d.a1 * d.b3 + d.a2 * d.b4 - d.a4 * d.b2 - c * d.c1 * d.c2 + a * d.b1 * d.c2
            + c * d.a1 * d.b2 + b * d.a2 * d.b2 - a * d.c1 * d.b2 - b * d.c2**2
        ) / 4,
        -(
            2 * b * d.b23 + 2 * c * d.b13 - 2 * b * d.c24 - 2 * c * d.c14 + c * d.b1 * d.c2
            + b * d.c1 * d.c2 - c * d.b2 * d.c1 - b * d.b1 * d.a2 - c * d.b1 * d.a1 + c * d.c1**2
        ) / 4,
        (2 * d.b13 - 2 * d.c14 + d.b1 * d.c2 - d.b2 * d.c1 - d.a1 * d.b1 + d.c1**2) / 4,
        (2 * d.b23 - 2 * d.c24 - d.a2 * d.b1 + d.c1 * d.c2) / 4,
    )
    return t


def _fill_updown(columns: dict) -> np.ndarray:
    R = np.zeros((4, 4, 4, 4))
    for (j, k, l), col in columns.items():
        for i, val in enumerate(col):
            R[i, j - 1, k - 1, l - 1] = val
            R[i, j - 1, l - 1, k - 1] = -val
    return R


# fully covariant Riemann tensor R_ijkl ---------------------------------------------


def _riemann_down_entries(d) -> dict:
    """Literal table: key (i, j, k, l) with i<j, k<l, (i,j) <= (k,l)."""
    a, b, c = d.a, d.b, d.c
    t = {}
    t[1, 3, 1, 3] = d.a11 / 2
    t[1, 3, 1, 4] = d.c11 / 2
    t[1, 3, 2, 3] = d.a12 / 2
    t[1, 3, 2, 4] = d.c12 / 2
    t[1, 3, 3, 4] = -(2 * d.a14 - 2 * d.c13 - d.a2 * d.b1 + d.c1 * d.c2) / 4
    t[1, 4, 1, 4] = d.b11 / 2
    t[1, 4, 2, 3] = d.c12 / 2
    t[1, 4, 2, 4] = d.b12 / 2
    t[1, 4, 3, 4] = (2 * d.b13 - 2 * d.c14 - d.a1 * d.b1 + d.b1 * d.c2 - d.b2 * d.c1 + d.c1**2) / 4
    t[2, 3, 2, 3] = d.a22 / 2
    t[2, 3, 2, 4] = d.c22 / 2
    t[2, 3, 3, 4] = -(2 * d.a24 - 2 * d.c23 - d.a2 * d.b2 + d.a2 * d.c1 - d.a1 * d.c2 + d.c2**2) / 4
    t[2, 4, 2, 4] = d.b22 / 2
    t[2, 4, 3, 4] = (2 * d.b23 - 2 * d.c24 - d.a2 * d.b1 + d.c1 * d.c2) / 4
    t[3, 4, 3, 4] = (
        -(2 * d.c34 + d.a1 * d.c4 - d.a4 * d.c1 + d.b2 * d.c3 - d.b3 * d.c2 - c * d.c1 * d.c2 - d.a44 - d.b33) / 2
        - (
            d.a3 * d.b1 - d.a1 * d.b3 + d.a2 * d.b4 - d.a4 * d.b2 + a * d.a1 * d.b1 + b * d.a2 * d.b2
            + c * d.a1 * d.b2 + c * d.a2 * d.b1 - a * d.c1**2 - b * d.c2**2
        ) / 4
    )
    return t


def _fill_down(entries: dict) -> np.ndarray:
    R = np.zeros((4, 4, 4, 4))
    for (i, j, k, l), val in entries.items():
        i, j, k, l = i - 1, j - 1, k - 1, l - 1
        for (p, q, r, s) in ((i, j, k, l), (k, l, i, j)):
            R[p, q, r, s] = val
            R[q, p, r, s] = -val
            R[p, q, s, r] = -val
            R[q, p, s, r] = val
    return R


# Ricci, scalar, Einstein ------------------------------------------------------------


def ricci(d) -> np.ndarray:
    a, b, c = d.a, d.b, d.c
    R = np.zeros((4, 4))

    def put(i, j, val):
        R[i - 1, j - 1] = R[j - 1, i - 1] = val

    put(1, 3, (d.a11 + d.c12) / 2)
    put(1, 4, (d.b12 + d.c11) / 2)
    put(2, 3, (d.a12 + d.c22) / 2)
    put(2, 4, (d.b22 + d.c12) / 2)
    put(3, 3, (2 * c * d.a12 - 2 * d.a24 + 2 * d.c23 + a * d.a11 + b * d.a22 + d.a2 * d.b2 + d.a1 * d.c2 - d.a2 * d.c1 - d.c2**2) / 2)
    put(3, 4, (2 * c * d.c12 + a * d.c11 + b * d.c22 + d.a14 + d.b23 - d.c13 - d.c24 - d.a2 * d.b1 + d.c1 * d.c2) / 2)
    put(4, 4, (2 * d.c14 - 2 * d.b13 + 2 * c * d.b12 + a * d.b11 + b * d.b22 + d.a1 * d.b1 + d.b2 * d.c1 - d.b1 * d.c2 - d.c1**2) / 2)
    return R


def scalar(d) -> float:
    return d.a11 + d.b22 + 2 * d.c12


def einstein_scalars(d) -> dict:
    """The named entries theta, mu, nu, zeta, eta, Xi, Upsilon of the Einstein endomorphism."""
    a, b, c = d.a, d.b, d.c
    return {
        "theta": (d.a11 - d.b22) / 4,
        "mu": (d.b12 + d.c11) / 2,
        "nu": (d.a12 + d.c22) / 2,
        "zeta": (2 * d.c23 - 2 * d.a24 + b * d.a22 + c * d.a12 - a * d.c12 - c * d.c22 + d.a2 * d.b2 + d.a1 * d.c2 - d.a2 * d.c1 - d.c2**2) / 2,
        "eta": (a * d.c11 + c * d.c12 - c * d.a11 - b * d.a12 + d.a14 + d.b23 - d.c13 - d.c24 - d.a2 * d.b1 + d.c1 * d.c2) / 2,
        "Xi": (b * d.c22 + c * d.c12 - a * d.b12 - c * d.b22 + d.a14 + d.b23 - d.c13 - d.c24 - d.a2 * d.b1 + d.c1 * d.c2) / 2,
        "Upsilon": (2 * d.c14 - 2 * d.b13 + a * d.b11 + c * d.b12 - c * d.c11 - b * d.c12 + d.a1 * d.b1 + d.b2 * d.c1 - d.b1 * d.c2 - d.c1**2) / 2,
    }


def ricci_endomorphism(d) -> np.ndarray:
    """``M[i, j] = R^i_j``."""
    e = einstein_scalars(d)
    M = np.zeros((4, 4))
    M[:, 0] = ((d.a11 + d.c12) / 2, (d.b12 + d.c11) / 2, 0.0, 0.0)
    M[:, 1] = ((d.a12 + d.c22) / 2, (d.b22 + d.c12) / 2, 0.0, 0.0)
    M[:, 2] = (e["zeta"], e["eta"], (d.a11 + d.c12) / 2, (d.a12 + d.c22) / 2)
    M[:, 3] = (e["Xi"], e["Upsilon"], (d.b12 + d.c11) / 2, (d.b22 + d.c12) / 2)
    return M


def einstein_endomorphism(d) -> np.ndarray:
    """``E[i, j] = E^i_j``, assembled from the named entries."""
    e = einstein_scalars(d)
    th, mu, nu = e["theta"], e["mu"], e["nu"]
    E = np.zeros((4, 4))
    E[:, 0] = (th, mu, 0.0, 0.0)
    E[:, 1] = (nu, -th, 0.0, 0.0)
    E[:, 2] = (e["zeta"], e["eta"], th, nu)
    E[:, 3] = (e["Xi"], e["Upsilon"], mu, -th)
    return E


# Weyl tensor ------------------------------------------------------------------------


def _weyl_entries(d) -> dict:
    a, b, c = d.a, d.b, d.c
    S = scalar(d)
    t = {}
    t[1, 2, 3, 4] = S / 12
    t[1, 3, 1, 3] = (d.a11 - d.c12 + d.b22) / 6
    t[1, 3, 1, 4] = (d.c11 - d.b12) / 4
    t[1, 3, 2, 3] = (d.a12 - d.c22) / 4
    t[1, 3, 2, 4] = d.c12 / 2
    t[1, 3, 3, 4] = -(
        3 * d.a14 - 3 * d.c13 - 5 * c * d.c12 - 3 * b * d.c22 + 3 * d.c24 - 3 * d.b23
        - c * d.a11 + 3 * a * d.b12 + 2 * c * d.b22
    ) / 12
    t[1, 4, 1, 4] = d.b11 / 2
    t[1, 4, 2, 3] = -(d.a11 - 4 * d.c12 + d.b22) / 12
    t[1, 4, 2, 4] = (d.b12 - d.c11) / 4
    t[1, 4, 3, 4] = (b * d.a11 + 3 * a * d.b11 + 3 * c * d.b12 + b * d.b22 - b * d.c12 - 3 * c * d.c11) / 12
    t[2, 3, 2, 3] = d.a22 / 2
    t[2, 3, 2, 4] = -(d.a12 - d.c22) / 4
    t[2, 3, 3, 4] = -(a * d.a11 + 3 * c * d.a12 + 3 * b * d.a22 - 3 * c * d.c22 - a * d.c12 + a * d.b22) / 12
    t[2, 4, 2, 4] = (d.a11 - d.c12 + d.b22) / 6
    t[2, 4, 3, 4] = (
        2 * c * d.a11 + 3 * b * d.a12 - 3 * d.a14 + 3 * d.b23 - c * d.b22 - 3 * d.c24
        - 3 * a * d.c11 - 5 * c * d.c12 + 3 * d.c13
    ) / 12
    t[3, 4, 3, 4] = (
        3 * b * d.a1 * d.c2 + 3 * c * d.b1 * d.a2 + 6 * b * c * d.a12 + b * a * d.a11 - 3 * c * d.a1 * d.b2
        - 4 * a * b * d.c12 - 6 * c * a * d.c11 - 3 * b * d.c1 * d.a2 + a * b * d.b22
        + 6 * a * c * d.b12 - 6 * c * b * d.c22 + 3 * a * d.c1 * d.b2 + 3 * a**2 * d.b11 + 6 * d.c1 * d.a4
        - 3 * a * d.b1 * d.c2 - 6 * d.a1 * d.c4 + 3 * d.a1 * d.b3 + 6 * d.c2 * d.b3
        - 3 * d.a2 * d.b4 - 3 * d.b1 * d.a3 - 6 * d.b2 * d.c3 + 3 * d.b2 * d.a4 - 12 * d.c34 + 6 * d.a44
        + 6 * d.b33 + 6 * a * d.c14 - 6 * a * d.b13 - 8 * c**2 * d.c12
        - 6 * c * d.a14 + 6 * c * d.c13 + 6 * c * d.c24 - 6 * c * d.b23 + 3 * b**2 * d.a22 - 6 * b * d.a24
        + 6 * b * d.c23 + 2 * c**2 * d.a11 + 2 * c**2 * d.b22
    ) / 12
    return t


# Weyl blocks --------------------------------------------------------------------------


def block_scalars(d) -> dict:
    return {
        "P": d.a11 + d.b22 - 4 * d.c12,
        "Q": d.a22 + d.b11,
        "T": d.a12 - d.c22,
        "X": d.b12 - d.c11,
        "Y": d.a22 - d.b11,
    }


def quantity_A_literal(d) -> float:
    a, b, c = d.a, d.b, d.c
    return (
        6 * a * d.b13 - 6 * b * d.c23 - 12 * c * d.c13 - 12 * d.b33 + 12 * d.c34
        - 6 * a * d.c14 + 6 * b * d.a24 + 12 * c * d.a14 + 12 * d.c34 - 12 * d.a44
        - 3 * a * (-b * d.c12 - 2 * d.c2 * d.b1 + a * d.b11)
        - 3 * b * (b * d.a22 - 2 * d.a2 * d.c1 - a * d.c12)
        - 6 * c * (b * d.a12 + d.a1 * d.b2 + d.a2 * d.b1 - a * d.c11)
        + 6 * (-b * d.c23 - d.c2 * d.b3 + d.a3 * d.b1 + a * d.b13)
        + 6 * (b * d.a24 + d.a2 * d.b4 - d.a4 * d.c1 - a * d.c14)
        + (
            -6 * a * d.c1 * d.b2 + 6 * a * c * d.c11 - 6 * b * d.c2 * d.a1 - 6 * b * c * d.a12
            + 12 * c * d.a1 * d.b2 - 12 * c**2 * d.a11 + 12 * d.b2 * d.c3 - 12 * c * d.c13
            + 12 * d.a1 * d.c4 + 12 * c * d.a14
        )
        - 6 * d.a4 * d.c1 - 6 * d.a4 * d.b2 - 6 * d.a1 * d.b3 - 6 * d.b3 * d.c2
        - d.a11 - d.b22 - 2 * d.c12
    )


def quantity_B(d) -> float:
    a, b, c = d.a, d.b, d.c
    return (
        2 * (d.a14 - d.b23 - d.c13 + d.c24)
        - 2 * c * d.a11 - b * d.a12 + a * d.b12 + a * d.c11 - b * d.c22 - 2 * c * d.c12
    )


def weyl_plus_matrix(S: float, A: float, B: float) -> np.ndarray:
    return -np.array(
        [
            [A, 3 * B, A + S],
            [-3 * B, 2 * S, -3 * B],
            [-(A + S), -3 * B, -(A + 2 * S)],
        ]
    ) / 12.0


def weyl_minus_matrix(P: float, Q: float, T: float, X: float, Y: float) -> np.ndarray:
    return -np.array(
        [
            [-(P + 3 * Q), 3 * (T + X), 3 * Y],
            [-3 * (T + X), 2 * P, 3 * (T - X)],
            [-3 * Y, 3 * (T - X), -(P - 3 * Q)],
        ]
    ) / 12.0


def z_matrix(c: float, e: dict) -> np.ndarray:
    th, mu, nu = e["theta"], e["mu"], e["nu"]
    ze, et, Xi, Up = e["zeta"], e["eta"], e["Xi"], e["Upsilon"]
    row0 = np.array([Up + ze + c * (nu - mu), et + Xi - 2 * th * c, Up - ze - c * (nu + mu)])
    return -0.5 * np.array([row0, [mu - nu, 2 * th, mu + nu], -row0])


# corrections and public entry points ----------------------------------------------------

# Each correction replaces one literal table entry by an expression that agrees
# with a direct computation from the metric.  Keys name the table and entry.


def _fix_r413(d, cols):
    j, k, l = 4, 1, 3
    c1, c2, c3, c4 = cols[j, k, l]
    a, c = d.a, d.c
    first = (2 * d.c13 - 2 * d.a14 - 2 * a * d.c11 - 2 * c * d.c12 + d.a2 * d.b1 - d.c1 * d.c2) / 4
    cols[j, k, l] = (first, c2, d.c11 / 2, d.c12 / 2)


def _fix_r423(d, cols):
    a, c = d.a, d.c
    first = (
        2 * d.c23 - 2 * d.a24 - 2 * a * d.c12 - 2 * c * d.c22 - d.a2 * d.c1 + d.a1 * d.c2 + d.a2 * d.b2 - d.c2**2
    ) / 4
    cols[4, 2, 3] = (first,) + tuple(cols[4, 2, 3][1:])


def _fix_r234(d, cols):
    first = (2 * d.a24 - 2 * d.c23 + d.a2 * d.c1 - d.a1 * d.c2 - d.a2 * d.b2 + d.c2**2) / 4
    cols[2, 3, 4] = (first,) + tuple(cols[2, 3, 4][1:])


CORRECTIONS: dict[str, Callable] = {
    # u-component: coefficients of a_14 and a c_11 must be doubled;
    # x- and y-components have the opposite sign
    "R^i_413": _fix_r413,
    # u-component: a c_11 should read a c_12
    "R^1_423": _fix_r423,
    # u-component: b_2 c_2 should read a_2 b_2
    "R^1_234": _fix_r234,
}


def riemann_updown(d, literal: bool = False) -> np.ndarray:
    cols = _riemann_updown_columns(d)
    if not literal:
        for key, fix in CORRECTIONS.items():
            if key.startswith("R^"):
                fix(d, cols)
    return _fill_updown(cols)


def riemann_down(d, literal: bool = False) -> np.ndarray:
    ents = _riemann_down_entries(d)
    if not literal:
        for key, fix in CORRECTIONS.items():
            if key.startswith("R_"):
                fix(d, ents)
    return _fill_down(ents)


def weyl(d, literal: bool = False) -> np.ndarray:
    ents = _weyl_entries(d)
    if not literal:
        for key, fix in CORRECTIONS.items():
            if key.startswith("C_"):
                fix(d, ents)
    return _fill_down(ents)


def quantity_A(d, literal: bool = False) -> float:
    if not literal and "A" in CORRECTIONS:
        return CORRECTIONS["A"](d)
    return quantity_A_literal(d)
