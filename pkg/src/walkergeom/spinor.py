"""Two-component spinor description of Walker curvature.

Spinors are handled through dyad components only.  The unprimed frame is
``alpha = (1, 0)``, ``beta = (0, 1)`` and the primed frame ``pi = (1, 0)``,
``xi = (0, 1)`` (upper components).  The symplectic form has
``eps_01 = eps^01 = 1``; indices are lowered as ``v_B = v^A eps_AB`` and
raised as ``v^A = eps^AB v_B``, so ``pi_A' = (0, 1)`` and ``xi_A' = (-1, 0)``.

The null tetrad is ``e_00' = l``, ``e_01' = m``, ``e_10' = m~``, ``e_11' = n``,
and ``g(e_AA', e_BB') = eps_AB eps_A'B'``.  Lower-index dyad components of a
tensor are its values on these vectors, so ``Psi_k`` is the component of the
ASD Weyl spinor with ``k`` indices equal to 1, and likewise for ``Psi~_k``;
``Phi_ij`` has ``i = A + B`` and ``j = A' + B'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .curvature import (
    CurvatureSummary,
    RiemannAt,
    SQRT2,
    bivector_basis,
    curvature_summary,
    generic_curvature,
    walker_frame,
    wedge,
    weyl_blocks_generic,
)
from .metric import Point4, WalkerMetric

EPS = np.array([[0.0, 1.0], [-1.0, 0.0]])  # eps_AB, and numerically also eps^AB

# flattened dyad index 2*A + A' -> tetrad vector name
TETRAD_ORDER = ("l", "m", "mt", "n")


# null tetrad ------------------------------------------------------------------------


@dataclass(frozen=True)
class NullTetrad:
    l: np.ndarray
    n: np.ndarray
    m: np.ndarray
    mt: np.ndarray
    l_low: np.ndarray
    n_low: np.ndarray
    m_low: np.ndarray
    mt_low: np.ndarray

    def frame(self) -> np.ndarray:
        """Columns ``e_00', e_01', e_10', e_11'``."""
        return np.column_stack([self.l, self.m, self.mt, self.n])

    def coframe(self) -> np.ndarray:
        """Rows are the covectors ``l_a, m_a, m~_a, n_a``."""
        return np.vstack([self.l_low, self.m_low, self.mt_low, self.n_low])


def walker_tetrad(m: WalkerMetric, p: Sequence[float]) -> NullTetrad:
    a, b, c = m.abc(Point4.of(p))
    return tetrad_from_abc(a, b, c)


def tetrad_from_abc(a: float, b: float, c: float) -> NullTetrad:
    return NullTetrad(
        l=np.array([1.0, 0.0, 0.0, 0.0]),
        n=np.array([-a / 2, -c / 2, 1.0, 0.0]),
        m=np.array([c / 2, b / 2, 0.0, -1.0]),
        mt=np.array([0.0, 1.0, 0.0, 0.0]),
        l_low=np.array([0.0, 0.0, 1.0, 0.0]),
        n_low=np.array([1.0, 0.0, a / 2, c / 2]),
        m_low=-np.array([0.0, 1.0, c / 2, b / 2]),
        mt_low=np.array([0.0, 0.0, 0.0, 1.0]),
    )


def tetrad_pairings(t: NullTetrad, g: np.ndarray) -> np.ndarray:
    """Gram matrix ``g(e_p, e_q)`` of the tetrad in the order l, m, m~, n."""
    E = t.frame()
    return E.T @ g @ E


def expected_pairings() -> np.ndarray:
    """``eps_AB eps_A'B'`` laid out on flattened dyad indices."""
    return np.einsum("ab,cd->acbd", EPS, EPS).reshape(4, 4)


def vector_to_spinor(v: Sequence[float]) -> np.ndarray:
    """Matrix realisation of a vector of R^{2,2} with metric diag(1, 1, -1, -1).

    ``2 det`` of the result equals the squared norm, so null vectors map to
    singular matrices.
    """
    v1, v2, v3, v4 = v
    return np.array([[v1 + v3, v4 - v2], [v4 + v2, v1 - v3]]) / SQRT2


# bivector bases ---------------------------------------------------------------------


def _bivector(d12, d13, d14, d23, d24, d34) -> np.ndarray:
    F = np.zeros((4, 4))
    for (i, j), val in zip(((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)), (d12, d13, d14, d23, d24, d34)):
        F[i, j], F[j, i] = val, -val
    return F


def j_matrix(c: float) -> np.ndarray:
    """Columns: the SD basis adapted to the tetrad in terms of the chart SD basis."""
    return np.array(
        [[c * c + 5, 3 - c * c, -4 * c], [-2 * c, 2 * c, 4.0], [-(3 + c * c), c * c - 5, 4 * c]]
    ) / (4 * SQRT2)


def j_inverse(c: float) -> np.ndarray:
    return SQRT2 / 4 * np.array(
        [[c * c + 5, 2 * c, c * c + 3], [c * c - 3, 2 * c, c * c - 5], [4 * c, 4.0, 4 * c]]
    )


K_MATRIX = np.array([[-1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]]) / SQRT2
K_INVERSE = SQRT2 * np.array([[-1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])


@dataclass(frozen=True)
class BivectorBases:
    """SD/ASD bases as 4x4 antisymmetric arrays of contravariant components.

    ``s_plus``/``s_minus`` are built on the chart frame with unit-norm
    normalisation; ``s_plus_chart``/``s_minus_chart`` are the same bivectors
    multiplied by sqrt(2), which is the scaling ``J`` and ``K`` refer to.
    """

    s_plus: list
    s_minus: list
    s_plus_chart: list
    s_minus_chart: list
    S_plus: list
    S_minus: list
    Z_plus: list
    Z_minus: list
    J: np.ndarray
    J_inv: np.ndarray
    K: np.ndarray
    K_inv: np.ndarray


def chart_sd_bivectors(a: float, b: float, c: float) -> tuple[list, list]:
    """Explicit coordinate expansions of the chart-frame SD and ASD bases (scaled by sqrt 2)."""
    plus = [
        _bivector((1 + a * b) / 2, 2 * c, -a, b, 0.0, 2.0),
        _bivector(c, 1.0, 0.0, 0.0, 1.0, 0.0),
        _bivector((a * b - 1) / 2, 2 * c, -a, b, 0.0, 2.0),
    ]
    minus = [
        _bivector(-(a + b) / 2, 0.0, 1.0, -1.0, 0.0, 0.0),
        _bivector(-c, 1.0, 0.0, 0.0, -1.0, 0.0),
        _bivector((a - b) / 2, 0.0, 1.0, 1.0, 0.0, 0.0),
    ]
    return plus, minus


def bivector_bases(m: WalkerMetric, p: Sequence[float]) -> BivectorBases:
    a, b, c = m.abc(Point4.of(p))
    return bivector_bases_from_abc(a, b, c)


def bivector_bases_from_abc(a: float, b: float, c: float) -> BivectorBases:
    t = tetrad_from_abc(a, b, c)
    l, n, mm, mt = t.l, t.n, t.m, t.mt
    S_plus = [
        (wedge(l, mt) - wedge(n, mm)) / SQRT2,
        (wedge(n, l) + wedge(mt, mm)) / SQRT2,
        (wedge(l, mt) + wedge(n, mm)) / SQRT2,
    ]
    S_minus = [
        (wedge(n, mt) - wedge(l, mm)) / SQRT2,
        (wedge(n, l) - wedge(mt, mm)) / SQRT2,
        (wedge(n, mt) + wedge(l, mm)) / SQRT2,
    ]
    sp, sm = bivector_basis(walker_frame(a, b, c))
    return BivectorBases(
        s_plus=sp,
        s_minus=sm,
        s_plus_chart=[SQRT2 * s for s in sp],
        s_minus_chart=[SQRT2 * s for s in sm],
        S_plus=S_plus,
        S_minus=S_minus,
        Z_plus=[S_plus[0], S_plus[2], -S_plus[1]],
        Z_minus=[-S_minus[0], S_minus[2], -S_minus[1]],
        J=j_matrix(c),
        J_inv=j_inverse(c),
        K=K_MATRIX.copy(),
        K_inv=K_INVERSE.copy(),
    )


# curvature spinors -----------------------------------------------------------------


@dataclass(frozen=True)
class SpinorCurvature:
    psi: np.ndarray  # ASD Weyl, Psi_0..Psi_4
    psi_t: np.ndarray  # SD Weyl, Psi~_0..Psi~_4
    phi: np.ndarray  # (3, 3), phi[i, j] = Phi_ij
    lam: float

    @property
    def scale(self) -> float:
        return max(
            float(np.max(np.abs(self.psi))),
            float(np.max(np.abs(self.psi_t))),
            float(np.max(np.abs(self.phi))),
            abs(self.lam),
        )

    def max_abs_diff(self, other: "SpinorCurvature") -> float:
        return max(
            float(np.max(np.abs(self.psi - other.psi))),
            float(np.max(np.abs(self.psi_t - other.psi_t))),
            float(np.max(np.abs(self.phi - other.phi))),
            abs(self.lam - other.lam),
        )

    def as_dict(self) -> dict:
        d = {f"Psi{k}": float(v) for k, v in enumerate(self.psi)}
        d.update({f"Psit{k}": float(v) for k, v in enumerate(self.psi_t)})
        d.update({f"Phi{i}{j}": float(self.phi[i, j]) for i in range(3) for j in range(3)})
        d["Lambda"] = float(self.lam)
        return d


def spinor_curvature(m: WalkerMetric, p: Sequence[float]) -> SpinorCurvature:
    return spinor_curvature_from_summary(curvature_summary(m, p))


def spinor_curvature_from_summary(s: CurvatureSummary) -> SpinorCurvature:
    """Dyad components from the closed-form curvature scalars."""
    d = s.derivs
    a, b, c = s.abc
    S, A, B = s.S, s.A, s.B
    e = s.einstein_scalars
    psi_t = np.array([0.0, 0.0, S / 12, -(B + S * c) / 8, (6 * B * c - A + S * (3 * c * c - 1)) / 24])
    psi = np.array(
        [
            d.b11 / 2,
            (d.b12 - d.c11) / 4,
            (d.a11 + d.b22 - 4 * d.c12) / 12,
            (d.a12 - d.c22) / 4,
            d.a22 / 2,
        ]
    )
    th, mu, nu, zeta, eta, ups = e["theta"], e["mu"], e["nu"], e["zeta"], e["eta"], e["Upsilon"]
    phi = np.array(
        [
            [0.0, -mu / 2, ups / 2],
            [0.0, th / 2, -(2 * eta + 2 * c * th + b * nu - a * mu) / 4],
            [0.0, nu / 2, zeta / 2],
        ]
    )
    return SpinorCurvature(psi=psi, psi_t=psi_t, phi=phi, lam=-S / 24)


def symmetric_spinor(components: Sequence[float]) -> np.ndarray:
    """Totally symmetric rank-4 spinor whose component with k ones is ``components[k]``."""
    out = np.zeros((2, 2, 2, 2))
    for idx in product((0, 1), repeat=4):
        out[idx] = components[sum(idx)]
    return out


def ricci_spinor(phi: np.ndarray) -> np.ndarray:
    """``Phi_ABA'B'`` as a (2, 2, 2, 2) array from the 3x3 table ``Phi_ij``."""
    out = np.zeros((2, 2, 2, 2))
    for A, B, Ap, Bp in product((0, 1), repeat=4):
        out[A, B, Ap, Bp] = phi[A + B, Ap + Bp]
    return out


DELTA = [
    np.eye(2) / SQRT2,
    np.diag([1.0, -1.0]) / SQRT2,
    np.array([[0.0, 1.0], [1.0, 0.0]]) / SQRT2,
]


def weyl_operator_matrix(components: Sequence[float]) -> np.ndarray:
    """Matrix of ``Psi^AB_CD`` acting on symmetric 2-spinors in the basis ``DELTA``.

    Columns are images; the same layout serves primed and unprimed spinors.
    """
    psi = symmetric_spinor(components)
    up = np.einsum("ae,bf,efcd->abcd", EPS, EPS, psi)
    basis = np.array([d.ravel() for d in DELTA]).T
    cols = []
    for D in DELTA:
        img = np.einsum("abcd,cd->ab", up, D)
        cols.append(np.linalg.lstsq(basis, img.ravel(), rcond=None)[0])
    return np.array(cols).T


def _components_from_operator(C: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares Weyl components reproducing ``C``; also the fit residual."""
    M = np.array([weyl_operator_matrix(np.eye(5)[k]).ravel() for k in range(5)]).T
    sol, *_ = np.linalg.lstsq(M, C.ravel(), rcond=None)
    return sol, float(np.max(np.abs(M @ sol - C.ravel())))


@dataclass(frozen=True)
class SpinorOracle:
    C_plus: np.ndarray  # J^-1 (+W) J
    C_minus: np.ndarray  # K^-1 (-W) K
    C_plus_display: np.ndarray  # the closed form of C_plus in S, A, B, c
    components: SpinorCurvature
    fit_residual: float


def c_plus_display(S: float, A: float, B: float, c: float) -> np.ndarray:
    u = 6 * (B + S * c)
    return -np.array(
        [
            [A - 6 * B * c - 3 * S * (c * c + 1), -A + 6 * B * c + S * (3 * c * c - 1), u],
            [A - 6 * B * c - S * (3 * c * c - 1), -A + 6 * B * c + S * (3 * c * c - 5), u],
            [-u, u, 8 * S],
        ]
    ) / 48


def spinor_curvature_oracle(m: WalkerMetric, p: Sequence[float], source: str = "closed_form") -> SpinorOracle:
    """Dyad components from the Weyl blocks by change of basis, and Phi from the tetrad.

    ``source="closed_form"`` conjugates the closed-form blocks; ``"generic"``
    projects the coordinate-oracle curvature onto the chart bivector bases
    instead, so no closed-form table is involved.
    """
    s = curvature_summary(m, p)
    a, b, c = s.abc
    if source == "closed_form":
        Wp, Wm, S, E_mixed, A, B = s.W_plus, s.W_minus, s.S, s.einstein, s.A, s.B
    elif source == "generic":
        gc = generic_curvature(m, p)
        wb = weyl_blocks_generic(m, p, frame="walker")
        Wp, Wm, S, E_mixed = wb.W_plus, wb.W_minus, gc.S, gc.einstein
        A, B = -12.0 * Wp[0, 0], -4.0 * Wp[0, 1]
    else:
        raise ValueError(f"unknown source {source!r}")
    Cp = j_inverse(c) @ Wp @ j_matrix(c)
    Cm = K_INVERSE @ Wm @ K_MATRIX
    psi_t, r1 = _components_from_operator(Cp)
    psi, r2 = _components_from_operator(Cm)
    E = tetrad_from_abc(a, b, c).frame()
    g = np.array([[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0], [1.0, 0.0, a, c], [0.0, 1.0, c, b]])
    Ef = E.T @ (g @ E_mixed) @ E  # E_ab on the tetrad, flattened dyad order
    phi = np.zeros((3, 3))
    for A_, B_, Ap, Bp in product((0, 1), repeat=4):
        phi[A_ + B_, Ap + Bp] = 0.5 * Ef[2 * A_ + Ap, 2 * B_ + Bp]
    comps = SpinorCurvature(psi=psi, psi_t=psi_t, phi=phi, lam=-S / 24)
    return SpinorOracle(
        C_plus=Cp,
        C_minus=Cm,
        C_plus_display=c_plus_display(S, A, B, c),
        components=comps,
        fit_residual=max(r1, r2),
    )


# reconstruction --------------------------------------------------------------------


def riemann_frame_components(sc: SpinorCurvature) -> np.ndarray:
    """``R_abcd`` on the tetrad, indexed by flattened dyad pairs ``2A + A'``."""
    e = EPS
    pt = symmetric_spinor(sc.psi_t)
    ps = symmetric_spinor(sc.psi)
    ph = ricci_spinor(sc.phi)
    R = (
        np.einsum("AB,CD,abcd->AaBbCcDd", e, e, pt)
        + np.einsum("ABCD,ab,cd->AaBbCcDd", ps, e, e)
        + np.einsum("ABcd,ab,CD->AaBbCcDd", ph, e, e)
        + np.einsum("CDab,AB,cd->AaBbCcDd", ph, e, e)
        + 2
        * sc.lam
        * (
            np.einsum("AC,ac,BD,bd->AaBbCcDd", e, e, e, e)
            - np.einsum("AD,ad,BC,bc->AaBbCcDd", e, e, e, e)
        )
    )
    return R.reshape(4, 4, 4, 4)


def reconstruct_riemann(sc: SpinorCurvature, abc: tuple[float, float, float]) -> RiemannAt:
    """Coordinate Riemann tensor assembled from spinor parts at a point with W-block ``abc``."""
    Rf = riemann_frame_components(sc)
    t = tetrad_from_abc(*abc)
    Theta = np.linalg.inv(t.frame())  # d_i = sum_p Theta[p, i] e_p
    R_down = np.einsum("pqrs,pi,qj,rk,sl->ijkl", Rf, Theta, Theta, Theta, Theta)
    a, b, c = abc
    g_inv = np.array([[-a, -c, 1.0, 0.0], [-c, -b, 0.0, 1.0], [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
    return RiemannAt(R_updown=np.einsum("im,mjkl->ijkl", g_inv, R_down), R_down=R_down)


def decompose_riemann(R_down: np.ndarray, abc: tuple[float, float, float]) -> tuple[SpinorCurvature, float]:
    """Inverse of :func:`reconstruct_riemann` by least squares, with the fit residual.

    The twenty spinor parameters span the space of algebraic curvature
    tensors, so for a genuine Riemann tensor the residual is at rounding level.
    """

    def unpack(x):
        return SpinorCurvature(psi=x[0:5], psi_t=x[5:10], phi=x[10:19].reshape(3, 3), lam=x[19])

    cols = [reconstruct_riemann(unpack(np.eye(20)[k]), abc).R_down.ravel() for k in range(20)]
    M = np.array(cols).T
    x, *_ = np.linalg.lstsq(M, R_down.ravel(), rcond=None)
    return unpack(x), float(np.max(np.abs(M @ x - R_down.ravel())))


# consequences of the Walker structure -----------------------------------------------


def wps_residual(sc: SpinorCurvature) -> np.ndarray:
    """Components of ``Psi~_A'B'C'D' pi^C' pi^D' + 2 Lambda pi_A' pi_B'`` with pi = (1, 0).

    A symmetric 2-spinor has three components, ordered 0'0', 0'1', 1'1'.
    """
    return np.array([sc.psi_t[0], sc.psi_t[1], sc.psi_t[2] + 2 * sc.lam])


def ricci_wps_residual(sc: SpinorCurvature) -> np.ndarray:
    """``Phi_AB0'0'`` components ``(Phi_00, Phi_10, Phi_20)``."""
    return sc.phi[:, 0].copy()


def ricci_split(sc: SpinorCurvature) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric ``A_AB, B_AB`` with ``Phi = A pi pi + B pi_(A' xi_B')`` (dyad components)."""
    ph = ricci_spinor(sc.phi)
    A = ph[:, :, 1, 1].copy()
    B = -2.0 * ph[:, :, 0, 1]
    return A, B


def ricci_from_split(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Reassemble the 3x3 ``Phi_ij`` table from ``A_AB`` and ``B_AB``."""
    pi_low = np.array([0.0, 1.0])
    xi_low = np.array([-1.0, 0.0])
    sym = 0.5 * (np.outer(pi_low, xi_low) + np.outer(xi_low, pi_low))
    full = np.einsum("AB,ab->ABab", A, np.outer(pi_low, pi_low)) + np.einsum("AB,ab->ABab", B, sym)
    phi = np.zeros((3, 3))
    for i, j in product(range(3), repeat=2):
        A_, B_ = (0, i) if i < 2 else (1, 1)
        a_, b_ = (0, j) if j < 2 else (1, 1)
        phi[i, j] = full[A_, B_, a_, b_]
    return phi
