"""Curvature of Walker metrics: closed forms, a generic coordinate oracle, geodesics.

Sign conventions: ``R(X, Y)Z = nabla_[X,Y] Z - [nabla_X, nabla_Y] Z``,
``R_ijkl = g(R(X_k, X_l) X_j, X_i)``, so in coordinates

    R^i_jkl = d_l G^i_kj - d_k G^i_lj + G^m_kj G^i_lm - G^m_lj G^i_km

and the Ricci tensor is ``R_ab = R^c_bac``.  Arrays are 0-based:
``gamma[i, j, k] = G^i_jk``, ``R_updown[i, j, k, l] = R^i_jkl``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import closed_form as cf
from .closed_form import WalkerDerivs
from .metric import AnyMetric, MetricAt, Point4, WalkerMetric, metric_at, walker_matrix

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class Christoffels:
    gamma: np.ndarray  # (4, 4, 4), gamma[i, j, k] = G^i_jk
    dgamma: np.ndarray | None = None  # (4, 4, 4, 4), dgamma[l, i, j, k] = d_l G^i_jk


@dataclass(frozen=True)
class RiemannAt:
    R_updown: np.ndarray
    R_down: np.ndarray


@dataclass(frozen=True)
class CurvatureSummary:
    point: Point4
    abc: tuple[float, float, float]
    christoffels: np.ndarray
    riemann: RiemannAt
    ricci: np.ndarray
    S: float
    einstein: np.ndarray  # E^i_j
    einstein_scalars: dict
    weyl: np.ndarray  # C_ijkl
    block_scalars: dict  # P, Q, T, X, Y
    A: float
    B: float
    W_plus: np.ndarray
    W_minus: np.ndarray
    Z: np.ndarray
    derivs: WalkerDerivs = field(repr=False)

    @property
    def scale(self) -> float:
        """Magnitude reference for scale-relative thresholds."""
        return float(np.max(np.abs(self.W_plus))) + abs(self.S)


# generic oracle ---------------------------------------------------------------------


def _metric_derivatives(at: MetricAt) -> tuple[np.ndarray, np.ndarray]:
    """``dg[k, i, j] = d_k g_ij`` and ``ddg[k, l, i, j] = d_k d_l g_ij``."""
    deg = at.jets[0][0].degree
    dg = np.zeros((4, 4, 4))
    ddg = np.zeros((4, 4, 4, 4))
    for i in range(4):
        for j in range(4):
            jet = at.jets[i][j]
            if deg >= 1:
                for k in range(4):
                    dg[k, i, j] = jet.d(k + 1)
            if deg >= 2:
                for k in range(4):
                    for l in range(4):
                        ddg[k, l, i, j] = jet.d(k + 1, l + 1)
    return dg, ddg


def christoffels_generic(at: MetricAt) -> Christoffels:
    """Levi-Civita symbols and their first derivatives from metric jets (degree >= 2)."""
    dg, ddg = _metric_derivatives(at)
    gi = at.g_inv
    # lowered symbols G_mjk = (d_k g_mj + d_j g_mk - d_m g_jk) / 2
    low = 0.5 * (np.einsum("kmj->mjk", dg) + np.einsum("jmk->mjk", dg) - dg)
    gamma = np.einsum("im,mjk->ijk", gi, low)
    dlow = 0.5 * (
        np.einsum("lkmj->lmjk", ddg) + np.einsum("ljmk->lmjk", ddg) - ddg
    )
    dgi = -np.einsum("ia,lab,bm->lim", gi, dg, gi)
    dgamma = np.einsum("lim,mjk->lijk", dgi, low) + np.einsum("im,lmjk->lijk", gi, dlow)
    return Christoffels(gamma=gamma, dgamma=dgamma)


def riemann_from_christoffels(ch: Christoffels, g: np.ndarray) -> RiemannAt:
    G, dG = ch.gamma, ch.dgamma
    R = (
        np.einsum("likj->ijkl", dG)
        - np.einsum("kilj->ijkl", dG)
        + np.einsum("mkj,ilm->ijkl", G, G)
        - np.einsum("mlj,ikm->ijkl", G, G)
    )
    return RiemannAt(R_updown=R, R_down=np.einsum("im,mjkl->ijkl", g, R))


def ricci_from_riemann(R_updown: np.ndarray) -> np.ndarray:
    return np.einsum("cbac->ab", R_updown)


def weyl_from_riemann(R_down: np.ndarray, ricci: np.ndarray, g: np.ndarray, g_inv: np.ndarray) -> np.ndarray:
    S = float(np.einsum("ab,ab->", g_inv, ricci))
    E = ricci - S / 4 * g
    return (
        R_down
        - S / 12 * (np.einsum("ad,bc->abcd", g, g) - np.einsum("ac,bd->abcd", g, g))
        - 0.5
        * (
            np.einsum("ad,bc->abcd", g, E)
            - np.einsum("ac,bd->abcd", g, E)
            + np.einsum("bc,ad->abcd", g, E)
            - np.einsum("bd,ac->abcd", g, E)
        )
    )


@dataclass(frozen=True)
class GenericCurvature:
    point: Point4
    metric: MetricAt
    christoffels: Christoffels
    riemann: RiemannAt
    ricci: np.ndarray
    S: float
    einstein: np.ndarray  # E^i_j
    weyl: np.ndarray


def generic_curvature(m: AnyMetric, p: Sequence[float]) -> GenericCurvature:
    """Curvature of any metric from the coordinate formulas alone."""
    p = Point4.of(p)
    at = metric_at(m, p, degree=2)
    ch = christoffels_generic(at)
    rm = riemann_from_christoffels(ch, at.g)
    ric = ricci_from_riemann(rm.R_updown)
    S = float(np.einsum("ab,ab->", at.g_inv, ric))
    E = at.g_inv @ ric - S / 4 * np.eye(4)
    C = weyl_from_riemann(rm.R_down, ric, at.g, at.g_inv)
    return GenericCurvature(p, at, ch, rm, ric, S, E, C)


def riemann(m: AnyMetric, p: Sequence[float], mode: str = "closed_form") -> RiemannAt:
    if mode == "generic":
        return generic_curvature(m, p).riemann
    if mode != "closed_form":
        raise ValueError(f"unknown mode {mode!r}")
    if not isinstance(m, WalkerMetric):
        raise TypeError("closed-form curvature needs a WalkerMetric")
    d = walker_derivs(m, p)
    return RiemannAt(R_updown=cf.riemann_updown(d), R_down=cf.riemann_down(d))


# closed forms -------------------------------------------------------------------------


def walker_derivs(m: WalkerMetric, p: Sequence[float]) -> WalkerDerivs:
    return WalkerDerivs(*m.abc_jets(Point4.of(p), 2))


def christoffels_walker(m: WalkerMetric, p: Sequence[float]) -> Christoffels:
    return Christoffels(gamma=cf.christoffels(walker_derivs(m, p)))


def curvature_summary(m: WalkerMetric, p: Sequence[float]) -> CurvatureSummary:
    p = Point4.of(p)
    d = walker_derivs(m, p)
    S = cf.scalar(d)
    es = cf.einstein_scalars(d)
    bs = cf.block_scalars(d)
    A = cf.quantity_A(d)
    B = cf.quantity_B(d)
    return CurvatureSummary(
        point=p,
        abc=(d.a, d.b, d.c),
        christoffels=cf.christoffels(d),
        riemann=RiemannAt(cf.riemann_updown(d), cf.riemann_down(d)),
        ricci=cf.ricci(d),
        S=S,
        einstein=cf.einstein_endomorphism(d),
        einstein_scalars=es,
        weyl=cf.weyl(d),
        block_scalars=bs,
        A=A,
        B=B,
        W_plus=cf.weyl_plus_matrix(S, A, B),
        W_minus=cf.weyl_minus_matrix(**bs),
        Z=cf.z_matrix(d.c, es),
        derivs=d,
    )


@dataclass(frozen=True)
class AuditEntry:
    table: str
    index: tuple  # 1-based, as the tables are printed
    literal: float
    oracle: float


def literal_table_audit(m: WalkerMetric, p: Sequence[float], rel_tol: float = 1e-9) -> list[AuditEntry]:
    """Entries of the uncorrected closed-form tables that disagree with the oracle.

    Each table is compared against the generic computation with a tolerance
    relative to the largest oracle entry of that table.
    """
    d = walker_derivs(m, p)
    gc = generic_curvature(m, p)
    wb = weyl_blocks_generic(m, p, frame="walker")
    S = cf.scalar(d)
    A_lit = cf.quantity_A(d, literal=True)
    tables = [
        ("G^i_jk", cf.christoffels(d), gc.christoffels.gamma),
        ("R^i_jkl", cf.riemann_updown(d, literal=True), gc.riemann.R_updown),
        ("R_ijkl", cf.riemann_down(d, literal=True), gc.riemann.R_down),
        ("R_ij", cf.ricci(d), gc.ricci),
        ("E^i_j", cf.einstein_endomorphism(d), gc.einstein),
        ("C_ijkl", cf.weyl(d, literal=True), gc.weyl),
        ("A", np.array([A_lit]), np.array([-12.0 * wb.W_plus[0, 0]])),
        ("+W", cf.weyl_plus_matrix(S, A_lit, cf.quantity_B(d)), wb.W_plus),
        ("-W", cf.weyl_minus_matrix(**cf.block_scalars(d)), wb.W_minus),
        ("Z", cf.z_matrix(d.c, cf.einstein_scalars(d)), wb.Z),
    ]
    out = []
    for name, lit, ref in tables:
        tol = rel_tol * max(1.0, float(np.max(np.abs(ref))))
        for idx in zip(*np.nonzero(np.abs(lit - ref) > tol)):
            out.append(AuditEntry(name, tuple(int(i) + 1 for i in idx), float(lit[idx]), float(ref[idx])))
    return out


SPECTRUM_CLUSTER = 1e-4


def cluster_mean(values, width: float) -> np.ndarray:
    """Sort ``values`` and replace each run of points within ``width`` of its first by the run mean."""
    ev = np.sort(np.asarray(values, dtype=float))
    out = ev.copy()
    i = 0
    while i < len(ev):
        j = i + 1
        while j < len(ev) and ev[j] - ev[i] <= width:
            j += 1
        out[i:j] = ev[i:j].mean()
        i = j
    return out


def _char_poly(W: np.ndarray) -> tuple[Fraction, Fraction, Fraction]:
    """Exact ``(trace, sum of principal 2-minors, det)`` of the float entries of a 3x3 block."""
    M = [[Fraction(float(x)) for x in row] for row in W]
    tr = M[0][0] + M[1][1] + M[2][2]
    minors = sum(M[i][i] * M[j][j] - M[i][j] * M[j][i] for i, j in ((0, 1), (0, 2), (1, 2)))
    det = (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )
    return tr, minors, det


def characteristic_coefficients(W: np.ndarray) -> np.ndarray:
    """``[1, -tr W, sum of 2-minors, -det W]`` like ``np.poly``, formed exactly from the entries."""
    t, m, d = _char_poly(np.asarray(W, dtype=float))
    return np.array([1.0, float(-t), float(m), float(-d)])


def _polish(coeffs: tuple[Fraction, Fraction, Fraction], x: float, steps: int = 4) -> float:
    """Newton steps on ``l^3 - t l^2 + m l - d`` in exact arithmetic, keeping the best iterate."""
    t, m, d = coeffs
    best, best_res = x, None
    z = Fraction(x)
    for _ in range(steps + 1):
        val = ((z - t) * z + m) * z - d
        if best_res is None or abs(val) < best_res:
            best, best_res = float(z), abs(val)
        slope = (3 * z - 2 * t) * z + m
        if val == 0 or slope == 0:
            break
        z = Fraction(float(z - val / slope))
    return best


def _spectrum_groups(W: np.ndarray, cluster_tol: float) -> tuple[np.ndarray, list[tuple[int, int]]]:
    W = np.asarray(W, dtype=float)
    width = cluster_tol * (float(np.max(np.abs(W))) or 1.0)
    raw = np.linalg.eigvals(W)
    order = np.argsort(raw.real)
    re, im = raw.real[order], np.abs(raw.imag[order])
    groups, i = [], 0
    while i < 3:
        j = i + 1
        while j < 3 and re[j] - re[i] <= width:
            j += 1
        groups.append((i, j))
        i = j
    coeffs = _char_poly(W)
    out = re.copy()
    singles = [i for i, j in groups if j - i == 1]
    for i in singles:
        if im[i] <= width:
            out[i] = _polish(coeffs, float(re[i]))
    for i, j in groups:
        if j - i > 1:
            rest = sum((Fraction(float(out[k])) for k in singles), Fraction(0))
            out[i:j] = float((coeffs[0] - rest) / (j - i))
    return out, groups


def weyl_plus_spectrum(W: np.ndarray, cluster_tol: float = SPECTRUM_CLUSTER) -> np.ndarray:
    """Sorted real eigenvalues of a 3x3 block, with near-equal roots averaged.

    Strongly non-normal blocks (entries far larger than the eigenvalues) make
    the eigenvalues ill-conditioned, so the double-precision solver only
    supplies starting values.  Simple roots are then polished against the
    exact characteristic polynomial of the float entries.  Clusters within
    ``cluster_tol * max|W|`` (a defective k-fold root splits by O(eps^(1/k)))
    are replaced by their mean, which the exact trace fixes accurately.
    """
    return np.sort(_spectrum_groups(W, cluster_tol)[0])


def spectrum_residual(W: np.ndarray, S: float, cluster_tol: float = SPECTRUM_CLUSTER) -> float:
    """Largest gap between the spectrum of ``W`` and ``(-S/6, S/12, S/12)``.

    Predicted values are averaged over the same groups as the measured ones,
    so a cluster is compared with the mean of the values it stands for.
    """
    measured, groups = _spectrum_groups(W, cluster_tol)
    expected = np.sort([-S / 6, S / 12, S / 12])
    for i, j in groups:
        expected[i:j] = expected[i:j].mean()
    return float(np.max(np.abs(measured - expected)))


# bivectors and the curvature endomorphism ---------------------------------------------


def walker_frame(a: float, b: float, c: float) -> np.ndarray:
    """Columns are the pseudo-orthonormal frame vectors e1..e4 built from a Walker chart."""
    return np.array(
        [
            [(1 - a) / 2, -c, -(1 + a) / 2, -c],
            [0.0, (1 - b) / 2, 0.0, -(1 + b) / 2],
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
        ]
    )


def orthonormal_frame(g: np.ndarray) -> np.ndarray:
    """Frame with ``g(e_i, e_j) = diag(1, 1, -1, -1)`` and the coordinate orientation."""
    w, V = np.linalg.eigh(g)
    order = np.argsort(-w)
    w, V = w[order], V[:, order]
    if not (w[0] > 0 and w[1] > 0 and w[2] < 0 and w[3] < 0):
        raise ValueError(f"metric signature is not (2, 2): eigenvalues {w}")
    E = V / np.sqrt(np.abs(w))
    if np.linalg.det(E) < 0:
        E[:, 3] = -E[:, 3]
    return E


def wedge(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """``X ^ Y`` as the antisymmetric tensor ``X^a Y^b - Y^a X^b``."""
    return np.outer(X, Y) - np.outer(Y, X)


def bivector_basis(frame: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Self-dual and anti-self-dual bases built from an oriented pseudo-orthonormal frame."""
    e = [frame[:, i] for i in range(4)]
    plus = [
        (wedge(e[0], e[1]) + wedge(e[2], e[3])) / SQRT2,
        (wedge(e[0], e[2]) + wedge(e[1], e[3])) / SQRT2,
        (wedge(e[0], e[3]) - wedge(e[1], e[2])) / SQRT2,
    ]
    minus = [
        (wedge(e[0], e[1]) - wedge(e[2], e[3])) / SQRT2,
        (wedge(e[0], e[2]) - wedge(e[1], e[3])) / SQRT2,
        (wedge(e[0], e[3]) + wedge(e[1], e[2])) / SQRT2,
    ]
    return plus, minus


def curvature_operator(R_updown: np.ndarray, g_inv: np.ndarray):
    """Map ``F^cd -> 1/2 R^ab_cd F^cd`` on bivectors given as 4x4 arrays."""
    # R^ab_cd = g^bj R^a_jcd
    R_uu = np.einsum("bj,ajcd->abcd", g_inv, R_updown)
    return lambda F: 0.5 * np.einsum("abcd,cd->ab", R_uu, F)


def bivector_scalar(F: np.ndarray, G: np.ndarray, g: np.ndarray) -> float:
    """Induced scalar product ``1/2 F^ab G_ab``."""
    return 0.5 * float(np.einsum("ab,ac,bd,cd->", F, g, g, G))


def _coords(F: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    iu = np.triu_indices(4, 1)
    M = np.array([b[iu] for b in basis]).T
    sol, *_ = np.linalg.lstsq(M, F[iu], rcond=None)
    return sol


def operator_matrix(op, basis: list[np.ndarray]) -> np.ndarray:
    """Matrix with columns the coordinates of ``op(basis_j)`` in ``basis``."""
    return np.array([_coords(op(b), basis) for b in basis]).T


@dataclass(frozen=True)
class WeylBlocks:
    W_plus: np.ndarray
    W_minus: np.ndarray
    Z: np.ndarray
    full: np.ndarray  # 6x6 curvature endomorphism in (s+, s-) basis
    trace: float


def weyl_blocks_generic(
    m: AnyMetric, p: Sequence[float], frame: str | np.ndarray = "auto"
) -> WeylBlocks:
    """Curvature-endomorphism blocks by projection onto (anti-)self-dual bases.

    ``frame="walker"`` uses the frame built directly from the Walker chart (so
    the matrices are comparable entrywise with the closed forms); ``"auto"``
    uses a signature-aware orthonormalisation of the coordinate basis.
    """
    gc = generic_curvature(m, p)
    g, gi = gc.metric.g, gc.metric.g_inv
    if isinstance(frame, str):
        if frame == "walker":
            frame = walker_frame(g[2, 2], g[3, 3], g[2, 3])
        elif frame == "auto":
            frame = orthonormal_frame(g)
        else:
            raise ValueError(f"unknown frame {frame!r}")
    plus, minus = bivector_basis(frame)
    op = curvature_operator(gc.riemann.R_updown, gi)
    full = operator_matrix(op, plus + minus)
    # with this Ricci convention the endomorphism is (W-blocks) - S/12 on each half
    shift = gc.S / 12 * np.eye(3)
    trace = float(np.trace(full))
    return WeylBlocks(
        W_plus=full[:3, :3] + shift,
        W_minus=full[3:, 3:] + shift,
        Z=full[:3, 3:],
        full=full,
        trace=trace,
    )


# geodesics ------------------------------------------------------------------------------


@dataclass(frozen=True)
class GeodesicState:
    position: np.ndarray
    velocity: np.ndarray


def geodesic_rhs(m: AnyMetric, position: Sequence[float], velocity: Sequence[float]) -> np.ndarray:
    """Acceleration ``-G^i_jk v^j v^k``."""
    v = np.asarray(velocity, dtype=float)
    if isinstance(m, WalkerMetric):
        gamma = cf.christoffels(WalkerDerivs(*m.abc_first_order(position)))
    else:
        gamma = christoffels_generic(metric_at(m, position, 2)).gamma
    return -np.einsum("ijk,j,k->i", gamma, v, v)


def euler_lagrange_acceleration(m: WalkerMetric, position, velocity) -> np.ndarray:
    """Accelerations solved from the Euler equations of the Walker Lagrangian."""
    d = WalkerDerivs(*m.abc_jets(Point4.of(position), 1))
    a, b, c = d.a, d.b, d.c
    du, dv, dx, dy = velocity
    xdd = d.a1 / 2 * dx**2 + d.b1 / 2 * dy**2 + d.c1 * dx * dy
    ydd = d.a2 / 2 * dx**2 + d.b2 / 2 * dy**2 + d.c2 * dx * dy
    udd = -(
        d.a1 * du * dx + d.a2 * dv * dx + d.c1 * du * dy + d.c2 * dv * dy
        + (a * d.a1 + c * d.a2 + d.a3) / 2 * dx**2
        + (a * d.b1 + c * d.b2 - d.b3 + 2 * d.c4) / 2 * dy**2
        + (d.a4 + a * d.c1 + c * d.c2) * dx * dy
    )
    vdd = -(
        d.c1 * du * dx + d.c2 * dv * dx + d.b1 * du * dy + d.b2 * dv * dy
        + (c * d.a1 + b * d.a2 + 2 * d.c3 - d.a4) / 2 * dx**2
        + (c * d.b1 + b * d.b2 + d.b4) / 2 * dy**2
        + (d.b3 + c * d.c1 + b * d.c2) * dx * dy
    )
    return np.array([udd, vdd, xdd, ydd])


@dataclass(frozen=True)
class Trajectory:
    s: np.ndarray  # (n+1,)
    positions: np.ndarray  # (n+1, 4)
    velocities: np.ndarray  # (n+1, 4)
    norms: np.ndarray  # g(xdot, xdot) along the trajectory
    max_residual: float  # max |finite-difference acceleration - rhs| at the nodes

    @property
    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms - self.norms[0])))


def _norm(m: AnyMetric, pos, vel) -> float:
    if isinstance(m, WalkerMetric):
        g = walker_matrix(*(j.value for j in m.abc_first_order(pos)))
    else:
        g = metric_at(m, pos, 0).g
    return float(vel @ g @ vel)


def integrate_geodesic(
    m: AnyMetric, position: Sequence[float], velocity: Sequence[float], h: float, n: int
) -> Trajectory:
    """Fixed-step classical RK4 for the geodesic equations."""
    if not h > 0:
        raise ValueError("step size must be positive")
    if n < 0:
        raise ValueError("number of steps must be non-negative")
    y = np.concatenate([np.asarray(position, float), np.asarray(velocity, float)])

    def f(state):
        return np.concatenate([state[4:], geodesic_rhs(m, state[:4], state[4:])])

    states = [y]
    for _ in range(n):
        k1 = f(y)
        k2 = f(y + h / 2 * k1)
        k3 = f(y + h / 2 * k2)
        k4 = f(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        states.append(y)
    Y = np.array(states)
    pos, vel = Y[:, :4], Y[:, 4:]
    norms = np.array([_norm(m, p, v) for p, v in zip(pos, vel)])
    residual = 0.0
    if n >= 2:
        acc_fd = (vel[2:] - vel[:-2]) / (2 * h)
        acc = np.array([geodesic_rhs(m, p, v) for p, v in zip(pos[1:-1], vel[1:-1])])
        residual = float(np.max(np.abs(acc_fd - acc)))
    return Trajectory(np.arange(n + 1) * h, pos, vel, norms, residual)
