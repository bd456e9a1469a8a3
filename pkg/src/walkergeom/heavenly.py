"""Parallel spinors, potentials and the heavenly equations.

A Walker metric whose canonical spinor can be scaled to be parallel is built
from one potential ``theta`` with ``W = 2 [[-theta_vv, theta_uv],
[theta_uv, -theta_uu]]``.  Its curvature is then governed by

    P = theta_ux + theta_vy + theta_uu theta_vv - theta_uv^2,

the left-hand side of the second heavenly equation.  Double Walker
(paraKähler) metrics are handled in the off-diagonal block form driven by a
potential ``omega``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import spinor as sp
from .classify import numerical_rank
from .curvature import (
    christoffels_generic,
    curvature_summary,
    generic_curvature,
    spectrum_residual,
    weyl_blocks_generic,
    weyl_plus_spectrum,
)
from .expr import as_expr, eval_jet
from .jet import Jet
from .metric import ProductMetric, WalkerMetric, metric_at, walker_from_theta, Point4

# order of bivector components in residual vectors
BIVECTOR_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
BIVECTOR_NAMES = ("uv", "ux", "uy", "vx", "vy", "xy")


def _components(F: np.ndarray) -> np.ndarray:
    return np.array([F[i, j] for i, j in BIVECTOR_PAIRS])


def _bivector_from(comps: Sequence) -> np.ndarray:
    F = np.zeros((4, 4))
    for (i, j), v in zip(BIVECTOR_PAIRS, comps):
        F[i, j], F[j, i] = v, -v
    return F


def covariant_derivative_bivector(gamma: np.ndarray, F: np.ndarray, dF: np.ndarray) -> np.ndarray:
    """``out[k] = nabla_k F^ab`` from ``dF[k] = d_k F^ab`` and symbols ``gamma[i, j, k]``."""
    return dF + np.einsum("akc,cb->kab", gamma, F) + np.einsum("bkc,ac->kab", gamma, F)


# parallel spinor -------------------------------------------------------------------


@dataclass(frozen=True)
class LsrResidual:
    r1: float  # a_u + c_v
    r2: float  # b_v + c_u
    factors: tuple[float, float]  # d_x, d_y derivative of du^dv measured as multiples of du^dv
    transverse: float  # largest component of the derivatives not along du^dv

    @property
    def values(self) -> tuple[float, float]:
        return self.r1, self.r2


def lsr_parallel_residual(m: WalkerMetric, p: Sequence[float]) -> LsrResidual:
    """Residuals whose vanishing makes the canonical spinor parallel.

    Also differentiates ``d_u ^ d_v`` with the coordinate connection and reports
    the multiples along ``d_u ^ d_v`` for the ``x`` and ``y`` directions, which
    must be half the residuals.
    """
    a, b, c = m.abc_jets(Point4.of(p), 1)
    r1 = a.d(1) + c.d(2)
    r2 = b.d(2) + c.d(1)
    ch = christoffels_generic(metric_at(m, p, degree=2))
    F = _bivector_from([1.0, 0, 0, 0, 0, 0])
    nab = covariant_derivative_bivector(ch.gamma, F, np.zeros((4, 4, 4)))
    factors = (float(nab[2, 0, 1]), float(nab[3, 0, 1]))
    rest = nab.copy()
    rest[2] -= factors[0] * F
    rest[3] -= factors[1] * F
    return LsrResidual(float(r1), float(r2), factors, float(np.max(np.abs(rest))))


def box_scalar(m: WalkerMetric, f, p: Sequence[float]) -> float:
    """Laplace-Beltrami operator of a scalar in Walker form, from first and second partials."""
    p = Point4.of(p)
    a, b, c = (j.value for j in m.abc_jets(p, 0))
    aj, bj, cj = m.abc_jets(p, 1)
    fj = eval_jet(as_expr(f), p, 2)
    return _box_from_jets(fj, a, b, c, aj.d(1) + cj.d(2), bj.d(2) + cj.d(1))


def _box_from_jets(fj: Jet, a: float, b: float, c: float, r1: float, r2: float) -> float:
    d = fj.d
    return (
        -a * d(1, 1) - 2 * c * d(1, 2) - b * d(2, 2) + 2 * d(1, 3) + 2 * d(2, 4)
        - r1 * d(1) - r2 * d(2)
    )


def box_scalar_generic(m, f, p: Sequence[float]) -> float:
    """``g^ij (f_ij - G^k_ij f_k)`` for any metric."""
    at = metric_at(m, p, degree=2)
    ch = christoffels_generic(at)
    fj = eval_jet(as_expr(f), Point4.of(p), 2)
    grad = np.array([fj.d(k + 1) for k in range(4)])
    hess = np.array([[fj.d(i + 1, j + 1) for j in range(4)] for i in range(4)])
    return float(np.einsum("ij,ij->", at.g_inv, hess - np.einsum("kij,k->ij", ch.gamma, grad)))


# theta potential -------------------------------------------------------------------


@dataclass(frozen=True)
class HeavenlyReport:
    point: Point4
    lsr_residuals: tuple[float, float]
    P: float
    P_second: tuple[float, float, float]  # P_uu, P_uv, P_vv
    A_via_box: float
    A_closed_form: float
    second_heavenly_residual: float
    psi_from_theta: np.ndarray
    phi_from_theta: np.ndarray
    einstein_affine_flag: bool


def _theta_P(theta, p: Point4) -> tuple[Jet, Jet]:
    """Degree-4 jet of ``theta`` and the degree-2 jet of ``P``."""
    t = eval_jet(as_expr(theta), p, 4)
    tu, tv = t.diff(0), t.diff(1)
    P = tu.diff(2) + tv.diff(3) + tu.diff(0) * tv.diff(1) - tu.diff(1) * tu.diff(1)
    return t, P


def theta_analysis(theta, p: Sequence[float], tol: float = 1e-8) -> HeavenlyReport:
    p = Point4.of(p)
    m = walker_from_theta(theta)
    t, P = _theta_P(theta, p)
    a, b, c = (-2 * t.d(2, 2), -2 * t.d(1, 1), 2 * t.d(1, 2))
    lsr = lsr_parallel_residual(m, p)
    box = _box_from_jets(P, a, b, c, lsr.r1, lsr.r2)
    s = curvature_summary(m, p)
    psi = -np.array([t.d(1, 1, 1, 1), t.d(1, 1, 1, 2), t.d(1, 1, 2, 2), t.d(1, 2, 2, 2), t.d(2, 2, 2, 2)])
    P11, P12, P22 = P.d(1, 1), P.d(1, 2), P.d(2, 2)
    phi = np.zeros((3, 3))
    phi[0, 2], phi[1, 2], phi[2, 2] = P11, P12, P22
    ref = max(1.0, abs(P.value), float(np.max(np.abs(psi))))
    return HeavenlyReport(
        point=p,
        lsr_residuals=lsr.values,
        P=P.value,
        P_second=(P11, P12, P22),
        A_via_box=12 * box,
        A_closed_form=s.A,
        second_heavenly_residual=second_heavenly_residual(theta, p),
        psi_from_theta=psi,
        phi_from_theta=phi,
        einstein_affine_flag=max(abs(P11), abs(P12), abs(P22)) <= tol * ref,
    )


@dataclass(frozen=True)
class CrossCheck:
    residuals: dict
    tol: float

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.residuals.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.residuals.items() if v > self.tol]


def cross_check_theta(theta, p: Sequence[float], tol: float = 1e-8) -> CrossCheck:
    """Compare the potential-based formulas with the curvature of the built metric.

    Residuals are scaled by ``max(1, size of the quantities involved)``.
    The spinor components are taken from the coordinate oracle, so nothing
    here relies on the closed-form tables.
    """
    p = Point4.of(p)
    rep = theta_analysis(theta, p, tol)
    m = walker_from_theta(theta)
    s = curvature_summary(m, p)
    orc = sp.spinor_curvature_oracle(m, p, source="generic").components
    gc = generic_curvature(m, p)
    A = rep.A_via_box
    scale = max(1.0, abs(A), abs(s.A), float(np.max(np.abs(rep.psi_from_theta))), float(np.max(np.abs(rep.phi_from_theta))))
    expected_psi_t = np.array([0.0, 0.0, 0.0, 0.0, -A / 24])
    res = {
        "lsr": max(abs(x) for x in rep.lsr_residuals) / scale,
        "S": abs(gc.S) / scale,
        "B": abs(s.B) / scale,
        "A_box_vs_closed_form": abs(A - s.A) / scale,
        "A_box_vs_oracle": abs(A + 12 * weyl_blocks_generic(m, p, frame="walker").W_plus[0, 0]) / scale,
        "psi_tilde": float(np.max(np.abs(orc.psi_t - expected_psi_t))) / scale,
        "psi": float(np.max(np.abs(orc.psi - rep.psi_from_theta))) / scale,
        "phi": float(np.max(np.abs(orc.phi - rep.phi_from_theta))) / scale,
    }
    return CrossCheck(res, tol)


def second_heavenly_residual(Theta, p: Sequence[float]) -> float:
    """``Theta_ux + Theta_vy - Theta_uv^2 + Theta_uu Theta_vv``."""
    t = eval_jet(as_expr(Theta), Point4.of(p), 2)
    return t.d(1, 3) + t.d(2, 4) - t.d(1, 2) ** 2 + t.d(1, 1) * t.d(2, 2)


# second null distribution ----------------------------------------------------------


def _mn_jets(a: Jet, b: Jet, c: Jet) -> list[Jet]:
    """Components of ``m ^ n`` in the order of ``BIVECTOR_NAMES``."""
    one = Jet.constant(1.0, a.degree)
    return [(a * b - c * c) * 0.25, c * 0.5, a * -0.5, b * 0.5, c * -0.5, one]


def mn_bivector(a: float, b: float, c: float) -> np.ndarray:
    return _bivector_from([(a * b - c * c) / 4, c / 2, -a / 2, b / 2, -c / 2, 1.0])


@dataclass(frozen=True)
class SecondDistributionResidual:
    rho3: np.ndarray  # x-derivative of m^n minus its multiple, components as BIVECTOR_NAMES
    rho4: np.ndarray
    lam3: float
    lam4: float
    nabla3: np.ndarray  # unprojected derivatives
    nabla4: np.ndarray

    @property
    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.rho3)), np.max(np.abs(self.rho4))))


def _closed_form_nabla(m: WalkerMetric, p: Point4) -> tuple[np.ndarray, np.ndarray]:
    aj, bj, cj = m.abc_jets(p, 1)
    a, b, c = aj.value, bj.value, cj.value
    au, av, ax, ay = (aj.d(k) for k in range(1, 5))
    bu, bv, bx, by = (bj.d(k) for k in range(1, 5))
    cu, cv, cx, cy = (cj.d(k) for k in range(1, 5))
    bracket = np.array([(c * c - a * b) / 8, 0.0, a / 4, -b / 4, 0.0, -0.5])
    n3 = (au + cv) * bracket + np.array(
        [0, (2 * cx - 2 * ay - 2 * c * cv + b * av - a * cu) / 4, 0, 0,
         (2 * cx - 2 * ay + b * av - a * cu + 2 * c * au) / 4, 0]
    )
    n4 = (bv + cu) * bracket + np.array(
        [0, (2 * bx - 2 * cy - 2 * c * bv + b * cv - a * bu) / 4, 0, 0,
         (2 * bx - 2 * cy + 2 * c * cu + b * cv - a * bu) / 4, 0]
    )
    return n3, n4


def _generic_nabla(m, p: Point4) -> tuple[np.ndarray, np.ndarray]:
    at = metric_at(m, p, degree=2)
    ch = christoffels_generic(at)
    aj, bj, cj = m.abc_jets(p, 1)
    comps = _mn_jets(aj, bj, cj)
    F = _bivector_from([j.value for j in comps])
    dF = np.array([_bivector_from([j.d(k + 1) for j in comps]) for k in range(4)])
    nab = covariant_derivative_bivector(ch.gamma, F, dF)
    return _components(nab[2]), _components(nab[3])


def second_distribution_residual(m: WalkerMetric, p: Sequence[float], mode: str = "closed_form") -> SecondDistributionResidual:
    """Failure of ``m ^ n`` (the complementary null plane) to be parallel.

    ``m ^ n`` has unit ``xy`` component, so ``lam_k`` is the ``xy`` component
    of its derivative along ``x`` (k = 3) or ``y`` (k = 4), and the residual is
    the derivative minus ``lam_k * (m ^ n)``.  The derivatives along ``u`` and
    ``v`` vanish identically.
    """
    p = Point4.of(p)
    if mode == "closed_form":
        n3, n4 = _closed_form_nabla(m, p)
    elif mode == "generic":
        n3, n4 = _generic_nabla(m, p)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    mn = _components(mn_bivector(*m.abc(p)))
    lam3, lam4 = n3[5], n4[5]
    return SecondDistributionResidual(n3 - lam3 * mn, n4 - lam4 * mn, float(lam3), float(lam4), n3, n4)


@dataclass(frozen=True)
class DoubleWalkerReport:
    precondition_ok: bool
    precondition_residual: float
    residuals: dict
    tol: float

    @property
    def passed(self) -> bool:
        return self.precondition_ok and all(v <= self.tol for v in self.residuals.values())


def double_walker_identities(m: WalkerMetric, p: Sequence[float], tol: float = 1e-8) -> DoubleWalkerReport:
    """Curvature identities forced when the complementary plane field is also parallel."""
    p = Point4.of(p)
    s = curvature_summary(m, p)
    sc = sp.spinor_curvature_from_summary(s)
    sdr = second_distribution_residual(m, p)
    S, A, B, c = s.S, s.A, s.B, s.abc[2]
    scale = max(1.0, s.scale, abs(A), abs(B))
    A_ab, _ = sp.ricci_split(sc)
    res = {
        "B+Sc": abs(B + S * c) / scale,
        "3Bc-A-S": abs(3 * B * c - A - S) / scale,
        "A_AB": float(np.max(np.abs(A_ab))) / scale,
        "S^2+AS+3B^2": abs(S * S + A * S + 3 * B * B) / scale**2,
    }
    pre = sdr.max_abs / scale
    return DoubleWalkerReport(pre <= tol, pre, res, tol)


# paraKähler ------------------------------------------------------------------------


def _plane_residual(gamma: np.ndarray, i: int, j: int) -> float:
    """Largest component of the derivative of the constant bivector ``d_i ^ d_j`` off its own line."""
    F = np.zeros((4, 4))
    F[i, j], F[j, i] = 1.0, -1.0
    nab = covariant_derivative_bivector(gamma, F, np.zeros((4, 4, 4)))
    rest = nab - nab[:, i, j][:, None, None] * F
    return float(np.max(np.abs(rest)))


@dataclass(frozen=True)
class ParaKahlerReport:
    point: Point4
    det_D: float
    first_heavenly_residual: float
    omega: dict  # coefficients of dr^dx, dr^dy, ds^dx, ds^dy
    det_g: float
    einstein_mixing: float  # largest E entry coupling the two null planes, relative
    plane_residuals: tuple[float, float]  # failure of d_r^d_s and d_x^d_y to be parallel
    S: float
    w_plus_spectrum: tuple[float, float, float]
    w_plus_type: str  # "zero", "22Ia" or "other"
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def para_kahler_analysis(pm: ProductMetric, p: Sequence[float], tol: float = 1e-9) -> ParaKahlerReport:
    p = Point4.of(p)
    D = pm.d_block(p)
    det_D = float(np.linalg.det(D))
    if abs(det_D) <= 1e-14 * max(1.0, float(np.max(np.abs(D)))) ** 2:
        raise np.linalg.LinAlgError(f"D block is singular at {tuple(p)}")
    gc = generic_curvature(pm, p)
    E = gc.einstein
    e_scale = max(1.0, float(np.max(np.abs(E))))
    mixing = max(float(np.max(np.abs(E[2:, :2]))), float(np.max(np.abs(E[:2, 2:])))) / e_scale
    planes = (
        _plane_residual(gc.christoffels.gamma, 0, 1),
        _plane_residual(gc.christoffels.gamma, 2, 3),
    )
    wb = weyl_blocks_generic(pm, p, frame="auto")
    W = wb.W_plus
    S = gc.S
    scale = float(np.max(np.abs(W))) + abs(S) or 1.0
    ev = weyl_plus_spectrum(W)
    if np.max(np.abs(W)) <= tol * max(1.0, scale):
        kind = "zero"
    elif numerical_rank(W - S / 12 * np.eye(3), 1e-7 * scale) == 1:
        kind = "22Ia"
    else:
        kind = "other"
    checks = {
        "det_D_positive": det_D > 0,
        "det_g_is_det_D_squared": abs(gc.metric.det_g - det_D**2) <= 1e-12 * max(1.0, det_D**2),
        "einstein_preserves_planes": mixing <= tol,
        "null_planes_parallel": max(planes) <= tol * max(1.0, float(np.max(np.abs(gc.christoffels.gamma)))),
        "w_plus_22Ia_or_zero": kind in ("zero", "22Ia"),
        "w_plus_spectrum": spectrum_residual(W, S) <= 1e-8 * scale,
        "S_zero_iff_w_plus_zero": (abs(S) <= tol * max(1.0, scale)) == (kind == "zero"),
    }
    return ParaKahlerReport(
        point=p,
        det_D=det_D,
        first_heavenly_residual=det_D - 1.0,
        omega={"rx": D[0, 0], "ry": D[0, 1], "sx": D[1, 0], "sy": D[1, 1]},
        det_g=gc.metric.det_g,
        einstein_mixing=mixing,
        plane_residuals=planes,
        S=S,
        w_plus_spectrum=tuple(float(x) for x in ev),
        w_plus_type=kind,
        checks=checks,
    )
