"""Algebraic classification of the Weyl curvature.

The self-dual block of a Walker metric always has eigenvalues
``-S/6, S/12, S/12``; its Jordan structure is fixed by ``(S, A, B)``:

=============  =====================================  ======================
case           condition                              Jordan form
=============  =====================================  ======================
FlatSD         S = A = B = 0                          zero matrix
Case_i_22Ia    S != 0, S^2 + A S + 3 B^2 = 0          diagonalizable
Case_ii        S != 0, S^2 + A S + 3 B^2 != 0         J1(-S/6) + J2(S/12)
Case_iii_4II   S = B = 0, A != 0                      J2(0) + J1(0)
Case_iv_31III  S = 0, B != 0                          J3(0)
=============  =====================================  ======================

All comparisons with zero are made against ``tol * scale`` (``tol * scale^2``
for the quadratic discriminant).  A quantity within a factor two of its
threshold makes the result *marginal*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .curvature import characteristic_coefficients, spectrum_residual, weyl_plus_spectrum


class WeylPlusCase(str, Enum):
    FLAT_SD = "FlatSD"
    CASE_I = "Case_i_22Ia"
    CASE_II = "Case_ii_double"
    CASE_III = "Case_iii_4II"
    CASE_IV = "Case_iv_31III"


JCF_LABELS = {
    WeylPlusCase.FLAT_SD: "0",
    WeylPlusCase.CASE_I: "diag(-S/6, S/12, S/12)",
    WeylPlusCase.CASE_II: "J1(-S/6) + J2(S/12)",
    WeylPlusCase.CASE_III: "J2(0) + J1(0)",
    WeylPlusCase.CASE_IV: "J3(0)",
}


@dataclass(frozen=True)
class WeylPlusClass:
    case: WeylPlusCase
    eigenvalues: tuple[float, float, float]
    discriminant: float
    inputs: tuple[float, float, float]  # (S, A, B)
    jcf_label: str
    scale: float
    tol: float
    marginal: bool = False

    def predicted_geometric(self) -> dict[float, int]:
        """Eigenvalue -> geometric multiplicity implied by the case."""
        S = self.inputs[0]
        return {
            WeylPlusCase.FLAT_SD: {0.0: 3},
            WeylPlusCase.CASE_I: {-S / 6: 1, S / 12: 2},
            WeylPlusCase.CASE_II: {-S / 6: 1, S / 12: 1},
            WeylPlusCase.CASE_III: {0.0: 2},
            WeylPlusCase.CASE_IV: {0.0: 1},
        }[self.case]


def _near(x: float, thr: float) -> bool:
    return thr / 2 < abs(x) <= 2 * thr


def classify_weyl_plus(S: float, A: float, B: float, scale: float, tol: float = 1e-8) -> WeylPlusClass:
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    # decide on unit-scale invariants so tiny or huge curvature cannot under/overflow
    s, a, b = S / scale, A / scale, B / scale
    disc_unit = s * s + a * s + 3 * b * b
    checks = [(s, tol)]
    if abs(s) > tol:
        checks.append((disc_unit, tol))
        case = WeylPlusCase.CASE_I if abs(disc_unit) <= tol else WeylPlusCase.CASE_II
    else:
        checks.append((b, tol))
        if abs(b) > tol:
            case = WeylPlusCase.CASE_IV
        else:
            checks.append((a, tol))
            case = WeylPlusCase.CASE_III if abs(a) > tol else WeylPlusCase.FLAT_SD
    disc = S * S + A * S + 3 * B * B
    return WeylPlusClass(
        case=case,
        eigenvalues=(-S / 6, S / 12, S / 12),
        discriminant=disc,
        inputs=(S, A, B),
        jcf_label=JCF_LABELS[case],
        scale=scale,
        tol=tol,
        marginal=any(_near(x, t) for x, t in checks),
    )


def default_scale(W_plus: np.ndarray, S: float) -> float:
    """``max|W+| + |S|``, or 1 when both vanish."""
    return float(np.max(np.abs(W_plus))) + abs(S) or 1.0


def numerical_rank(M: np.ndarray, thr: float) -> int:
    return int(np.sum(np.linalg.svd(M, compute_uv=False) > thr))


@dataclass(frozen=True)
class JcfReport:
    ok: bool
    eigenvalues: tuple[float, ...]  # measured, clustered
    predicted_geometric: dict
    measured_geometric: dict
    diagonalizable: bool
    char_poly_residual: float  # max coefficient difference, relative to scale^k
    details: list = field(default_factory=list)


def verify_jcf(W: np.ndarray, cls: WeylPlusClass, tol: float | None = None) -> JcfReport:
    """Compare measured multiplicities of ``W`` with those implied by ``cls``.

    Geometric multiplicity of ``lam`` is ``3 - rank(W - lam I)`` with singular
    values below ``tol * scale`` treated as zero.
    """
    tol = cls.tol if tol is None else tol
    thr = tol * cls.scale
    S = cls.inputs[0]
    predicted = cls.predicted_geometric()
    unit = W / cls.scale
    measured = {lam: 3 - numerical_rank(unit - lam / cls.scale * np.eye(3), tol) for lam in predicted}
    details = []
    ok = True
    for lam, geo in predicted.items():
        if measured[lam] != geo:
            ok = False
            details.append(f"eigenvalue {lam:.6g}: geometric multiplicity {measured[lam]}, expected {geo}")
    ev = weyl_plus_spectrum(W)
    if spectrum_residual(W, S) > thr:
        ok = False
        details.append(f"spectrum {ev.tolist()} differs from {[-S / 6, S / 12, S / 12]}")
    # compare on the unit-scale block so that tiny scales cannot underflow
    sc = cls.scale
    poly = characteristic_coefficients(W / sc)
    poly_expected = np.poly(np.array([-S / 6, S / 12, S / 12]) / sc)
    resid = float(np.max(np.abs(poly[1:] - poly_expected[1:])))
    if resid > tol:
        ok = False
        details.append(f"characteristic polynomial residual {resid:.3g}")
    diag = sum(measured.values()) == 3
    if cls.case in (WeylPlusCase.FLAT_SD, WeylPlusCase.CASE_I) and not diag:
        ok = False
        details.append("expected a diagonalizable block")
    return JcfReport(
        ok=ok,
        eigenvalues=tuple(float(x) for x in ev),
        predicted_geometric=predicted,
        measured_geometric=measured,
        diagonalizable=diag,
        char_poly_residual=float(resid),
        details=details,
    )


# anti-self-dual root structure ---------------------------------------------------------


@dataclass(frozen=True)
class RootPattern:
    label: str
    roots: tuple  # cluster centres (complex), infinity as None
    multiplicities: tuple[int, ...]


OVERLINE = "̅"


def _pattern_label(groups: list[tuple[int, bool]]) -> str:
    """``groups`` holds ``(multiplicity, is_complex_pair)``; pairs print as ``k k-bar``."""
    groups = sorted(groups, key=lambda g: (g[1], -g[0]))
    parts = []
    for k, is_pair in groups:
        parts.append(f"{k}{k}{OVERLINE}" if is_pair else str(k))
    return "{" + "".join(parts) + "}"


def classify_weyl_minus(psi: Sequence[float], tol: float = 1e-8, root_tol: float = 1e-3) -> RootPattern:
    """Multiplicity pattern of the roots of ``Psi0 + 4 Psi1 z + 6 Psi2 z^2 + 4 Psi3 z^3 + Psi4 z^4``.

    Coefficients below ``tol`` times the largest are dropped, and each dropped
    leading degree counts as a root at infinity.  Roots closer than
    ``root_tol * (1 + |z|)`` are merged, since a k-fold root is only resolved
    to about ``eps^(1/k)``.
    """
    psi = np.asarray(psi, dtype=float)
    coeffs = psi * np.array([1.0, 4.0, 6.0, 4.0, 1.0])  # ascending powers
    big = float(np.max(np.abs(coeffs)))
    if big == 0.0:
        return RootPattern("zero", (), ())
    coeffs = np.where(np.abs(coeffs) <= tol * big, 0.0, coeffs / big)
    deg = int(np.max(np.nonzero(coeffs)[0]))
    n_inf = 4 - deg
    roots = list(np.roots(coeffs[: deg + 1][::-1])) if deg > 0 else []
    clusters: list[list[complex]] = []
    for r in roots:
        for cl in clusters:
            ctr = np.mean(cl)
            if abs(r - ctr) <= root_tol * (1 + abs(ctr)):
                cl.append(r)
                break
        else:
            clusters.append([r])
    centres = [complex(np.mean(cl)) for cl in clusters]
    mults = [len(cl) for cl in clusters]
    groups = []
    used = set()
    for i, (z, k) in enumerate(zip(centres, mults)):
        if i in used:
            continue
        if abs(z.imag) <= root_tol * (1 + abs(z)):
            groups.append((k, False))
            continue
        for j in range(i + 1, len(centres)):
            if j not in used and abs(centres[j] - z.conjugate()) <= root_tol * (1 + abs(z)):
                used.add(j)
                break
        groups.append((k, True))
    if n_inf:
        groups.append((n_inf, False))
        centres.append(None)
        mults.append(n_inf)
    return RootPattern(_pattern_label(groups), tuple(centres), tuple(mults))
