import numpy as np
import pytest

from helpers import rand_point, rand_poly, rand_theta_metric, rand_walker
from walkergeom import heavenly as hv
from walkergeom.curvature import curvature_summary, generic_curvature
from walkergeom.metric import product_from_omega, walker_from_abc, walker_from_theta
from walkergeom.spinor import spinor_curvature_oracle

P0 = (0.3, 0.2, -0.1, 0.4)
FLAT = walker_from_abc("0", "0", "0")


# parallel spinor -------------------------------------------------------------------


def test_lsr_residual_examples():
    r = hv.lsr_parallel_residual(walker_from_abc("u", "0", "0"), P0)
    assert r.values == (1.0, 0.0)
    assert r.factors == (0.5, 0.0)
    assert r.transverse == 0.0
    assert hv.lsr_parallel_residual(FLAT, P0).values == (0.0, 0.0)
    assert hv.lsr_parallel_residual(walker_from_theta("u^3*x + v^2*y^2"), P0).values == (0.0, 0.0)


def test_lsr_factors_are_half_the_residuals():
    rng = np.random.default_rng(41)
    for _ in range(15):
        r = hv.lsr_parallel_residual(rand_walker(rng), rand_point(rng))
        scale = max(1.0, abs(r.r1), abs(r.r2))
        assert abs(r.factors[0] - r.r1 / 2) < 1e-12 * scale
        assert abs(r.factors[1] - r.r2 / 2) < 1e-12 * scale
        assert r.transverse < 1e-12 * scale


# box operator ----------------------------------------------------------------------


def test_box_on_flat_space():
    assert hv.box_scalar(FLAT, "x^2", P0) == 0.0
    assert hv.box_scalar(FLAT, "u*x", P0) == 2.0
    assert hv.box_scalar(FLAT, "v*y", P0) == 2.0


def test_box_matches_generic_operator():
    rng = np.random.default_rng(42)
    for _ in range(20):
        m = rand_walker(rng)
        f = rand_poly(rng, 4, 0.3, 1.0)
        p = rand_point(rng)
        ref = hv.box_scalar_generic(m, f, p)
        assert hv.box_scalar(m, f, p) == pytest.approx(ref, rel=1e-10, abs=1e-10)


# theta potential -------------------------------------------------------------------


def test_u5_analysis():
    for u in (-0.6, 0.3, 1.1):
        rep = hv.theta_analysis("u^5", (u, 0.2, -0.1, 0.4))
        assert rep.P == 0.0 and rep.A_via_box == 0.0 and rep.A_closed_form == 0.0
        assert np.allclose(rep.psi_from_theta, [-120 * u, 0, 0, 0, 0], atol=1e-12)
        assert rep.einstein_affine_flag
        assert rep.second_heavenly_residual == 0.0


def test_cubic_potential_has_no_anti_self_dual_weyl():
    rep = hv.theta_analysis("u^3*x + v^3*y + u*v^2", P0)
    assert not np.any(rep.psi_from_theta)
    assert not rep.einstein_affine_flag


def test_potential_linear_in_u_gives_flat_metric():
    s = curvature_summary(walker_from_theta("u*sin(x)*exp(y)"), P0)
    assert not np.any(s.riemann.R_down)


def test_P_is_the_second_heavenly_expression():
    rng = np.random.default_rng(43)
    for _ in range(10):
        th = rand_poly(rng, 5, 0.3, 1.0)
        p = rand_point(rng)
        rep = hv.theta_analysis(th, p)
        assert rep.P == pytest.approx(rep.second_heavenly_residual, abs=1e-12)


def test_cross_check_random_potentials():
    rng = np.random.default_rng(44)
    for _ in range(15):
        m = rand_theta_metric(rng)
        cc = hv.cross_check_theta(m.theta, rand_point(rng))
        assert cc.passed, cc.failures()


def test_cross_check_reports_failing_keys():
    cc = hv.CrossCheck({"lsr": 0.0, "psi": 1.0}, 1e-8)
    assert not cc.passed and cc.failures() == ["psi"]


def test_w_preserving_gauge_terms_change_nothing():
    base = "u^3*x^2 + v^2*y*x + u*v^3*y"
    gauge = base + " + u*x*y^2 + sin(x) + v*exp(y) + x^3*y"
    for p in (P0, (-0.5, 0.7, 0.2, 0.1)):
        a, b = hv.theta_analysis(base, p), hv.theta_analysis(gauge, p)
        assert walker_from_theta(base).abc(p) == pytest.approx(walker_from_theta(gauge).abc(p))
        assert np.allclose(a.psi_from_theta, b.psi_from_theta)
        assert a.A_via_box == pytest.approx(b.A_via_box, rel=1e-10)


# second heavenly equation ----------------------------------------------------------


@pytest.mark.parametrize("Theta", ["u^2*sin(y)/2", "u^5 + 3*u", "u*v + u*x + u^5*exp(y)", "u^4*cos(y)"])
def test_heavenly_solutions_are_right_flat_and_ricci_flat(Theta):
    rng = np.random.default_rng(45)
    m = walker_from_theta(Theta)
    for _ in range(5):
        p = rand_point(rng)
        assert abs(hv.second_heavenly_residual(Theta, p)) < 1e-12
        s = curvature_summary(m, p)
        ref = max(1.0, s.scale)
        assert max(abs(s.S), abs(s.A), abs(s.B)) < 1e-8 * ref
        assert np.max(np.abs(s.W_plus)) < 1e-8 * ref
        assert np.max(np.abs(generic_curvature(m, p).ricci)) < 1e-8 * ref


def test_heavenly_violation_is_detected():
    # x-dependence in the u-linear part breaks the equation by its derivative
    assert hv.second_heavenly_residual("u^5 + u*x^2", P0) == pytest.approx(2 * P0[2])


# second null plane -----------------------------------------------------------------


def test_second_distribution_flat():
    r = hv.second_distribution_residual(FLAT, P0)
    assert r.max_abs == 0.0 and r.lam3 == 0.0 and r.lam4 == 0.0


def test_second_distribution_nonparallel_spinor_still_recurrent():
    r = hv.second_distribution_residual(walker_from_abc("u", "0", "0"), P0)
    assert r.max_abs == 0.0
    assert r.lam3 == -0.5
    assert np.any(r.nabla3)


def test_second_distribution_closed_form_matches_generic():
    rng = np.random.default_rng(46)
    for _ in range(15):
        m, p = rand_walker(rng), rand_point(rng)
        cf = hv.second_distribution_residual(m, p)
        ge = hv.second_distribution_residual(m, p, mode="generic")
        scale = max(1.0, np.max(np.abs(ge.nabla3)), np.max(np.abs(ge.nabla4)))
        assert np.max(np.abs(cf.nabla3 - ge.nabla3)) < 1e-10 * scale
        assert np.max(np.abs(cf.nabla4 - ge.nabla4)) < 1e-10 * scale


def test_second_distribution_mode_validation():
    with pytest.raises(ValueError):
        hv.second_distribution_residual(FLAT, P0, mode="tables")


def test_mn_bivector_is_null_and_simple():
    B = hv.mn_bivector(0.3, -0.7, 0.45)
    assert np.allclose(B, -B.T)
    # a simple bivector has vanishing Pfaffian
    assert B[0, 1] * B[2, 3] - B[0, 2] * B[1, 3] + B[0, 3] * B[1, 2] == pytest.approx(0.0, abs=1e-15)


# double Walker ---------------------------------------------------------------------


@pytest.mark.parametrize("theta", ["u^5", "u*v + u*x + u^5*exp(y)"])
def test_double_walker_identities_hold(theta):
    rep = hv.double_walker_identities(walker_from_theta(theta), P0)
    assert rep.precondition_ok and rep.passed


def test_double_walker_flat():
    assert hv.double_walker_identities(FLAT, P0).passed


def test_double_walker_precondition_flagged():
    rep = hv.double_walker_identities(walker_from_abc("u^2", "v*x", "u*y"), P0)
    assert not rep.precondition_ok and not rep.passed
    assert rep.precondition_residual > 1e-3


# para-Kähler ------------------------------------------------------------------------


def test_para_kahler_flat():
    rep = hv.para_kahler_analysis(product_from_omega("u*x + v*y"), P0)
    assert rep.det_D == 1.0 and rep.first_heavenly_residual == 0.0
    assert rep.w_plus_type == "zero" and rep.passed


def test_para_kahler_first_heavenly_residual():
    rng = np.random.default_rng(47)
    pm = product_from_omega("u*x + v*y + u^2*sin(x)")
    for _ in range(10):
        p = rand_point(rng, 0.5)
        rep = hv.para_kahler_analysis(pm, p)
        assert rep.first_heavenly_residual == pytest.approx(2 * p[0] * np.cos(p[2]), abs=1e-12)
        assert rep.passed, rep.checks


def test_para_kahler_random_potentials():
    rng = np.random.default_rng(48)
    for _ in range(10):
        pm = product_from_omega("u*x + v*y + " + rand_poly(rng, 4, 0.3, 0.3))
        rep = hv.para_kahler_analysis(pm, rand_point(rng, 0.5))
        assert rep.passed, rep.checks
        assert rep.det_g == pytest.approx(rep.det_D**2, rel=1e-12)


def test_para_kahler_singular_block():
    with pytest.raises(np.linalg.LinAlgError):
        hv.para_kahler_analysis(product_from_omega("u*x"), (0, 0, 0, 0))


def test_u5_oracle_agrees_with_potential_formulas():
    m = walker_from_theta("u^5")
    orc = spinor_curvature_oracle(m, P0, source="generic").components
    rep = hv.theta_analysis("u^5", P0)
    assert np.allclose(orc.psi, rep.psi_from_theta, atol=1e-10)
    assert np.allclose(orc.phi, rep.phi_from_theta, atol=1e-10)
