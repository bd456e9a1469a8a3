import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_point, rand_theta_metric, rand_walker, rel_err
from walkergeom import spinor as sp
from walkergeom.curvature import bivector_scalar, curvature_summary, generic_curvature
from walkergeom.metric import metric_at, walker_from_abc, walker_from_theta, walker_matrix

SQRT2 = np.sqrt(2.0)
FLAT = walker_from_abc("0", "0", "0")


@pytest.fixture(scope="module")
def samples():
    rng = np.random.default_rng(23)
    return [(rand_walker(rng), rand_point(rng)) for _ in range(12)]


abc = st.tuples(*(st.floats(-3, 3, allow_nan=False) for _ in range(3)))


# tetrad and bases -------------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(abc)
def test_tetrad_pairings(vals):
    t = sp.tetrad_from_abc(*vals)
    G = sp.tetrad_pairings(t, walker_matrix(*vals))
    assert np.allclose(G, sp.expected_pairings(), atol=1e-12)
    # l.n = 1 and m.m~ = -1, everything else zero
    E = sp.expected_pairings()
    assert E[0, 3] == 1.0 and E[1, 2] == -1.0
    # covectors are the metric duals of the vectors
    g = walker_matrix(*vals)
    for vec, low in ((t.l, t.l_low), (t.n, t.n_low), (t.m, t.m_low), (t.mt, t.mt_low)):
        assert np.allclose(g @ vec, low, atol=1e-12)


def test_flat_tetrad_is_witt_frame():
    t = sp.walker_tetrad(FLAT, (0.2, 0.1, 0.4, -0.3))
    assert np.array_equal(t.l, [1, 0, 0, 0])
    assert np.array_equal(t.n, [0, 0, 1, 0])
    assert np.array_equal(t.mt, [0, 1, 0, 0])
    assert np.array_equal(t.m, [0, 0, 0, -1])


def test_vector_spinor_dictionary():
    rng = np.random.default_rng(0)
    eta = np.diag([1.0, 1.0, -1.0, -1.0])
    for _ in range(20):
        v = rng.normal(size=4)
        assert 2 * np.linalg.det(sp.vector_to_spinor(v)) == pytest.approx(v @ eta @ v)
        # a null vector maps to a decomposable (singular) matrix
        w = np.array([v[0], v[1], *(np.hypot(v[0], v[1]) * np.array([np.cos(v[2]), np.sin(v[2])]))])
        assert abs(np.linalg.det(sp.vector_to_spinor(w))) < 1e-12 * (1 + w @ w)


def test_j_at_zero():
    expected = np.array([[5, 3, 0], [0, 0, 4], [-3, -5, 0]]) / (4 * SQRT2)
    assert np.allclose(sp.j_matrix(0.0), expected, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(abc)
def test_bases_and_changes_of_basis(vals):
    B = sp.bivector_bases_from_abc(*vals)
    assert np.allclose(B.J @ B.J_inv, np.eye(3), atol=1e-12 * max(1, vals[2] ** 4))
    assert np.allclose(B.K @ B.K_inv, np.eye(3), atol=1e-12)
    for j in range(3):
        assert np.allclose(B.Z_plus[j], sum(B.J[i, j] * B.s_plus_chart[i] for i in range(3)), atol=1e-9 * (1 + np.max(np.abs(vals)) ** 4))
        assert np.allclose(B.Z_minus[j], sum(B.K[i, j] * B.s_minus_chart[i] for i in range(3)), atol=1e-12)
    assert np.allclose(B.Z_minus[0], -B.s_minus_chart[0] / SQRT2)
    plus, minus = sp.chart_sd_bivectors(*vals)
    for x, y in zip(plus + minus, B.s_plus_chart + B.s_minus_chart):
        assert np.allclose(x, y, atol=1e-12 * (1 + np.max(np.abs(vals)) ** 2))


def test_bivector_scalar_products():
    vals = (0.3, -0.7, 0.45)
    B = sp.bivector_bases_from_abc(*vals)
    g = walker_matrix(*vals)
    for basis in (B.S_plus, B.S_minus, B.s_plus, B.s_minus):
        G = np.array([[bivector_scalar(X, Y, g) for Y in basis] for X in basis])
        assert np.allclose(G, np.diag([1.0, -1.0, -1.0]), atol=1e-12)
    cross = np.array([[bivector_scalar(X, Y, g) for Y in B.S_minus] for X in B.S_plus])
    assert np.allclose(cross, 0, atol=1e-12)


# curvature components ---------------------------------------------------------------


def test_flat_components_vanish():
    sc = sp.spinor_curvature(FLAT, (0.1, 0.2, 0.3, 0.4))
    assert sc.scale == 0.0


def test_u5_components():
    for u in (-0.8, 0.3, 1.0):
        p = (u, 0.2, -0.1, 0.6)
        sc = sp.spinor_curvature(walker_from_theta("u^5"), p)
        assert np.allclose(sc.psi, [-120 * u, 0, 0, 0, 0], atol=1e-10)
        assert sc.lam == 0.0
        orc = sp.spinor_curvature_oracle(walker_from_theta("u^5"), p, source="generic").components
        assert orc.max_abs_diff(sc) < 1e-10


def test_named_component_examples(samples):
    for m, p in samples:
        s = curvature_summary(m, p)
        sc = sp.spinor_curvature_from_summary(s)
        assert sc.psi_t[2] == pytest.approx(s.S / 12)
        assert sc.psi_t[3] == pytest.approx(-(s.B + s.S * s.abc[2]) / 8)
        assert sc.psi[0] == pytest.approx(s.derivs.b11 / 2)
        assert sc.phi[0, 1] == pytest.approx(-s.einstein_scalars["mu"] / 2)
        assert sc.lam == pytest.approx(-s.S / 24)


def test_components_match_oracle(samples):
    for m, p in samples:
        sc = sp.spinor_curvature(m, p)
        ref = max(1.0, sc.scale)
        for source in ("closed_form", "generic"):
            orc = sp.spinor_curvature_oracle(m, p, source=source)
            assert orc.fit_residual < 1e-10 * ref
            assert orc.components.max_abs_diff(sc) < 1e-9 * ref
            assert rel_err(orc.C_plus, orc.C_plus_display) < 1e-9


def test_oracle_source_validation(samples):
    with pytest.raises(ValueError):
        sp.spinor_curvature_oracle(*samples[0], source="tables")


def test_walker_structure_zeros(samples):
    for m, p in samples:
        sc = sp.spinor_curvature(m, p)
        ref = max(1.0, sc.scale)
        assert np.max(np.abs(sp.wps_residual(sc))) < 1e-10 * ref
        assert np.max(np.abs(sp.ricci_wps_residual(sc))) < 1e-10 * ref


def test_wps_residual_detects_violation():
    sc = sp.SpinorCurvature(np.zeros(5), np.array([1.0, 0, 0, 0, 0]), np.zeros((3, 3)), 0.0)
    assert sp.wps_residual(sc)[0] == 1.0


def test_ricci_split_round_trip(samples):
    for m, p in samples:
        sc = sp.spinor_curvature(m, p)
        A, B = sp.ricci_split(sc)
        assert np.allclose(A, A.T) and np.allclose(B, B.T)
        assert np.max(np.abs(sp.ricci_from_split(A, B) - sc.phi)) < 1e-10 * max(1, np.max(np.abs(sc.phi)))


# reconstruction ---------------------------------------------------------------------


def test_zero_spinors_give_zero_tensor():
    sc = sp.SpinorCurvature(np.zeros(5), np.zeros(5), np.zeros((3, 3)), 0.0)
    assert not np.any(sp.reconstruct_riemann(sc, (0.2, 0.3, 0.4)).R_down)


def test_lambda_only_is_constant_curvature():
    abc_vals = (0.2, -0.5, 0.7)
    sc = sp.SpinorCurvature(np.zeros(5), np.zeros(5), np.zeros((3, 3)), 1.0)
    R = sp.reconstruct_riemann(sc, abc_vals).R_down
    g = walker_matrix(*abc_vals)
    expected = 2 * (np.einsum("ac,bd->abcd", g, g) - np.einsum("ad,bc->abcd", g, g))
    assert np.allclose(R, expected, atol=1e-12)


def test_reconstruction_round_trip(samples):
    rng = np.random.default_rng(8)
    cases = samples + [(rand_theta_metric(rng), rand_point(rng)) for _ in range(4)]
    for m, p in cases:
        s = curvature_summary(m, p)
        sc = sp.spinor_curvature_from_summary(s)
        R = generic_curvature(m, p).riemann.R_down
        assert rel_err(sp.reconstruct_riemann(sc, s.abc).R_down, R) < 1e-8
        back, resid = sp.decompose_riemann(R, s.abc)
        assert resid < 1e-10 * max(1, np.max(np.abs(R)))
        assert back.max_abs_diff(sc) < 1e-8 * max(1, sc.scale)


def test_weyl_operator_layout():
    # symmetric operator built from components, and the least-squares inverse recovers them
    comps = np.array([0.3, -1.2, 0.5, 2.0, -0.7])
    C = sp.weyl_operator_matrix(comps)
    back, resid = sp._components_from_operator(C)
    assert resid < 1e-12
    assert np.allclose(back, comps)
    # the operator is trace-free
    assert abs(np.trace(C)) < 1e-12
