import numpy as np
import pytest

from helpers import rand_point, rand_walker, rel_err
from walkergeom.curvature import (
    characteristic_coefficients,
    christoffels_walker,
    curvature_summary,
    euler_lagrange_acceleration,
    generic_curvature,
    geodesic_rhs,
    integrate_geodesic,
    literal_table_audit,
    riemann,
    spectrum_residual,
    weyl_blocks_generic,
    weyl_plus_spectrum,
)
from walkergeom.metric import general_metric, product_from_omega, walker_from_abc

FLAT = walker_from_abc("0", "0", "0")
P0 = (0.3, -0.4, 0.5, 0.2)


@pytest.fixture(scope="module")
def samples():
    rng = np.random.default_rng(17)
    return [(rand_walker(rng), rand_point(rng)) for _ in range(15)]


def test_flat_is_flat():
    s = curvature_summary(FLAT, P0)
    assert not np.any(s.christoffels)
    assert not np.any(s.riemann.R_down)
    assert s.S == 0.0
    assert not np.any(s.W_plus) and not np.any(s.W_minus) and not np.any(s.Z)
    assert not np.any(generic_curvature(FLAT, P0).riemann.R_down)


def test_christoffel_example():
    ch = christoffels_walker(walker_from_abc("u^2", "0", "0"), (3, 0, 0, 0))
    assert ch.gamma[0, 0, 2] == pytest.approx(3.0)


def test_christoffel_symmetry_and_parallel_plane(samples):
    for m, p in samples:
        G = christoffels_walker(m, p).gamma
        assert np.array_equal(G, G.transpose(0, 2, 1))
        # the u,v plane is parallel: no x or y components along it
        assert not np.any(G[2:, :, :2])


def test_riemann_example():
    R = riemann(walker_from_abc("u^2", "0", "0"), (0.4, 0.1, -0.2, 0.7))
    assert R.R_down[0, 2, 0, 2] == pytest.approx(1.0)


def test_scalar_example():
    m = walker_from_abc("u^2", "v^2", "0")
    for p in [(0, 0, 0, 0), (1, -2, 0.5, 3)]:
        assert curvature_summary(m, p).S == pytest.approx(4.0)


def test_closed_form_matches_oracle(samples):
    for m, p in samples:
        s = curvature_summary(m, p)
        gc = generic_curvature(m, p)
        assert rel_err(s.christoffels, gc.christoffels.gamma) < 1e-10
        assert rel_err(s.riemann.R_updown, gc.riemann.R_updown) < 1e-9
        assert rel_err(s.riemann.R_down, gc.riemann.R_down) < 1e-9
        assert rel_err(s.ricci, gc.ricci) < 1e-9
        assert abs(s.S - gc.S) < 1e-9 * max(1, abs(gc.S))
        assert rel_err(s.einstein, gc.einstein) < 1e-9
        assert rel_err(s.weyl, gc.weyl) < 1e-9


def test_generic_riemann_mode_matches(samples):
    m, p = samples[0]
    assert rel_err(riemann(m, p, "generic").R_down, riemann(m, p).R_down) < 1e-9
    with pytest.raises(ValueError):
        riemann(m, p, "symbolic")
    with pytest.raises(TypeError):
        riemann(product_from_omega("u*x+v*y"), p)


def test_riemann_symmetries(samples):
    for m, p in samples:
        R = curvature_summary(m, p).riemann.R_down
        tol = 1e-10 * max(1.0, np.max(np.abs(R)))
        assert np.max(np.abs(R + R.transpose(1, 0, 2, 3))) <= tol
        assert np.max(np.abs(R + R.transpose(0, 1, 3, 2))) <= tol
        assert np.max(np.abs(R - R.transpose(2, 3, 0, 1))) <= tol
        assert np.max(np.abs(R + R.transpose(0, 2, 3, 1) + R.transpose(0, 3, 1, 2))) <= tol


def test_einstein_traceless_and_weyl_tracefree(samples):
    for m, p in samples:
        s = curvature_summary(m, p)
        assert abs(np.trace(s.einstein)) < 1e-10 * max(1, np.max(np.abs(s.einstein)))
        gi = generic_curvature(m, p).metric.g_inv
        tr = np.einsum("ik,ijkl->jl", gi, s.weyl)
        assert np.max(np.abs(tr)) < 1e-9 * max(1, np.max(np.abs(s.weyl)))
        assert s.weyl[0, 1, 2, 3] == pytest.approx(s.S / 12, abs=1e-10 * max(1, abs(s.S)))


def test_endomorphism_trace(samples):
    # with the Ricci contraction used here the trace comes out as -S/2
    for m, p in samples:
        wb = weyl_blocks_generic(m, p)
        S = generic_curvature(m, p).S
        assert wb.trace == pytest.approx(-S / 2, abs=1e-10 * max(1, abs(S)))


def test_weyl_blocks_match_closed_form(samples):
    for m, p in samples:
        s = curvature_summary(m, p)
        wb = weyl_blocks_generic(m, p, frame="walker")
        assert rel_err(s.W_plus, wb.W_plus) < 1e-9
        assert rel_err(s.W_minus, wb.W_minus) < 1e-9
        assert rel_err(s.Z, wb.Z) < 1e-9
        # an arbitrary oriented frame changes the matrices but not the spectra
        auto = weyl_blocks_generic(m, p, frame="auto")
        scale = s.scale or 1.0
        assert np.max(np.abs(weyl_plus_spectrum(auto.W_plus) - weyl_plus_spectrum(s.W_plus))) < 1e-8 * scale
        ev_minus = np.sort(np.linalg.eigvals(s.W_minus).real)
        assert np.max(np.abs(np.sort(np.linalg.eigvals(auto.W_minus).real) - ev_minus)) < 1e-6 * max(1, np.max(np.abs(s.W_minus)))


def test_weyl_plus_eigenvalues(samples):
    for m, p in samples:
        s = curvature_summary(m, p)
        assert spectrum_residual(s.W_plus, s.S) < 1e-8 * (s.scale or 1.0)


def test_literal_tables_differ_only_at_known_entries(samples):
    known = {
        (1, 2, 3, 4), (1, 2, 4, 3), (1, 4, 2, 3), (1, 4, 3, 2),
        (1, 4, 1, 3), (1, 4, 3, 1), (3, 4, 1, 3), (3, 4, 3, 1), (4, 4, 1, 3), (4, 4, 3, 1),
    }
    for m, p in samples:
        for e in literal_table_audit(m, p):
            assert e.table == "R^i_jkl" and e.index in known, e


def test_signature_check():
    m = general_metric([["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "-1"]])
    with pytest.raises(ValueError, match="signature"):
        weyl_blocks_generic(m, P0)


# geodesics --------------------------------------------------------------------------


def test_flat_geodesic_is_straight():
    tr = integrate_geodesic(FLAT, (0, 0, 0, 0), (1, 2, 0, 0), 0.1, 10)
    assert np.allclose(tr.positions[-1], (1, 2, 0, 0), atol=1e-14)
    assert not np.any(geodesic_rhs(FLAT, P0, (1, -2, 3, 0.5)))


def test_null_plane_lines_are_geodesics(samples):
    for m, p in samples[:5]:
        assert not np.any(geodesic_rhs(m, p, (0.7, -1.3, 0, 0)))
        tr = integrate_geodesic(m, p, (0.7, -1.3, 0, 0), 0.05, 40)
        assert np.max(np.abs(tr.positions[:, 2:] - np.array(p[2:]))) < 1e-12
        assert np.allclose(tr.positions[:, 0], p[0] + 0.7 * tr.s, atol=1e-12)


def test_euler_equations_match(samples):
    rng = np.random.default_rng(9)
    for m, p in samples:
        vel = rng.uniform(-1, 1, 4)
        acc = geodesic_rhs(m, p, vel)
        assert rel_err(euler_lagrange_acceleration(m, p, vel), acc) < 1e-12


def test_integrator_arguments():
    with pytest.raises(ValueError):
        integrate_geodesic(FLAT, P0, (1, 0, 0, 0), 0.0, 5)
    with pytest.raises(ValueError):
        integrate_geodesic(FLAT, P0, (1, 0, 0, 0), 0.1, -1)


def test_nilpotent_cluster_is_merged():
    # a 3x3 nilpotent block: rounding splits the triple zero by ~eps^(1/3)
    N = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1e-16, 0.0, 0.0]])
    assert np.max(np.abs(weyl_plus_spectrum(N))) < 1e-15
    assert spectrum_residual(N, 0.0) < 1e-15


def test_characteristic_coefficients():
    rng = np.random.default_rng(13)
    for _ in range(20):
        M = rng.normal(size=(3, 3))
        assert np.allclose(characteristic_coefficients(M), np.poly(M), atol=1e-12)


def test_near_nilpotent_blocks_keep_the_spectrum_law():
    # large A, B with small S: entries dwarf the eigenvalues.  The polished
    # roots match the exact roots of the rounded block; what is left is the
    # rounding of the block entries, amplified by the eigenvalue condition.
    from walkergeom.closed_form import weyl_plus_matrix

    rng = np.random.default_rng(14)
    for _ in range(200):
        S = rng.uniform(-1, 1) * 10 ** rng.uniform(-4, 0)
        W = weyl_plus_matrix(S, rng.uniform(-30, 30), rng.uniform(-15, 15))
        assert spectrum_residual(W, S) < 1e-7 * (np.max(np.abs(W)) + abs(S))
