"""Minkowski-base model: residual, induced metric, tanh family."""

import numpy as np
import pytest

from grassmin import geodesic, graph, lorentz, matlin


def sech2(u):
    return 1.0 / np.cosh(u) ** 2


def test_residual_zero_velocity():
    rng = np.random.default_rng(0)
    z = 0.4 * rng.normal(size=(3, 2))
    jet = geodesic.CurveJet(0.0, z, np.zeros((3, 2)), np.zeros((3, 2)))
    np.testing.assert_array_equal(lorentz.lorentz_residual(jet), np.zeros((3, 2)))


def test_tanh_jet_solves_equation():
    t = 0.8
    th, s2 = np.tanh(t), sech2(t)
    jet = geodesic.CurveJet(t, [[th]], [[s2]], [[-2.0 * th * s2]])
    assert np.linalg.norm(lorentz.lorentz_residual(jet)) <= 1e-12


def test_residual_breakdown_on_unit_slope():
    jet = geodesic.CurveJet(0.0, np.eye(1), np.eye(1), np.zeros((1, 1)))
    with pytest.raises(lorentz.SpacelikeBreakdownError):
        lorentz.lorentz_residual(jet)


def test_flat_metric_is_minkowski():
    jet = geodesic.CurveJet(0.0, np.zeros((3, 2)), np.zeros((3, 2)), np.zeros((3, 2)))
    g, sig, det_g = lorentz.lorentz_metric(jet, graph.AnsatzPoint(np.ones(3), 0.0))
    np.testing.assert_array_equal(g, np.diag([1.0, 1.0, 1.0, -1.0]))
    assert (sig.plus, sig.minus, sig.zero) == (3, 1, 0)
    assert det_g == pytest.approx(-1.0)


def test_tanh_metric_determinant_formula():
    spec = geodesic.SpectralBlock(4, 3, (0.7, 1.3))
    rng = np.random.default_rng(1)
    for _ in range(20):
        t = float(rng.uniform(-4, 4))
        x = rng.uniform(-5, 5, size=3)
        jet = lorentz.tanh_family_eval(spec, t)
        _, sig, det_g = lorentz.lorentz_metric(jet, graph.AnsatzPoint(x, t))
        lams = spec.lambdas
        prod = np.prod([sech2(lam * t) for lam in lams])
        expect = -prod * (
            1.0 + sum(lam**2 * xi**2 * sech2(lam * t) for lam, xi in zip(lams, x))
        )
        assert det_g == pytest.approx(expect, rel=1e-10)
        assert det_g < 0.0
        assert (sig.plus, sig.minus, sig.zero) == (3, 1, 0)


def test_tanh_metric_blocks_match_proof_values():
    spec = geodesic.SpectralBlock(4, 2, (0.9, 1.7))
    t = 1.2
    x = np.array([0.5, -2.0, 1.5])
    jet = lorentz.tanh_family_eval(spec, t)
    g, _, _ = lorentz.lorentz_metric(jet, graph.AnsatzPoint(x, t))
    # spatial block is diag(sech^2(lam_i t), ..., 1); its det is the product
    a = g[:3, :3]
    expect_a = np.diag([sech2(0.9 * t), sech2(1.7 * t), 1.0])
    np.testing.assert_allclose(a, expect_a, atol=1e-14)
    det_a = matlin.det(a)
    assert det_a == pytest.approx(sech2(0.9 * t) * sech2(1.7 * t), rel=1e-10)
    # corner Schur value D - C A^{-1} B
    _, a_inv = matlin.invert_with_det(a)
    schur = g[3, 3] - g[3, :3] @ a_inv @ g[:3, 3]
    expect_schur = -1.0 - (
        0.9**2 * x[0] ** 2 * sech2(0.9 * t) + 1.7**2 * x[1] ** 2 * sech2(1.7 * t)
    )
    assert schur == pytest.approx(expect_schur, rel=1e-10)


def test_tanh_family_initial_conditions():
    spec = geodesic.SpectralBlock(4, 3, (0.5, 2.0))
    jet = lorentz.tanh_family_eval(spec, 0.0)
    np.testing.assert_array_equal(jet.z, np.zeros((3, 3)))
    np.testing.assert_array_equal(jet.zd, spec.lam_tilde())


def test_tanh_family_stays_subunit():
    spec = geodesic.SpectralBlock(2, 1, (1.0,))
    jet = lorentz.tanh_family_eval(spec, 10.0)
    assert jet.z[0, 0] == pytest.approx(0.9999999958776927, abs=1e-12)
    assert np.linalg.norm(jet.z) < 1.0


def test_tanh_family_r_zero_is_constant():
    spec = geodesic.SpectralBlock(3, 2, ())
    jet = lorentz.tanh_family_eval(spec, 3.1)
    np.testing.assert_array_equal(jet.z, np.zeros((2, 2)))
    np.testing.assert_array_equal(jet.zd, np.zeros((2, 2)))


def test_tanh_residual_over_long_window():
    # sech^2(lam * 20) must clear the relative pivot threshold (1e-12 of the
    # matrix scale), i.e. lam <= ~0.7; past that the spacelike factor is
    # singular to working precision and the operator correctly refuses
    spec = geodesic.SpectralBlock(5, 4, (0.4, 0.6))
    for t in np.linspace(-20.0, 20.0, 81):
        jet = lorentz.tanh_family_eval(spec, float(t))
        assert np.linalg.norm(lorentz.lorentz_residual(jet)) <= 1e-10


def test_tanh_hits_spacelike_edge_when_saturated():
    # the representable edge: tanh(lam t) == 1.0 exactly for lam t >~ 18.72
    spec = geodesic.SpectralBlock(2, 1, (2.5,))
    jet = lorentz.tanh_family_eval(spec, 20.0)
    assert jet.z[0, 0] == 1.0
    with pytest.raises(lorentz.SpacelikeBreakdownError):
        lorentz.lorentz_residual(jet)


def test_det_form_with_flipped_sign_matches_lorentz_residual():
    # the bordered-determinant route with the Minkowski sign reproduces the
    # Lorentzian residual operator on arbitrary jets
    rng = np.random.default_rng(2)
    for _ in range(20):
        nm1 = int(rng.integers(1, 5))
        m = int(rng.integers(1, 5))
        z = 0.5 * rng.normal(size=(nm1, m))
        if np.linalg.norm(z, 2) >= 0.95:
            continue
        jet = geodesic.CurveJet(
            0.0, z, rng.normal(size=(nm1, m)), rng.normal(size=(nm1, m))
        )
        np.testing.assert_allclose(
            graph.mss_residual_det_form(jet, metric_sign=-1),
            lorentz.lorentz_residual(jet),
            atol=1e-11,
        )


def test_det_form_lorentz_vanishes_on_tanh_family():
    spec = geodesic.SpectralBlock(4, 3, (0.7, 1.3))
    for t in np.linspace(-5.0, 5.0, 11):
        jet = lorentz.tanh_family_eval(spec, float(t))
        assert np.max(np.abs(graph.mss_residual_det_form(jet, metric_sign=-1))) <= 1e-12
