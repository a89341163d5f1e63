"""Fixed-step RK4: accuracy, blow-up detection, conserved quantities."""

import numpy as np
import pytest

from grassmin import entire, geodesic, lorentz, matlin, ode

J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def rotation_reference(t):
    return np.array([[np.sin(t), -np.cos(t)], [np.cos(t), np.sin(t)]])


def test_constant_trajectory():
    rng = np.random.default_rng(0)
    z0 = rng.normal(size=(3, 2))
    run = ode.integrate(z0, np.zeros((3, 2)), 1.0, 1e-2)
    assert run.status == ode.COMPLETED
    for _, z, zd in run.samples:
        np.testing.assert_array_equal(z, z0)
        np.testing.assert_array_equal(zd, np.zeros((3, 2)))


def test_rotation_data_matches_closed_form():
    run = ode.integrate(-J, np.eye(2), 2.0 * np.pi, 1e-3)
    assert run.status == ode.COMPLETED
    t_fin, z_fin, _ = run.final
    assert t_fin == pytest.approx(2.0 * np.pi, abs=1e-12)
    assert np.linalg.norm(z_fin - rotation_reference(t_fin)) < 1e-9


def test_samples_strictly_increasing():
    run = ode.integrate(-J, np.eye(2), 0.05, 1e-3)
    ts = [t for t, _, _ in run.samples]
    assert all(b > a for a, b in zip(ts, ts[1:]))


def test_tan_family_blow_up():
    run = ode.integrate(np.zeros((1, 1)), np.eye(1), 4.0, 1e-3)
    assert run.status == ode.BLOW_UP
    assert run.stop_time == pytest.approx(np.pi / 2.0, abs=1e-2)
    _, z_fin, _ = run.final
    assert np.linalg.norm(z_fin) > ode.BLOW_UP_NORM or not np.isfinite(z_fin).all()


def test_lorentzian_tanh_family():
    spec = geodesic.SpectralBlock(4, 3, (0.7, 1.3))
    start = lorentz.tanh_family_eval(spec, 0.0)
    run = ode.integrate(start.z, start.zd, 3.0, 1e-3, "lorentzian")
    assert run.status == ode.COMPLETED
    t_fin, z_fin, _ = run.final
    expect = lorentz.tanh_family_eval(spec, t_fin).z
    assert np.max(np.abs(z_fin - expect)) < 1e-9


def test_lorentzian_breakdown_detected():
    # z(t) = tanh(a + b t) with z(0) close to 1 races to the spacelike
    # boundary; the run must stop with the determinant below threshold.
    run = ode.integrate([[0.999999]], [[1.0]], 1.0, 1e-6, "lorentzian")
    assert run.status == ode.CHART_BREAKDOWN
    _, z_fin, _ = run.final
    assert matlin.det(np.eye(1) - z_fin @ z_fin.T) < ode.LORENTZ_DET_MIN


def test_initial_state_violation_is_reported():
    run = ode.integrate([[1.0]], [[1.0]], 1.0, 1e-3, "lorentzian")
    assert run.status == ode.CHART_BREAKDOWN
    assert run.stop_time == 0.0
    assert len(run.samples) == 1


def test_rejects_bad_arguments():
    with pytest.raises(ValueError, match="step"):
        ode.integrate(np.zeros((1, 1)), np.zeros((1, 1)), 1.0, 0.0)
    with pytest.raises(ValueError, match="rhs_kind"):
        ode.integrate(np.zeros((1, 1)), np.zeros((1, 1)), 1.0, 0.1, "spherical")
    with pytest.raises(ValueError, match="shapes differ"):
        ode.integrate(np.zeros((1, 1)), np.zeros((2, 1)), 1.0, 0.1)


def test_energy_surrogate_constant():
    # chart-level geodesic speed: trace(Zd^T (I+ZZ^T)^{-1} Zd (I+Z^T Z)^{-1})
    run = ode.integrate(-J, np.eye(2), 2.0 * np.pi, 1e-3)
    energies = []
    for _, z, zd in run.samples[:: 50]:
        _, a_inv = matlin.invert_with_det(np.eye(2) + z @ z.T)
        _, g_inv = matlin.invert_with_det(np.eye(2) + z.T @ z)
        energies.append(float(np.trace(zd.T @ a_inv @ zd @ g_inv)))
    assert np.max(np.abs(np.array(energies) - energies[0])) < 1e-7


def test_time_reversal():
    t_turn = 1.5
    fwd = ode.integrate(-J, np.eye(2), t_turn, 1e-3)
    assert fwd.status == ode.COMPLETED
    _, z_turn, zd_turn = fwd.final
    back = ode.integrate(z_turn, -zd_turn, t_turn, 1e-3)
    assert back.status == ode.COMPLETED
    _, z_home, zd_home = back.final
    assert np.linalg.norm(z_home - (-J)) < 1e-8
    assert np.linalg.norm(zd_home - (-np.eye(2))) < 1e-8


def test_no_blow_up_on_certified_pair_over_ten_periods():
    bs = entire.BlockSpec(3, 2, ((1.0, ((0.0, 1.0),)),))
    spec, b = entire.build_odd_pair(bs)
    rep = entire.positivity_scan(spec, b, rational_lambdas=((1, 1), (1, 1)))
    assert rep.verdict == entire.CERTIFIED
    period = rep.scanned_interval[1]
    g = geodesic.closed_form_build(spec, b)
    start = geodesic.closed_form_eval(g, 0.0)
    run = ode.integrate(start.z, start.zd, 10.0 * period, 5e-3)
    assert run.status == ode.COMPLETED


def test_convergence_order_rotation():
    order = ode.convergence_order(-J, np.eye(2), 2.0, "euclidean", rotation_reference)
    assert 3.7 <= order <= 4.3


def test_convergence_order_exact_sentinel():
    z0 = np.full((2, 2), 0.3)
    order = ode.convergence_order(z0, np.zeros((2, 2)), 1.0, "euclidean", lambda t: z0)
    assert order == ode.EXACT_ORDER


def test_convergence_order_tanh():
    spec = geodesic.SpectralBlock(2, 1, (1.0,))
    start = lorentz.tanh_family_eval(spec, 0.0)
    order = ode.convergence_order(
        start.z, start.zd, 2.0, "lorentzian", lambda t: lorentz.tanh_family_eval(spec, t).z
    )
    assert 3.7 <= order <= 4.3


def test_convergence_order_propagates_reference_failure():
    def broken(t):
        raise geodesic.ChartBreakdownError(t)

    with pytest.raises(geodesic.ChartBreakdownError):
        ode.convergence_order(-J, np.eye(2), 1.0, "euclidean", broken)
