"""Flow integration, canonical brackets, action-angle structure."""

import numpy as np
import pytest

from rs3b import flows, system
from rs3b.errors import BoundaryApproach
from rs3b.system import Coupling, LocalPoint


@pytest.fixture
def base_point(c3):
    # fixed interior point whose energy flow stays inside the chart window
    return LocalPoint(np.array([0.75, 0.95]), np.array([0.4, -1.1]))


def test_coordinate_flow_is_translation(c3):
    # the generator theta_1 translates xi by nothing and ... vice versa:
    # f = xi_1 generates d theta_1/dt = 1/lam, everything else frozen
    p0 = LocalPoint(np.array([0.8, 0.9]), np.array([0.1, 0.2]))
    gen = flows.coordinate_generator("xi", 1)
    traj = flows.integrate_flow(c3, gen, p0, 1.5)
    assert np.abs(traj.final.xi - p0.xi).max() < 1e-9
    expected = p0.theta + np.array([1.5 / c3.lam, 0.0])
    assert np.abs(traj.final.theta - expected).max() < 1e-9


def test_energy_conservation(c3, base_point):
    h = flows.hamiltonian_generator(c3)
    traj = flows.integrate_flow(c3, h, base_point, 10.0, n_samples=50)
    h0 = h(base_point)
    drift = max(abs(h(traj.point(i)) - h0) for i in range(len(traj.t)))
    assert drift < 1e-7


def test_action_conservation_along_energy_flow(c3, base_point):
    report = flows.verify_action_angle(c3, base_point)
    assert report["skips"] == 0
    assert report["action_bracket_max"] < 1e-6
    assert report["mixed_bracket_max"] < 1e-6
    assert report["conservation_max"] < 1e-7
    assert report["periodicity_max"] < 1e-6


def test_flow_reversibility(c3, base_point):
    h = flows.hamiltonian_generator(c3)
    fwd = flows.integrate_flow(c3, h, base_point, 4.0)
    back = flows.integrate_flow(c3, lambda p: -h(p), fwd.final, 4.0)
    assert flows.torus_distance(back.final, base_point) < 1e-8


def test_lambda_rescales_time(base_point):
    # doubling lam halves the speed of the energy flow
    c1 = Coupling(3, 0.3, 1.0)
    c2 = Coupling(3, 0.3, 2.0)
    t1 = flows.integrate_flow(c1, flows.hamiltonian_generator(c1),
                              base_point, 2.0)
    t2 = flows.integrate_flow(c2, flows.hamiltonian_generator(c2),
                              base_point, 4.0)
    assert flows.torus_distance(t1.final, t2.final) < 1e-8


def test_flow_preserves_local_form(c3, base_point):
    # push two tangent vectors through the time-2 energy flow by finite
    # differences and compare the form before and after
    h = flows.hamiltonian_generator(c3)
    m = 2
    rng = np.random.default_rng(3)
    v = rng.standard_normal(2 * m)
    w = rng.standard_normal(2 * m)
    eps = 1e-4

    def flow_end(p):
        return flows.integrate_flow(c3, h, p, 2.0, tol_ode=1e-12).final

    def push(vec):
        pp = flow_end(LocalPoint(base_point.xi + eps * vec[:m],
                                 base_point.theta + eps * vec[m:]))
        pm = flow_end(LocalPoint(base_point.xi - eps * vec[:m],
                                 base_point.theta - eps * vec[m:]))
        dth = np.angle(np.exp(1j * (pp.theta - pm.theta)))
        return np.concatenate([pp.xi - pm.xi, dth]) / (2 * eps)

    before = system.local_form(v, w, c3.lam)
    after = system.local_form(push(v), push(w), c3.lam)
    # the floor is set by the finite-difference noise of the vector field
    assert abs(after - before) < 2e-5


def test_boundary_guard(c3):
    # start close to the xi_1 = y wall moving further toward it
    p0 = LocalPoint(np.array([c3.abs_y + 2e-3, 1.0]), np.array([0.0, 0.0]))
    gen = flows.coordinate_generator("theta", 1)  # d xi_1/dt = -1/lam
    with pytest.raises(BoundaryApproach) as err:
        flows.integrate_flow(c3, gen, p0, 1.0)
    assert 0.0 < err.value.t < 0.01


def test_trajectory_csv_format(tmp_path, c3, base_point):
    traj = flows.integrate_flow(c3, flows.hamiltonian_generator(c3),
                                base_point, 1.0, n_samples=5)
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t,xi_1,xi_2,theta_1,theta_2"
    assert len(lines) == 6
    row = np.array(lines[-1].split(","), dtype=float)
    assert row[0] == pytest.approx(1.0)
    # 17 significant digits survive the round-trip exactly
    assert np.abs(row[1:3] - traj.final.xi).max() == 0.0
