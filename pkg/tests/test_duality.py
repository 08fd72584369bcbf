"""The gauge section, the duality map, and the reduced mapping-class action."""

import numpy as np
import pytest

from rs3b import double as dbl
from rs3b import duality, linalg, system
from rs3b.errors import ConstraintViolation, NotOnConstraint
from rs3b.system import Coupling


def test_mu0_hand_values():
    c2 = Coupling(2, np.pi / 4)
    assert np.abs(duality.mu0_matrix(c2) - np.diag([1j, -1j])).max() < 1e-12
    c3 = Coupling(3, np.pi / 6)
    expected = np.diag(np.exp(1j * np.array([np.pi / 3, np.pi / 3,
                                             -2 * np.pi / 3])))
    assert np.abs(duality.mu0_matrix(c3) - expected).max() < 1e-12
    assert abs(np.linalg.det(duality.mu0_matrix(Coupling(5, 0.11))) - 1) < 1e-12


def test_g_matrix_n2_hand_value():
    c = Coupling(2, np.pi / 4)
    g = duality.g_matrix(c, np.array([np.pi / 2]))
    s = 1.0 / np.sqrt(2.0)
    assert np.abs(g - np.array([[s, s], [-s, s]])).max() < 1e-12


def test_g_matrix_special_unitary(coupling, rng):
    for _ in range(20):
        p = system.sample_local(coupling, rng)
        g = duality.g_matrix(coupling, p.xi)
        assert linalg.unitarity_defect(g) < 1e-12
        assert abs(np.linalg.det(g) - 1.0) < 1e-12


def test_section_hits_constraint_surface(coupling, rng):
    for _ in range(50):
        q = system.sample_dense_patch(coupling, rng)
        x = duality.f0_map(coupling, q)
        assert np.abs(dbl.moment(x.point) - x.mu0).max() < 1e-10


def test_section_spectra(c3, rng):
    for _ in range(30):
        q = system.sample_dense_patch(c3, rng)
        x = duality.f0_map(c3, q)
        assert np.abs(linalg.alcove_coordinates(x.point.b)
                      - system.position_map(c3, q)).max() < 1e-10
        assert np.abs(linalg.alcove_coordinates(x.point.a)
                      - system.action_map(c3, q)).max() < 1e-10


def test_section_roundtrip(coupling, rng):
    for _ in range(50):
        q = system.sample_dense_patch(coupling, rng)
        q2 = duality.f0_inverse(coupling, duality.f0_map(coupling, q))
        assert system.proj_distance(q, q2) < 1e-8


def test_constraint_point_rejects_generic_pair(c3, rng):
    x = dbl.DoublePoint(linalg.random_special_unitary(3, rng),
                        linalg.random_special_unitary(3, rng))
    with pytest.raises(ConstraintViolation):
        duality.ConstraintPoint(x, duality.mu0_matrix(c3))


def test_f0_inverse_revalidates(c3, rng):
    cp = duality.f0_map(c3, system.sample_dense_patch(c3, rng))
    bad = dbl.DoublePoint(linalg.random_special_unitary(3, rng), cp.point.b)
    object.__setattr__(cp, "point", bad)  # sidestep the constructor check
    with pytest.raises(NotOnConstraint):
        duality.f0_inverse(c3, cp)


def test_duality_exchanges_positions_and_actions(c3, rng):
    for _ in range(40):
        q = system.sample_dense_patch(c3, rng)
        sq = duality.duality_map(c3, q)
        assert np.abs(system.position_map(c3, sq)
                      - system.action_map(c3, q)).max() < 1e-8
        assert np.abs(system.action_map(c3, sq)
                      - system.position_map(c3, q)[::-1]).max() < 1e-8


def test_duality_order_four(c3, rng):
    q = system.sample_dense_patch(c3, rng)
    cur = q
    for _ in range(4):
        cur = duality.duality_map(c3, cur)
    assert system.proj_distance(cur, q) < 1e-6


def test_reduced_braid_relation(c3, rng):
    q = system.sample_dense_patch(c3, rng)
    s2 = duality.duality_map(c3, duality.duality_map(c3, q))
    cur = q
    for _ in range(3):
        cur = duality.duality_map(c3, duality.dehn_twist_map(c3, cur))
    assert system.proj_distance(cur, s2) < 1e-6


def test_involution_r(c3, rng):
    for _ in range(20):
        q = system.sample_dense_patch(c3, rng)
        rq = duality.involution_r(c3, q)
        assert system.proj_distance(duality.involution_r(c3, rq), q) < 1e-7
        # R exchanges the toric maps without reversing the index
        assert np.abs(system.position_map(c3, rq)
                      - system.action_map(c3, q)).max() < 1e-8
        assert np.abs(system.action_map(c3, rq)
                      - system.position_map(c3, q)).max() < 1e-8


def test_center_action_commutation(c3, rng):
    q = system.sample_dense_patch(c3, rng)
    lhs = duality.duality_map(c3, duality.center_action(c3, 1, 2, q))
    rhs = duality.center_action(c3, -2, 1, duality.duality_map(c3, q))
    assert system.proj_distance(lhs, rhs) < 1e-7


def test_symplectic_pullbacks(c3, rng):
    from rs3b.campaigns import map_symplectic_residuals
    for _ in range(10):
        p = system.sample_local(c3, rng, margin=1e-2)
        res_f0, res_s, res_r = map_symplectic_residuals(c3, p, rng)
        assert res_f0 < 1e-6
        assert res_s < 1e-6
        assert res_r < 1e-6
